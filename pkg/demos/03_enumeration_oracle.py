"""
Exhaustive ground truth on random buyer scenarios
=================================================

For tiny instances every allocation can be checked. The oracle reports the
optimal sets and rechecks the structural claims about buyer scenarios.
"""

import numpy as np

from fairalloc import GenSpec, enumerate_all, generate, verify_theorems
from fairalloc.oracle import violations

rng = np.random.default_rng(2024)
seeds = rng.integers(0, 2**32, size=20)

for seed in seeds:
    s = generate(GenSpec(3, 5, "buyer", price_range=(1, 20), seed=int(seed)))
    r = enumerate_all(s)
    bad = violations(verify_theorems(s, r))
    share_ef1 = r.set_flags["msw_u"]["ef1"].mean()
    print(f"seed {seed:10d}: |MSW_U|={len(r.msw_u_set):3d} |PO|={len(r.po_set):3d} "
          f"Nash={str(r.msw_nash_value):>8s} EF1 share in MSW_U={share_ef1:.2f} violations={len(bad)}")
