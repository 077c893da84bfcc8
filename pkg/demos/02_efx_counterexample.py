"""
Sorting makes the greedy EFX, but not EFX0
==========================================

With resources processed by descending price, the greedy allocation is EFX
on buyer scenarios. Removing a good the envier values at zero is a different
matter, as this instance shows.
"""

from fairalloc import Scenario, gamma_star, is_efx, is_efx0, processing_order, shared_goods, welfare
from fairalloc.checkers import efx0_sufficient_condition

s = Scenario.from_integers([
    [20, 0, 10, 2, 0, 0, 3, 1],
    [20, 0, 10, 2, 11, 19, 0, 1],
    [20, 9, 0, 2, 0, 19, 3, 1],
])
print("processing order:", processing_order(s))

a, _ = gamma_star(s)
print("allocation:", a, "utilities:", [int(u) for u in welfare(s, a).per_agent])
print("EFX :", is_efx(s, a).status.value)

v = is_efx0(s, a)
print("EFX0:", v.status.value)
for i, j, r in v.violations:
    print(f"  agent {i} still envies agent {j} after dropping r{r} (valued {s.value(i, r)} by agent {i})")

# The sufficient condition asks every envied bundle to sit inside the goods
# both agents value equally and positively. Agent 3 and agent 2 share only:
print("goods shared by agents 3 and 2:", shared_goods(s, 3, 2))
print("sufficient condition:", efx0_sufficient_condition(s, a).status.value)
