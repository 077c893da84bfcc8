"""Command line entry point: ``fairalloc {gen,allocate,check,enumerate,bench}``.

Exit codes: 0 success, 1 an asserted theorem failed under ``enumerate``,
2 input error, 3 algorithm/scenario-class mismatch, 4 enumeration cap
exceeded. The enumeration cap defaults to ``FAIRALLOC_ENUM_CAP`` when set.
"""
from __future__ import annotations

import argparse
import sys

from . import enumeration
from .allocators import alg_identical, buyer_identical, gamma, gamma_star
from .bench import CSV_HEADER, PUBLISHED_TIMINGS, run_bench, scaling_fits
from .checkers import check_fairness, welfare
from .errors import CapExceeded, FairAllocError, NotIdenticalScenario
from .generators import GenSpec, generate
from .model import (
    ScenarioClass,
    format_rational,
    read_allocation,
    read_scenario,
    write_allocation,
    write_scenario,
)
from .oracle import enumerate_all, verify_theorems
from .report import fmt_value, fmt_verdict, format_report

EXIT_OK, EXIT_THEOREM, EXIT_INPUT, EXIT_CLASS, EXIT_CAP = 0, 1, 2, 3, 4


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _cap(args) -> int:
    return args.cap if args.cap is not None else enumeration.default_cap()


def _read_inputs(args):
    try:
        s = read_scenario(args.scenario)
        a = read_allocation(args.allocation) if getattr(args, "allocation", None) else None
    except OSError as exc:
        raise _Fail(EXIT_INPUT, f"cannot read input: {exc}") from exc
    return s, a


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_gen(args) -> list[tuple[str, str]]:
    spec = GenSpec(args.n, args.m, ScenarioClass(args.scenario_class), (args.price_min, args.price_max),
                   args.zero_prob, args.seed)
    s = generate(spec)
    try:
        write_scenario(s, args.out)
    except OSError as exc:
        raise _Fail(EXIT_INPUT, f"cannot write {args.out}: {exc}") from exc
    return [("path", args.out), ("class", s.scenario_class.value), ("n", str(s.n)), ("m", str(s.m)),
            ("seed", str(spec.seed))]


def _run_allocator(name: str, s, want_trace: bool):
    if name == "gamma":
        return gamma(s, trace=want_trace)
    if name == "gamma-star":
        return gamma_star(s, trace=want_trace)
    if name == "alg-identical":
        return alg_identical(s), None
    return buyer_identical(s), None


def cmd_allocate(args) -> list[tuple[str, str]]:
    s, _ = _read_inputs(args)
    try:
        alloc, trace = _run_allocator(args.algo, s, args.trace)
    except NotIdenticalScenario as exc:
        raise _Fail(EXIT_CLASS, str(exc)) from exc
    if args.out:
        try:
            write_allocation(alloc, args.out)
        except OSError as exc:
            raise _Fail(EXIT_INPUT, f"cannot write {args.out}: {exc}") from exc
    rep = welfare(s, alloc)
    out = [
        ("algorithm", args.algo),
        ("class", s.scenario_class.value),
        ("allocation", str(alloc)),
        ("per_agent", " ".join(format_rational(x) for x in rep.per_agent)),
        ("sw_u", format_rational(rep.sw_u)),
        ("sw_nash", format_rational(rep.sw_nash)),
        ("max_sw_u", format_rational(rep.max_sw_u)),
    ]
    if args.trace and trace is not None:
        for i, st in enumerate(trace.steps, 1):
            out.append((f"trace.{i}", f"resource={st.resource} alpha={format_rational(st.alpha)} "
                        f"candidates={fmt_value(st.candidates)} minimizers={fmt_value(st.minimizers)} "
                        f"chosen={st.chosen} partial={fmt_value(st.partial)}"))
    return out


def cmd_check(args) -> list[tuple[str, str]]:
    s, a = _read_inputs(args)
    enumerated = None
    if args.enumerate:
        enumerated = enumerate_all(s, cap=_cap(args))
    po_mode = args.po_mode
    if po_mode == "buyer" and not s.scenario_class.is_buyer:
        raise _Fail(EXIT_CLASS, f"--po-mode buyer needs a buyer scenario, got {s.scenario_class.value}")
    report = check_fairness(s, a, po_mode=po_mode, cap=_cap(args), enumerated=enumerated)
    out = [("class", s.scenario_class.value), ("allocation", str(a))]
    out += [(name, fmt_verdict(v)) for name, v in report.items()]
    return out


def cmd_enumerate(args) -> tuple[list[tuple[str, str]], bool]:
    s, _ = _read_inputs(args)
    r = enumerate_all(s, cap=_cap(args), chunk=args.chunk)
    checks = verify_theorems(s, r)
    out = [
        ("class", s.scenario_class.value),
        ("n", str(s.n)),
        ("m", str(s.m)),
        ("allocations", str(r.total)),
        ("msw_u_value", format_rational(r.msw_u_value)),
        ("msw_u_count", str(len(r.msw_u_set))),
        ("msw_nash_value", format_rational(r.msw_nash_value)),
        ("msw_nash_count", str(len(r.msw_nash_set))),
        ("maximal_support_size", str(r.maximal_support_size)),
        ("maximal_support_value", format_rational(r.maximal_support_value)),
        ("msw_nash_maximal_support_count", str(len(r.msw_nash_maximal_support_set))),
        ("po_count", str(len(r.po_set))),
    ]
    for key in ("ef", "efx0", "efx", "ef1", "po", "efx0_sufficient"):
        if key in r.counts:
            out.append((f"count.{key}", str(r.counts[key])))
    for c in checks:
        state = "n/a" if not c.applicable else ("holds" if c.holds else "violated")
        text = f"{state} {'asserted' if c.asserted else 'observed'}"
        if c.counterexample is not None:
            text += f" counterexample={fmt_value(c.counterexample)}"
        out.append((f"theorem.{c.name}", text))
    if args.dump:
        sections = [("msw_u", r.msw_u_set), ("msw_nash", r.msw_nash_set),
                    ("msw_nash_maximal_support", r.msw_nash_maximal_support_set), ("po", r.po_set)]
        try:
            with open(args.dump, "w", encoding="utf-8", newline="\n") as fh:
                for name, items in sections:
                    fh.write(f"# {name} {len(items)}\n")
                    fh.writelines(f"{a}\n" for a in items)
        except OSError as exc:
            raise _Fail(EXIT_INPUT, f"cannot write {args.dump}: {exc}") from exc
    return out, any(c.violated for c in checks)


def parse_sizes(text: str) -> list[int]:
    """``"10"``, ``"1000,2000"`` or inclusive ``"start:stop:step"``."""
    try:
        if ":" in text:
            start, stop, step = (int(x) for x in text.split(":"))
            if step < 1 or start > stop:
                raise ValueError
            sizes = list(range(start, stop + 1, step))
        else:
            sizes = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise _Fail(EXIT_INPUT, f"invalid size grid {text!r}") from exc
    if not sizes or min(sizes) < 1:
        raise _Fail(EXIT_INPUT, f"invalid size grid {text!r}")
    return sizes


def cmd_bench(args) -> str:
    sizes = parse_sizes(args.sizes)
    algos = [a for a in args.algos.split(",") if a]
    if args.trials < 1:
        raise _Fail(EXIT_INPUT, "--trials must be >= 1")
    try:
        records = run_bench(sizes, args.trials, algos, seed=args.seed)
    except ValueError as exc:
        raise _Fail(EXIT_INPUT, str(exc)) from exc
    lines = [CSV_HEADER] + [r.to_csv() for r in records]
    for a in algos:
        for fit in scaling_fits(records, a):
            lines.append(f"# fit {a} t=c*({fit.model}) c={fit.coefficient:.6e} r2={fit.r_squared:.4f}")
    for size in sizes:
        if size in PUBLISHED_TIMINGS:
            (bm, bs), (am, as_) = PUBLISHED_TIMINGS[size]
            lines.append(f"# published n={size} buyer-identical={bm:.4f}+-{bs:.4f} "
                         f"alg-identical={am:.4f}+-{as_:.4f}")
    text = "\n".join(lines) + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise _Fail(EXIT_INPUT, f"cannot write {args.out}: {exc}") from exc
    return text


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fairalloc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a random scenario file")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--class", dest="scenario_class", default="buyer",
                   choices=[c.value for c in ScenarioClass])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--price-min", type=int, default=1)
    g.add_argument("--price-max", type=int, default=1000)
    g.add_argument("--zero-prob", default=None)
    g.add_argument("--out", required=True)

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=["text", "json"], default="text")
    cap = argparse.ArgumentParser(add_help=False)
    cap.add_argument("--cap", type=int, default=None,
                     help=f"enumeration cap (default ${enumeration.CAP_ENV_VAR} or {enumeration.DEFAULT_CAP})")

    a = sub.add_parser("allocate", parents=[fmt], help="run an allocator on a scenario file")
    a.add_argument("--scenario", required=True)
    a.add_argument("--algo", required=True, choices=["gamma", "gamma-star", "alg-identical", "buyer-identical"])
    a.add_argument("--out", default=None, help="allocation file to write")
    a.add_argument("--trace", action="store_true")

    c = sub.add_parser("check", parents=[fmt, cap], help="fairness and efficiency report")
    c.add_argument("--scenario", required=True)
    c.add_argument("--allocation", required=True)
    c.add_argument("--po-mode", choices=["auto", "brute", "buyer", "off"], default="auto")
    c.add_argument("--enumerate", action="store_true", help="decide MSW_Nash membership by enumeration")

    e = sub.add_parser("enumerate", parents=[fmt, cap], help="exhaustive ground truth and theorem checks")
    e.add_argument("--scenario", required=True)
    e.add_argument("--dump", default=None, help="write every set, one allocation per line")
    e.add_argument("--chunk", type=int, default=None, help=argparse.SUPPRESS)

    b = sub.add_parser("bench", help="time the identical-valuation allocators")
    b.add_argument("--sizes", default="1000:10000:1000")
    b.add_argument("--trials", type=int, default=30)
    b.add_argument("--algos", default="buyer-identical,alg-identical")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", default=None)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "bench":
            sys.stdout.write(cmd_bench(args))
            return EXIT_OK
        violated = False
        if args.command == "gen":
            pairs = cmd_gen(args)
        elif args.command == "allocate":
            pairs = cmd_allocate(args)
        elif args.command == "check":
            pairs = cmd_check(args)
        else:
            pairs, violated = cmd_enumerate(args)
        sys.stdout.write(format_report(pairs, getattr(args, "format", "text")))
        return EXIT_THEOREM if violated else EXIT_OK
    except _Fail as exc:
        print(f"fairalloc: {exc}", file=sys.stderr)
        return exc.code
    except FairAllocError as exc:
        name, msg = type(exc).__name__, str(exc)
        print(f"fairalloc: {msg if msg.startswith(name) else f'{name}: {msg}'}", file=sys.stderr)
        if isinstance(exc, CapExceeded):
            return EXIT_CAP
        if isinstance(exc, NotIdenticalScenario):
            return EXIT_CLASS
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
