"""Plain ``key: value`` reports printed by the CLI, and their reader.

A verdict value reads ``STATUS[ witness=a,b,c][ violations=a,b,c;d,e,f][ mode=x][ reason=free text]``.
Witnesses are comma-joined 1-based indices: envier, envied[, resource] for
envy predicates, or a full assignment vector for PO and welfare checks.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .checkers import Status, Verdict
from .model import Allocation, format_rational


def fmt_value(x) -> str:
    if isinstance(x, (Fraction, int)):
        return format_rational(x)
    if isinstance(x, Allocation):
        return ",".join(map(str, x.assignment))
    if isinstance(x, tuple):
        return ",".join(fmt_value(v) for v in x)
    return str(x)


def fmt_verdict(v: Verdict) -> str:
    parts = [v.status.value]
    if v.witness is not None:
        parts.append(f"witness={fmt_value(v.witness)}")
    if v.status is Status.FAIL and len(v.violations) > 1:
        parts.append("violations=" + ";".join(fmt_value(w) for w in v.violations))
    if v.reason:
        key = "mode" if v.reason in ("buyer", "brute") else "reason"
        parts.append(f"{key}={v.reason}")
    return " ".join(parts)


def parse_verdict(text: str) -> dict:
    """Inverse of :func:`fmt_verdict` (witnesses come back as int tuples)."""
    head, _, rest = text.partition(" ")
    out: dict = {"status": head}
    while rest:
        if rest.startswith("reason="):
            out["reason"] = rest[len("reason="):]
            break
        token, _, rest = rest.partition(" ")
        key, _, val = token.partition("=")
        if key == "witness":
            out["witness"] = tuple(int(x) for x in val.split(","))
        elif key == "violations":
            out["violations"] = tuple(tuple(int(x) for x in w.split(",")) for w in val.split(";"))
        else:
            out[key] = val
    return out


def format_report(pairs: list[tuple[str, str]], fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(dict(pairs), indent=2) + "\n"
    for key, _ in pairs:
        if ": " in key or "\n" in key:
            raise ValueError(f"bad report key {key!r}")
    return "".join(f"{k}: {v}\n" for k, v in pairs)


def parse_report(text: str) -> dict[str, str]:
    """Read a text report back into an ordered ``{key: value}`` mapping."""
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    out = {}
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(": ")
        if not sep:
            key, value = line.rstrip(":"), ""
        out[key] = value
    return out
