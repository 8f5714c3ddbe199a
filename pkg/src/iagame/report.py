"""Text formats shared by the CLI: observations, fractions, and report files.

Machine-readable artifacts carry a ``schema_version`` and are written with
sorted keys so that parsing a file and writing it again reproduces it byte
for byte.
"""

from __future__ import annotations

import csv
import io
import json
import re
from fractions import Fraction
from typing import Sequence

from .complexity import Unbounded, XorReport
from .prob import AccuracyVector, OutcomeCounts, Payoffs, ProductPrior, parse_rational

SCHEMA_VERSION = 1

_OBS = re.compile(r"^\s*v(\d+)\s*:\s*([TF])\s*(?:\*\s*(\d+))?\s*$", re.IGNORECASE)


def parse_observations(text: str, n: int) -> OutcomeCounts:
    """Parse ``v1:T,v2:F,v1:T*3`` into counts.  The empty string means no tests."""
    obs: list[tuple[int, bool]] = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        m = _OBS.match(item)
        if not m:
            raise ValueError(f"bad observation {item!r}; expected vK:T, vK:F or vK:T*m")
        k = int(m.group(1))
        if not 1 <= k <= n:
            raise ValueError(f"observation {item!r} names a variable outside v1..v{n}")
        times = int(m.group(3) or 1)
        obs.extend([(k - 1, m.group(2).upper() == "T")] * times)
    return OutcomeCounts.from_observations(n, obs)


def parse_rational_list(text: str, n: int, what: str) -> tuple[Fraction, ...]:
    """One rational for all ``n`` entries, or exactly ``n`` comma-separated ones."""
    parts = [parse_rational(s) for s in text.split(",")]
    if len(parts) == 1:
        return tuple(parts) * n
    if len(parts) != n:
        raise ValueError(f"{what} needs 1 or {n} values, got {len(parts)}")
    return tuple(parts)


def parse_prior(text: str | None, n: int) -> ProductPrior:
    if text is None or text.strip().lower() == "uniform":
        return ProductPrior.uniform(n)
    return ProductPrior(parse_rational_list(text, n, "--prior"))


def parse_alpha(text: str, n: int) -> AccuracyVector:
    return AccuracyVector(parse_rational_list(text, n, "--alpha"))


def parse_payoffs(text: str) -> Payoffs:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"--payoffs expects g,b, got {text!r}")
    return Payoffs(parse_rational(parts[0]), parse_rational(parts[1]))


def parse_grid(text: str) -> tuple[Fraction, ...]:
    grid = tuple(parse_rational(s) for s in text.split(","))
    if any(not 0 < c <= 1 for c in grid):
        raise ValueError("every C must satisfy 0 < C <= 1")
    return grid


def fmt(x: Fraction | None, digits: int = 6) -> str:
    """Exact fraction with a decimal annotation, e.g. ``19/20 (0.950000)``."""
    if x is None:
        return "-"
    x = Fraction(x)
    return f"{x} ({float(x):.{digits}f})"


def cpl_to_str(c: int | Unbounded) -> str:
    return str(c)


def cpl_from_str(text: str) -> int | Unbounded:
    if text.startswith(">"):
        return Unbounded(int(text[1:]))
    return int(text)


def xor_report_to_dict(r: XorReport) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "n": r.n,
        "alpha": str(r.alpha),
        "q": str(r.q),
        "k_max": r.k_max,
        "xor_cpl": cpl_to_str(r.xor_cpl),
        "xnor_cpl": cpl_to_str(r.xnor_cpl),
        "maximal": r.maximal,
        "distribution": r.distribution,
        "violations": list(r.violations),
    }
    if r.per_table is not None:
        out["per_table"] = r.per_table
    return out


def xor_report_from_dict(data: dict) -> XorReport:
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {version!r}")
    return XorReport(
        n=data["n"],
        alpha=Fraction(data["alpha"]),
        q=Fraction(data["q"]),
        k_max=data["k_max"],
        xor_cpl=cpl_from_str(data["xor_cpl"]),
        xnor_cpl=cpl_from_str(data["xnor_cpl"]),
        maximal=data["maximal"],
        distribution=dict(data["distribution"]),
        per_table=data.get("per_table"),
        violations=list(data.get("violations", [])),
    )


def to_json(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def to_csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def xor_report_csv(r: XorReport) -> str:
    """``table_bits,cpl`` per table when kept, otherwise ``cpl,count`` per value."""
    if r.per_table is not None:
        return to_csv([["table_bits", "cpl"], *sorted(r.per_table.items())])
    return to_csv([["cpl", "count"], *r.distribution.items()])
