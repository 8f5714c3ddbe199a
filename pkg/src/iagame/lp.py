"""Exact rational linear programming.

A dense-tableau two-phase primal simplex with Bland's rule.  Arithmetic runs
on ``gmpy2.mpq`` for speed; everything crossing the public API is a
:class:`fractions.Fraction`.  The programs solved here are tiny (a handful of
variables, at most a few hundred rows), so the dense tableau is adequate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq


class Relation(enum.Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class Status(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


class LPInvariantError(AssertionError):
    """A returned point failed exact re-substitution; indicates a solver bug."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating-point LP data is not accepted")
    return Fraction(x)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(_frac(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", _frac(self.rhs))

    def lhs(self, point: Sequence[Fraction]) -> Fraction:
        return sum((c * x for c, x in zip(self.coeffs, point) if c), Fraction(0))

    def holds(self, point: Sequence[Fraction]) -> bool:
        v = self.lhs(point)
        if self.relation is Relation.LE:
            return v <= self.rhs
        if self.relation is Relation.GE:
            return v >= self.rhs
        return v == self.rhs


@dataclass
class LinearProgram:
    """Optimize ``objective . x`` subject to constraints and per-variable bounds.

    Variables default to ``x >= 0`` with no upper bound.  A lower bound of
    ``None`` makes a variable free below.
    """

    num_vars: int
    objective: tuple[Fraction, ...]
    constraints: list[Constraint] = field(default_factory=list)
    maximize: bool = False
    lower: list[Fraction | None] | None = None
    upper: list[Fraction | None] | None = None
    names: list[str] | None = None

    def __post_init__(self) -> None:
        self.objective = tuple(_frac(c) for c in self.objective)
        if len(self.objective) != self.num_vars:
            raise ValueError("objective length does not match num_vars")
        if self.lower is None:
            self.lower = [Fraction(0)] * self.num_vars
        if self.upper is None:
            self.upper = [None] * self.num_vars
        self.lower = [None if b is None else _frac(b) for b in self.lower]
        self.upper = [None if b is None else _frac(b) for b in self.upper]
        if len(self.lower) != self.num_vars or len(self.upper) != self.num_vars:
            raise ValueError("bound vectors must have num_vars entries")
        if self.names is None:
            self.names = [f"x{j + 1}" for j in range(self.num_vars)]
        for con in self.constraints:
            if len(con.coeffs) != self.num_vars:
                raise ValueError("constraint length does not match num_vars")

    def add(self, coeffs, relation: Relation, rhs) -> "LinearProgram":
        if len(coeffs) != self.num_vars:
            raise ValueError("constraint length does not match num_vars")
        self.constraints.append(Constraint(tuple(coeffs), relation, rhs))
        return self

    def copy(self) -> "LinearProgram":
        return LinearProgram(
            self.num_vars,
            self.objective,
            list(self.constraints),
            self.maximize,
            list(self.lower),
            list(self.upper),
            list(self.names),
        )

    def feasible(self, point: Sequence[Fraction]) -> bool:
        for j, x in enumerate(point):
            lo, hi = self.lower[j], self.upper[j]
            if (lo is not None and x < lo) or (hi is not None and x > hi):
                return False
        return all(con.holds(point) for con in self.constraints)

    def value_at(self, point: Sequence[Fraction]) -> Fraction:
        return sum((c * x for c, x in zip(self.objective, point)), Fraction(0))


@dataclass(frozen=True)
class LPSolution:
    status: Status
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class _Tableau:
    """Rows ``A y = b`` with ``b >= 0`` and an explicit basis."""

    def __init__(self, rows: list[list], rhs: list, basis: list[int], ncols: int):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        p = row[c]
        if p != 1:
            inv = 1 / p
            self.rows[r] = row = [x * inv for x in row]
            self.rhs[r] *= inv
        b = self.rhs[r]
        nz = [(j, x) for j, x in enumerate(row) if x]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                for j, x in nz:
                    other[j] -= f * x
                self.rhs[i] -= f * b
        self.basis[r] = c

    def reduced_costs(self, cost: list, allowed: int) -> list:
        red = list(cost[:allowed])
        for i, bv in enumerate(self.basis):
            cb = cost[bv]
            if cb:
                row = self.rows[i]
                for j in range(allowed):
                    if row[j]:
                        red[j] -= cb * row[j]
        return red

    def optimize(self, cost: list, allowed: int) -> bool:
        """Minimize ``cost . y`` over the first ``allowed`` columns; False if unbounded."""
        while True:
            red = self.reduced_costs(cost, allowed)
            enter = next((j for j in range(allowed) if red[j] < 0), -1)
            if enter < 0:
                return True
            best_r, best_ratio = -1, None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[i] < self.basis[best_r])
                    ):
                        best_r, best_ratio = i, ratio
            if best_r < 0:
                return False
            self.pivot(best_r, enter)


def _standard_form(lp: LinearProgram):
    """Substitute bounds so every working variable is nonnegative.

    Returns ``(maps, rows)`` where ``maps[j] = (offset, [(col, coef), ...])``
    expresses original ``x_j`` in working columns and ``rows`` is a list of
    ``(coeffs, relation, rhs)`` over the working columns.
    """
    maps = []
    ncols = 0
    extra_rows = []
    for j in range(lp.num_vars):
        lo, hi = lp.lower[j], lp.upper[j]
        if lo is not None:
            maps.append((mpq(lo), [(ncols, mpq(1))]))
            if hi is not None:
                extra_rows.append(({ncols: mpq(1)}, Relation.LE, mpq(hi - lo)))
            ncols += 1
        elif hi is not None:
            maps.append((mpq(hi), [(ncols, mpq(-1))]))
            ncols += 1
        else:
            maps.append((mpq(0), [(ncols, mpq(1)), (ncols + 1, mpq(-1))]))
            ncols += 2
    rows = []
    for con in lp.constraints:
        coeffs: dict[int, object] = {}
        rhs = mpq(con.rhs)
        for j, a in enumerate(con.coeffs):
            if not a:
                continue
            a = mpq(a)
            off, terms = maps[j]
            rhs -= a * off
            for col, s in terms:
                coeffs[col] = coeffs.get(col, 0) + a * s
        rows.append((coeffs, con.relation, rhs))
    rows.extend(extra_rows)
    return maps, rows, ncols


def solve(lp: LinearProgram) -> LPSolution:
    """Exact optimum of ``lp`` with a certifying point."""
    maps, rows, nstruct = _standard_form(lp)
    nrows = len(rows)
    # column layout: structural | slack/surplus | artificial
    nslack = sum(1 for _, rel, _ in rows if rel is not Relation.EQ)
    first_art = nstruct + nslack
    table, rhs, basis = [], [], []
    slack_col = nstruct
    art_cols = []
    for coeffs, rel, b in rows:
        sign = -1 if b < 0 else 1
        row = [mpq(0)] * first_art
        for col, a in coeffs.items():
            row[col] = a * sign
        b = b * sign
        if rel is not Relation.EQ:
            row[slack_col] = mpq(1 if (rel is Relation.LE) == (sign > 0) else -1)
            slack_basic = row[slack_col] > 0
            slack_col += 1
        else:
            slack_basic = False
        table.append(row)
        rhs.append(b)
        basis.append(slack_col - 1 if slack_basic else -1)
    for i in range(nrows):
        if basis[i] < 0:
            art_cols.append(i)
    ncols = first_art + len(art_cols)
    for i, row in enumerate(table):
        row.extend([mpq(0)] * len(art_cols))
    for k, i in enumerate(art_cols):
        table[i][first_art + k] = mpq(1)
        basis[i] = first_art + k
    tab = _Tableau(table, rhs, basis, ncols)

    if art_cols:
        cost1 = [mpq(0)] * first_art + [mpq(1)] * len(art_cols)
        tab.optimize(cost1, ncols)
        if sum(tab.rhs[i] for i, bv in enumerate(tab.basis) if bv >= first_art) > 0:
            return LPSolution(Status.INFEASIBLE)
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= first_art:
                col = next((j for j in range(first_art) if tab.rows[i][j]), -1)
                if col >= 0:
                    tab.pivot(i, col)
                else:
                    del tab.rows[i], tab.rhs[i], tab.basis[i]
                    continue
            i += 1
        tab.rows = [row[:first_art] for row in tab.rows]
        tab.ncols = first_art

    sense = -1 if lp.maximize else 1
    cost = [mpq(0)] * first_art
    const = mpq(0)
    for j, c in enumerate(lp.objective):
        if not c:
            continue
        off, terms = maps[j]
        const += mpq(c) * off
        for col, s in terms:
            cost[col] += sense * mpq(c) * s
    if not tab.optimize(cost, first_art):
        return LPSolution(Status.UNBOUNDED)

    y = [mpq(0)] * first_art
    for i, bv in enumerate(tab.basis):
        y[bv] = tab.rhs[i]
    point = []
    for off, terms in maps:
        x = off
        for col, s in terms:
            x += s * y[col]
        point.append(_to_fraction(x))
    point = tuple(point)
    if not lp.feasible(point):
        raise LPInvariantError(f"simplex returned an infeasible point {point}")
    return LPSolution(Status.OPTIMAL, lp.value_at(point), point)


def _region(num_vars: int, lower, upper) -> tuple[list, list]:
    lower = [Fraction(0)] * num_vars if lower is None else list(lower)
    upper = [None] * num_vars if upper is None else list(upper)
    return lower, upper


def nonstrict_region_empty(
    num_vars: int,
    constraints: Sequence[Constraint],
    lower: Sequence[Fraction | None] | None = None,
    upper: Sequence[Fraction | None] | None = None,
) -> bool:
    """Whether no point satisfies every (non-strict) constraint.

    Every inequality gets a common slack ``s``: ``f(x) <= c + s`` (or
    ``f(x) >= c - s``).  The set is nonempty iff the least feasible ``s`` is
    at most 0.  ``s`` is bounded below by -1 so the LP is never unbounded.
    """
    lower, upper = _region(num_vars, lower, upper)
    lp = LinearProgram(num_vars + 1, (0,) * num_vars + (1,), lower=lower + [Fraction(-1)], upper=upper + [None])
    for con in constraints:
        if con.relation is Relation.EQ:
            lp.add(con.coeffs + (0,), Relation.EQ, con.rhs)
        elif con.relation is Relation.LE:
            lp.add(con.coeffs + (-1,), Relation.LE, con.rhs)
        else:
            lp.add(con.coeffs + (1,), Relation.GE, con.rhs)
    sol = solve(lp)
    return not sol.optimal or sol.value > 0


def strict_interior_nonempty(
    num_vars: int,
    base: Sequence[Constraint],
    strict: Sequence[Constraint],
    lower: Sequence[Fraction | None] | None = None,
    upper: Sequence[Fraction | None] | None = None,
) -> bool:
    """Whether some point satisfies ``base`` and every row of ``strict`` strictly.

    Rows of ``strict`` must be ``LE`` (read as ``<``) or ``GE`` (read as
    ``>``).  We maximize a margin ``0 <= eps <= 1`` with ``f(x) <= c - eps``
    (resp. ``f(x) >= c + eps``); the region is nonempty iff the optimum is
    positive.
    """
    lower, upper = _region(num_vars, lower, upper)
    lp = LinearProgram(
        num_vars + 1,
        (0,) * num_vars + (1,),
        maximize=True,
        lower=lower + [Fraction(0)],
        upper=upper + [Fraction(1)],
    )
    for con in base:
        lp.add(con.coeffs + (0,), con.relation, con.rhs)
    for con in strict:
        if con.relation is Relation.LE:
            lp.add(con.coeffs + (1,), Relation.LE, con.rhs)
        elif con.relation is Relation.GE:
            lp.add(con.coeffs + (-1,), Relation.GE, con.rhs)
        else:
            raise ValueError("strict constraints must be inequalities")
    sol = solve(lp)
    return sol.optimal and sol.value > 0


def _term(c: Fraction, name: str, first: bool) -> str:
    sign = "-" if c < 0 else ("" if first else "+")
    mag = abs(c)
    body = name if mag == 1 else f"{mag} {name}"
    return f"{sign} {body}".strip() if first else f"{sign} {body}"


def _expr(coeffs: Sequence[Fraction], names: Sequence[str]) -> str:
    parts = []
    for c, name in zip(coeffs, names):
        if c:
            parts.append(_term(c, name, not parts))
    return " ".join(parts) if parts else "0"


def dump(lp: LinearProgram) -> str:
    """Plain-text rendering: ``minimize ...``, ``subject to ...``, ``bounds ...``."""
    lines = [f"{'maximize' if lp.maximize else 'minimize'} {_expr(lp.objective, lp.names)}", "subject to"]
    for con in lp.constraints:
        lines.append(f"  {_expr(con.coeffs, lp.names)} {con.relation.value} {con.rhs}")
    lines.append("bounds")
    for name, lo, hi in zip(lp.names, lp.lower, lp.upper):
        left = "-inf" if lo is None else str(lo)
        right = "" if hi is None else f" <= {hi}"
        lines.append(f"  {left} <= {name}{right}")
    return "\n".join(lines)
