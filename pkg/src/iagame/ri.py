"""Conflict linear programs and the LP sufficient condition for rational inattention.

For an assignment ``A`` the conflict LP ``L_A`` asks for a distribution
``c`` of test effort over the variables that minimizes ``m``, the largest
total effort spent on variables where ``A`` agrees with some assignment of
the opposite formula value.  A formula is certified as exhibiting rational
inattention (RI) at a constant ``C`` when every point that attains the
minimax power puts at least ``C`` on some variable while ignoring an
at-least-as-relevant one.

Variables in LPs are ordered ``(c_1, ..., c_n, m)``; indices are 0-based.
"""

from __future__ import annotations

import enum
import json
import math
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Iterable, Sequence

import numpy as np

from .formula import TruthTable, enumerate_truth_tables, npn_orbits, relevance_counts, relevance_leq
from .lp import Constraint, LinearProgram, Relation, solve, strict_interior_nonempty, nonstrict_region_empty

JOBS_ENV = "IAG_JOBS"
CENSUS_MAX_VARS = 4
SAMPLE_MAX_VARS = 10
SCHEMA_VERSION = 1


def default_c_grid(n: int) -> tuple[Fraction, ...]:
    """``1/(2n), 1/(4n), 1/(8n), 1/(16n)``, descending."""
    n = max(n, 1)
    return tuple(Fraction(1, 2 ** (k + 1) * n) for k in range(4))


def default_jobs() -> int:
    env = os.environ.get(JOBS_ENV)
    if env:
        jobs = int(env)
        if jobs < 1:
            raise ValueError(f"{JOBS_ENV} must be a positive integer")
        return jobs
    return os.cpu_count() or 1


# ---------------------------------------------------------------- conflict LPs


def agreement_masks(tt: TruthTable, a: int, reduce: bool = True) -> list[int]:
    """Masks of variables on which ``a`` agrees with each conflicting assignment.

    With ``reduce`` only inclusion-maximal masks are kept; the dropped rows are
    implied by the kept ones, so the feasible set is unchanged.
    """
    n = tt.num_vars
    full = (1 << n) - 1
    value = tt(a)
    masks = {full & ~(a ^ b) for b in range(1 << n) if tt(b) != value}
    if not reduce:
        return sorted(masks)
    kept = []
    for m in sorted(masks, key=lambda x: (-bin(x).count("1"), x)):
        if not any(m & k == m for k in kept):
            kept.append(m)
    return sorted(kept)


def _names(n: int) -> list[str]:
    return [f"c{i + 1}" for i in range(n)] + ["m"]


def _conflict_rows(n: int, masks: Iterable[int]) -> list[Constraint]:
    rows = [Constraint((1,) * n + (0,), Relation.EQ, 1)]
    for mask in masks:
        coeffs = tuple(1 if mask >> i & 1 else 0 for i in range(n)) + (-1,)
        rows.append(Constraint(coeffs, Relation.LE, 0))
    return rows


def _bounds(n: int, m_upper: Fraction = Fraction(1)):
    return [Fraction(0)] * (n + 1), [None] * n + [m_upper]


def conflict_lp(tt: TruthTable, a: int, reduce: bool = False) -> LinearProgram:
    """The conflict LP ``L_A``: minimize ``m`` over ``(c, m)``.

    By default there is one row per conflicting assignment; ``reduce`` keeps
    only rows with inclusion-maximal agreement sets.
    """
    n = tt.num_vars
    if not 0 <= a < tt.size:
        raise ValueError(f"assignment {a} out of range for n={n}")
    lower, upper = _bounds(n)
    if reduce:
        masks = agreement_masks(tt, a)
    else:
        full = (1 << n) - 1
        masks = [full & ~(a ^ b) for b in range(tt.size) if tt(b) != tt(a)]
    return LinearProgram(
        n + 1, (0,) * n + (1,), _conflict_rows(n, masks), lower=lower, upper=upper, names=_names(n)
    )


def maxpower(tt: TruthTable, a: int, c: Sequence[Fraction]) -> Fraction:
    """Largest total of ``c`` over variables where ``a`` agrees with a conflicting assignment."""
    n = tt.num_vars
    if len(c) != n:
        raise ValueError(f"trace must have {n} entries")
    best = Fraction(0)
    for mask in agreement_masks(tt, a):
        best = max(best, sum((c[i] for i in range(n) if mask >> i & 1), Fraction(0)))
    return best


def conflict_minimum(tt: TruthTable, a: int) -> Fraction:
    """``MIN(L_A)``."""
    return solve(conflict_lp(tt, a, reduce=True)).value


def minimax_power(tt: TruthTable) -> tuple[Fraction, frozenset[int]]:
    """``MIN*`` and the set of relevant assignments attaining it."""
    mins = [conflict_minimum(tt, a) for a in range(tt.size)]
    best = min(mins)
    return best, frozenset(a for a, v in enumerate(mins) if v == best)


def admissible_pairs(tt: TruthTable) -> list[tuple[int, int]]:
    """Ordered pairs ``(i, j)``, ``i != j``, where ``v_i`` is at most as relevant as ``v_j``.

    The ignored variable ``v_j`` must actually matter to the formula: ignoring
    a variable with zero relevance is not inattention.
    """
    n = tt.num_vars
    rel = relevance_counts(tt)
    return [(i, j) for i in range(n) for j in range(n) if i != j and rel[i] <= rel[j] and rel[j] > 0]


def inattentive_lp(tt: TruthTable, a: int, i: int, j: int, C, reduce: bool = True) -> LinearProgram:
    """``L+_{A,i,j}``: the conflict LP plus ``c_j = 0`` and ``c_i >= C``."""
    n = tt.num_vars
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ValueError("need two distinct variable indices")
    if not relevance_leq(tt, i, j):
        raise ValueError(f"v{i + 1} is more relevant than v{j + 1}")
    lp = conflict_lp(tt, a, reduce=reduce)
    C = Fraction(C)
    lp.lower[i] = max(lp.lower[i], C)
    lp.upper[j] = Fraction(0)
    return lp



def attentive_set(tt: TruthTable, i: int) -> frozenset[int]:
    """``I_i = {j : v_j <= v_i}``, the variables kept below ``C`` when ``v_i`` is the last ignored one."""
    rel = relevance_counts(tt)
    return frozenset(j for j in range(tt.num_vars) if rel[j] <= rel[i])


def _unit(n: int, j: int) -> tuple[int, ...]:
    return tuple(1 if k == j else 0 for k in range(n)) + (0,)


def _region_empty(n: int, base: list[Constraint], strict: list[Constraint], m_cap: Fraction, closed: bool) -> bool:
    lower, upper = _bounds(n, min(m_cap, Fraction(1)))
    if m_cap < 0:
        return True
    if closed:
        return nonstrict_region_empty(n + 1, base + strict, lower, upper)
    return not strict_interior_nonempty(n + 1, base, strict, lower, upper)


def _t_minus_strict(n: int, inside: frozenset[int], C: Fraction) -> list[Constraint]:
    return [
        Constraint(_unit(n, j), Relation.LE, C) if j in inside else Constraint(_unit(n, j), Relation.GE, 0)
        for j in range(n)
    ]


def t_minus_empty(tt: TruthTable, a: int, i: int, C, m_plus, closed: bool = False) -> bool:
    """Whether ``T-_{A,i}`` is empty.

    ``T-_{A,i}`` holds the feasible points of ``L_A`` with ``m <= m+``,
    ``c_j < C`` for ``j`` in :func:`attentive_set` and ``c_j > 0`` for the
    rest.  With ``closed`` the strict bounds become ``<=`` and ``>=``.
    """
    n = tt.num_vars
    base = _conflict_rows(n, agreement_masks(tt, a))
    strict = _t_minus_strict(n, attentive_set(tt, i), Fraction(C))
    return _region_empty(n, base, strict, Fraction(m_plus), closed)


def positive_region_empty(tt: TruthTable, a: int, m_plus) -> bool:
    """Whether ``L_A`` has no point with ``m <= m+`` and every ``c_j > 0``.

    Such points test every variable a linear number of times, so they never
    witness inattention; the cover by the ``T-_{A,i}`` regions misses them.
    """
    n = tt.num_vars
    base = _conflict_rows(n, agreement_masks(tt, a))
    strict = [Constraint(_unit(n, j), Relation.GE, 0) for j in range(n)]
    return _region_empty(n, base, strict, Fraction(m_plus), closed=False)


def m_plus(tt: TruthTable, C, assignments: Iterable[int] | None = None) -> Fraction | None:
    """``m+_C``: the least ``MIN(L+_{A,i,j})`` over assignments and admissible pairs.

    ``None`` when there is no admissible pair or every inattentive LP is
    infeasible.
    """
    C = Fraction(C)
    n = tt.num_vars
    pairs = admissible_pairs(tt)
    best = None
    for a in range(tt.size) if assignments is None else assignments:
        rows = _conflict_rows(n, agreement_masks(tt, a))
        for i, j in pairs:
            lower, upper = _bounds(n)
            lower[i], upper[j] = C, Fraction(0)
            sol = solve(LinearProgram(n + 1, (0,) * n + (1,), list(rows), lower=lower, upper=upper))
            if sol.optimal and (best is None or sol.value < best):
                best = sol.value
    return best


# ---------------------------------------------------------------- verdicts


class Verdict(enum.Enum):
    EXHIBITS_RI = "ExhibitsRI"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value


RULES = ("census", "literal")


@dataclass(frozen=True)
class RIVerdict:
    verdict: Verdict
    witness_c: Fraction | None = None
    m_plus: Fraction | None = None
    minimax: Fraction | None = None
    reason: str = ""
    diagnostics: tuple[str, ...] = ()

    @property
    def exhibits_ri(self) -> bool:
        return self.verdict is Verdict.EXHIBITS_RI


class _Analysis:
    """Per-formula cache of relevance, reduced conflict rows and ``MIN(L_A)``."""

    def __init__(self, tt: TruthTable):
        self.tt = tt
        self.n = n = tt.num_vars
        self.rel = relevance_counts(tt)
        self.pairs = admissible_pairs(tt)
        self.rows = [_conflict_rows(n, agreement_masks(tt, a)) for a in range(tt.size)]
        self.mins = [self._solve(a).value for a in range(tt.size)]
        self.minimax = min(self.mins)
        self.relevant = [a for a in range(tt.size) if self.mins[a] == self.minimax]

    def _solve(self, a: int, lower=None, upper=None):
        n = self.n
        if lower is None:
            lower, upper = _bounds(n)
        return solve(LinearProgram(n + 1, (0,) * n + (1,), list(self.rows[a]), lower=lower, upper=upper))

    def inattentive_min(self, a: int, i: int | None, j: int, C: Fraction) -> Fraction | None:
        lower, upper = _bounds(self.n)
        if i is not None:
            lower[i] = C
        upper[j] = Fraction(0)
        sol = self._solve(a, lower, upper)
        return sol.value if sol.optimal else None

    def m_plus(self, C: Fraction, candidates: Iterable[int], floor: Fraction | None = None) -> Fraction | None:
        """Least inattentive minimum over ``candidates``; stops early on reaching ``floor``."""
        best = None
        for a in candidates:
            if best is not None and self.mins[a] >= best:
                continue
            for i, j in self.pairs:
                v = self.inattentive_min(a, i, j, C)
                if v is not None and (best is None or v < best):
                    best = v
                    if floor is not None and best == floor:
                        return best
        return best

    def t_minus_empty(self, a: int, i: int, C: Fraction, cap: Fraction, closed: bool) -> bool:
        inside = frozenset(j for j in range(self.n) if self.rel[j] <= self.rel[i])
        return _region_empty(self.n, list(self.rows[a]), _t_minus_strict(self.n, inside, C), cap, closed)

    def positive_empty(self, a: int, cap: Fraction) -> bool:
        strict = [Constraint(_unit(self.n, j), Relation.GE, 0) for j in range(self.n)]
        return _region_empty(self.n, list(self.rows[a]), strict, cap, closed=False)


def _unknown(reason: str, an: _Analysis | None = None, mp=None, diag=()) -> RIVerdict:
    return RIVerdict(
        Verdict.UNKNOWN, None, mp, None if an is None else an.minimax, reason, tuple(diag)
    )


def exhibits_ri(
    tt: TruthTable,
    c_grid: Sequence | None = None,
    closed: bool = False,
    rule: str = "census",
    explain: bool = False,
) -> RIVerdict:
    """The LP sufficient condition for rational inattention.

    For each ``C`` in ``c_grid`` (tried in descending order) the formula is
    certified when ``m+_C`` is defined and every region ``T-_{A,i}`` is
    empty.  Under the default ``rule="census"`` three further conditions
    apply:

    * the ignored variable of an inattentive pair must have positive
      relevance (see :func:`admissible_pairs`);
    * ``m+_C`` must equal the minimax power, otherwise the minimax points do
      not show the inattention pattern at all;
    * when ``m+_C > 0``, relevant conflict LPs must have no optimal point
      with effort on every variable (:func:`positive_region_empty`).

    ``rule="literal"`` drops all three and checks only the ``T-`` regions.
    """
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}; expected one of {RULES}")
    n = tt.num_vars
    grid = sorted({Fraction(c) for c in (default_c_grid(n) if c_grid is None else c_grid)}, reverse=True)
    if not grid or any(c <= 0 for c in grid):
        raise ValueError("the C grid must be a nonempty set of positive rationals")
    if n < 2:
        return _unknown("fewer than two variables: no inattentive pair")
    an = _Analysis(tt)
    literal = rule == "literal"
    if literal:
        rel = an.rel
        an.pairs = [(i, j) for i in range(n) for j in range(n) if i != j and rel[i] <= rel[j]]
    if not an.pairs:
        return _unknown("no admissible pair (i, j)", an)
    diag: list[str] = []

    if not literal:
        # screens that do not depend on C
        ignorable = sorted({j for _, j in an.pairs})
        if not any(an.inattentive_min(a, None, j, grid[-1]) == an.minimax for a in an.relevant for j in ignorable):
            return _unknown("no minimax point ignores a relevant variable", an, *_explain_mp(an, grid, explain))
        if an.minimax > 0:
            for a in an.relevant:
                if not an.positive_empty(a, an.minimax):
                    if explain:
                        diag.append(f"A={_bits(n, a)}: a minimax point has every c_j > 0")
                    mp, extra = _explain_mp(an, grid, explain)
                    return _unknown("a minimax point tests every variable", an, mp, diag + extra)

    last_mp = None
    for C in grid:
        if literal:
            mp = an.m_plus(C, range(tt.size))
        else:
            mp = an.m_plus(C, an.relevant, floor=an.minimax)
        last_mp = mp
        if explain:
            diag.append(f"C={C}: m+={mp}")
        if mp is None:
            continue
        if not literal and mp != an.minimax:
            continue
        # T- regions cap m at m+, so LPs with a larger minimum contribute nothing;
        # the positive regions were already checked against the minimax power
        candidates = [a for a in range(tt.size) if an.mins[a] <= mp]
        ok = True
        for a in candidates:
            for i in range(n):
                if not an.t_minus_empty(a, i, C, mp, closed):
                    ok = False
                    if explain:
                        diag.append(f"C={C}: T-(A={_bits(n, a)}, i={i + 1}) is nonempty")
                    break
            if not ok:
                break
        if ok:
            return RIVerdict(Verdict.EXHIBITS_RI, C, mp, an.minimax, "all T- regions empty", tuple(diag))
    return _unknown("no C in the grid certifies inattention", an, last_mp, diag)


def _explain_mp(an: _Analysis, grid: list[Fraction], explain: bool) -> tuple[Fraction | None, list[str]]:
    if not explain:
        return None, []
    mp = an.m_plus(grid[0], range(an.tt.size))
    return mp, [f"C={grid[0]}: m+={mp}, minimax={an.minimax}"]


def _bits(n: int, a: int) -> str:
    return "".join("T" if a >> i & 1 else "F" for i in range(n))


# ---------------------------------------------------------------- census and sampling


@dataclass
class CensusReport:
    """Verdict counts over all (or a sample of) truth tables in ``n`` variables.

    ``runtime_s`` is informational and left out of the serialized form, so
    a report is a deterministic function of its parameters.
    """

    n: int
    total: int
    ri: int
    unknown: int
    params: dict
    mode: str = "exhaustive"
    seed: int | None = None
    ci: tuple[float, float] | None = None
    witness_histogram: dict[str, int] = field(default_factory=dict)
    runtime_s: float = 0.0
    evaluated: int = 0
    verdicts: dict[str, str] | None = None

    @property
    def fraction(self) -> float:
        return self.ri / self.total if self.total else 0.0

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "n": self.n,
            "total": self.total,
            "ri": self.ri,
            "unknown": self.unknown,
            "params": self.params,
            "mode": self.mode,
            "seed": self.seed,
            "ci": None if self.ci is None else list(self.ci),
            "witness_histogram": self.witness_histogram,
            "evaluated": self.evaluated,
        }
        if self.verdicts is not None:
            out["verdicts"] = self.verdicts
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "CensusReport":
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {version!r}")
        ci = data.get("ci")
        return cls(
            n=data["n"],
            total=data["total"],
            ri=data["ri"],
            unknown=data["unknown"],
            params=data["params"],
            mode=data["mode"],
            seed=data.get("seed"),
            ci=None if ci is None else (ci[0], ci[1]),
            witness_histogram=dict(data.get("witness_histogram", {})),
            evaluated=data.get("evaluated", 0),
            verdicts=data.get("verdicts"),
        )

    @classmethod
    def from_json(cls, text: str) -> "CensusReport":
        return cls.from_dict(json.loads(text))

    def csv_rows(self) -> list[list]:
        """Header plus one summary row; the histogram is packed as ``C:count;...``."""
        lo, hi = self.ci if self.ci is not None else ("", "")
        seed = "" if self.seed is None else self.seed
        hist = ";".join(f"{c}:{count}" for c, count in self.witness_histogram.items())
        return [
            ["n", "mode", "total", "ri", "unknown", "fraction", "ci_low", "ci_high", "seed", "witness_histogram"],
            [self.n, self.mode, self.total, self.ri, self.unknown, f"{self.fraction:.6f}", lo, hi, seed, hist],
        ]


def _params(n: int, c_grid, closed: bool, rule: str, symmetry: bool | None = None) -> dict:
    grid = sorted({Fraction(c) for c in (default_c_grid(n) if c_grid is None else c_grid)}, reverse=True)
    params = {"c_grid": [str(c) for c in grid], "t_minus": "closed" if closed else "strict", "rule": rule}
    if symmetry is not None:
        params["symmetry"] = symmetry
    return params


def _judge_chunk(args) -> list[tuple[int, str | None]]:
    n, chunk, grid, closed, rule = args
    out = []
    for bits in chunk:
        v = exhibits_ri(TruthTable(n, bits), grid, closed=closed, rule=rule)
        out.append((bits, None if v.witness_c is None else str(v.witness_c)))
    return out


def _chunks(items: list, parts: int) -> list[list]:
    size = max(1, math.ceil(len(items) / max(parts, 1)))
    return [items[k : k + size] for k in range(0, len(items), size)]


def _judge_all(n: int, tables: list[int], grid, closed: bool, rule: str, jobs: int, progress=None) -> dict[int, str | None]:
    """Verdicts for distinct table bitsets; independent of ``jobs``."""
    tables = sorted(set(tables))
    pieces = _chunks(tables, jobs * 8 if jobs > 1 else max(1, len(tables) // 50))
    tasks = [(n, piece, grid, closed, rule) for piece in pieces]
    results: dict[int, str | None] = {}
    done = 0
    if jobs <= 1:
        mapped = map(_judge_chunk, tasks)
        for part in mapped:
            results.update(part)
            done += len(part)
            if progress:
                progress(done, len(tables))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_judge_chunk, tasks):
                results.update(part)
                done += len(part)
                if progress:
                    progress(done, len(tables))
    return results


def census(
    n: int,
    c_grid: Sequence | None = None,
    jobs: int | None = None,
    closed: bool = False,
    symmetry: bool = True,
    rule: str = "census",
    keep_verdicts: bool = False,
    progress=None,
) -> CensusReport:
    """Exhaustive verdict counts over all ``2^(2^n)`` truth tables.

    With ``symmetry`` each class of tables equivalent under permuting,
    negating inputs and complementing the output is judged once and counted
    with its class size; the verdict is invariant under these maps.
    ``keep_verdicts`` records one verdict per judged table, so only class
    representatives appear under ``symmetry``.
    """
    if not 0 <= n <= CENSUS_MAX_VARS:
        raise ValueError(f"exhaustive census supports n <= {CENSUS_MAX_VARS}; use sampling beyond")
    jobs = default_jobs() if jobs is None else jobs
    grid = tuple(Fraction(c) for c in (default_c_grid(n) if c_grid is None else c_grid))
    start = time.perf_counter()
    if symmetry:
        weights = {tt.bits: size for tt, size in npn_orbits(n)}
    else:
        weights = {tt.bits: 1 for tt in enumerate_truth_tables(n)}
    verdicts = _judge_all(n, list(weights), grid, closed, rule, jobs, progress)
    total = 1 << (1 << n)
    hist: Counter = Counter()
    for bits, c in verdicts.items():
        if c is not None:
            hist[c] += weights[bits]
    ri = sum(hist.values())
    if sum(weights.values()) != total:
        raise AssertionError("symmetry classes do not partition the truth tables")
    per_class = None
    if keep_verdicts:
        per_class = {TruthTable(n, b).bitstring(): ("ExhibitsRI" if c else "Unknown") for b, c in sorted(verdicts.items())}
    return CensusReport(
        n=n,
        total=total,
        ri=ri,
        unknown=total - ri,
        params=_params(n, grid, closed, rule, symmetry),
        mode="exhaustive",
        witness_histogram=dict(sorted(hist.items(), key=lambda kv: -Fraction(kv[0]))),
        runtime_s=round(time.perf_counter() - start, 3),
        evaluated=len(verdicts),
        verdicts=per_class,
    )


Z95 = NormalDist().inv_cdf(0.975)


def wald_interval(successes: int, trials: int) -> tuple[float, float]:
    """95% normal-approximation interval for a binomial proportion, clipped to [0, 1]."""
    p = successes / trials
    half = Z95 * math.sqrt(p * (1 - p) / trials)
    return max(0.0, p - half), min(1.0, p + half)


def worst_case_halfwidth(trials: int) -> float:
    """``z * sqrt(1/4 / N)``, the interval half-width at ``p = 1/2``."""
    return Z95 * math.sqrt(0.25 / trials)


def sample_tables(n: int, samples: int, seed: int) -> list[int]:
    """Uniform random truth tables (with replacement) from a PCG64 stream."""
    rng = np.random.Generator(np.random.PCG64(seed))
    width = 1 << n
    words = math.ceil(width / 64)
    top = 1 << min(width, 64)
    draws = rng.integers(0, top, size=(samples, words), dtype=np.uint64, endpoint=False)
    tables = []
    for row in draws:
        bits = 0
        for k, w in enumerate(row):
            bits |= int(w) << (64 * k)
        tables.append(bits & ((1 << width) - 1))
    return tables


def sample(
    n: int,
    samples: int,
    seed: int,
    c_grid: Sequence | None = None,
    jobs: int | None = None,
    closed: bool = False,
    rule: str = "census",
    progress=None,
) -> CensusReport:
    """Verdict counts over ``samples`` uniformly drawn truth tables in ``n`` variables."""
    if samples <= 0:
        raise ValueError("samples must be positive")
    if not 1 <= n <= SAMPLE_MAX_VARS:
        raise ValueError(f"sampling supports 1 <= n <= {SAMPLE_MAX_VARS}")
    jobs = default_jobs() if jobs is None else jobs
    grid = tuple(Fraction(c) for c in (default_c_grid(n) if c_grid is None else c_grid))
    start = time.perf_counter()
    tables = sample_tables(n, samples, seed)
    verdicts = _judge_all(n, tables, grid, closed, rule, jobs, progress)
    hist: Counter = Counter(verdicts[b] for b in tables if verdicts[b] is not None)
    ri = sum(hist.values())
    params = _params(n, grid, closed, rule)
    params["generator"] = "numpy PCG64"
    params["worst_case_halfwidth"] = round(worst_case_halfwidth(samples), 6)
    lo, hi = wald_interval(ri, samples)
    return CensusReport(
        n=n,
        total=samples,
        ri=ri,
        unknown=samples - ri,
        params=params,
        mode="sample",
        seed=seed,
        ci=(round(lo, 6), round(hi, 6)),
        witness_histogram=dict(sorted(hist.items(), key=lambda kv: -Fraction(kv[0]))),
        runtime_s=round(time.perf_counter() - start, 3),
        evaluated=len(verdicts),
    )
