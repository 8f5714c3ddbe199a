"""Test complexity: the least test budget that makes a profitable guess possible.

A guess after outcomes ``S`` has positive expected payoff iff the certainty
``|Pr(phi | S) - 1/2|`` exceeds the payoff threshold ``q``.  A strategy that
replays the tests of a single sequence and guesses only when those outcomes
occur realizes any sequence, so the complexity is the least ``k`` at which
some length-``k`` sequence has certainty above ``q``.

Contradictory observation pairs cancel, so every length-``k`` sequence has the
posterior of a non-contradictory profile of length ``k``, ``k - 2``, ...
Profiles are a polarity per variable and a composition of the length.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ResourceLimitExceeded
from .formula import TruthTable, enumerate_truth_tables, npn_classes
from .prob import HALF, AccuracyVector, Likelihood, OutcomeCounts, ProductPrior

DEFAULT_K_MAX = 64
DEFAULT_PROFILE_CAP = 2_000_000
XOR_CHECK_MAX_VARS = 4


@dataclass(frozen=True)
class ComplexitySpec:
    tt: TruthTable
    prior: ProductPrior
    alpha: AccuracyVector
    q: Fraction
    k_max: int = DEFAULT_K_MAX

    def __post_init__(self) -> None:
        q = Fraction(self.q)
        object.__setattr__(self, "q", q)
        if not 0 < q <= HALF:
            raise ValueError(f"the threshold q must satisfy 0 < q <= 1/2, got {q}")
        n = self.tt.num_vars
        if self.prior.num_vars != n or self.alpha.num_vars != n:
            raise ValueError(f"prior and accuracies must have {n} entries")
        if self.k_max < 0:
            raise ValueError("k_max must be nonnegative")


@dataclass(frozen=True)
class OptimalSequenceSet:
    """Profiles of maximal certainty among sequences of length ``k``.

    Members are cancelled (non-contradictory) profiles.  A member shorter than
    ``k`` stands for itself padded with contradictory pairs; by the
    cancellation property this only happens when no full-length profile does
    as well.
    """

    k: int
    certainty: Fraction
    profiles: frozenset[OutcomeCounts]


@dataclass(frozen=True)
class Unbounded:
    """No budget up to ``k_max`` allows a profitable guess."""

    k_max: int

    def __str__(self) -> str:
        return f">{self.k_max}"


def compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def profiles(n: int, length: int):
    """Canonical non-contradictory count profiles of total ``length``.

    Polarity is fixed to ``T`` for variables that are never tested.
    """
    for comp in compositions(length, n):
        tested = [i for i in range(n) if comp[i]]
        for pol in itertools.product((True, False), repeat=len(tested)):
            t = list(comp)
            f = [0] * n
            for i, p in zip(tested, pol):
                if not p:
                    t[i], f[i] = 0, comp[i]
            yield tuple(t), tuple(f)


def profile_count(n: int, length: int) -> int:
    """Number of profiles yielded by :func:`profiles`."""
    return sum(math.comb(n, m) * math.comb(length - 1, m - 1) * 2**m for m in range(1, n + 1)) if length else 1


class _CertaintyTable:
    """Exact best certainty per profile length for one game, computed lazily."""

    def __init__(self, tt: TruthTable, prior: ProductPrior, alpha: AccuracyVector, cap: int):
        self.tt = tt
        self.lik = Likelihood(tt.num_vars, prior, alpha)
        self.cap = cap
        self.best: list[tuple[Fraction, list]] = []

    def certainty(self, t, f) -> Fraction:
        sat, unsat = self.lik.split(self.tt.bits, t, f)
        return Fraction(abs(sat - unsat), 2 * (sat + unsat))

    def exact_length(self, length: int) -> tuple[Fraction, list]:
        while len(self.best) <= length:
            j = len(self.best)
            n = self.tt.num_vars
            if profile_count(n, j) > self.cap:
                raise ResourceLimitExceeded(
                    f"{profile_count(n, j)} profiles of length {j} over {n} variables exceed the cap {self.cap}"
                )
            top, arg = Fraction(-1), []
            for t, f in profiles(n, j):
                c = self.certainty(t, f)
                if c > top:
                    top, arg = c, [(t, f)]
                elif c == top:
                    arg.append((t, f))
            self.best.append((top, arg))
        return self.best[length]

    def up_to(self, k: int) -> tuple[Fraction, list]:
        """Best certainty over lengths ``k, k-2, ...`` with the attaining profiles."""
        top, arg = Fraction(-1), []
        for j in range(k % 2, k + 1, 2):
            c, a = self.exact_length(j)
            if c > top:
                top, arg = c, list(a)
            elif c == top:
                arg.extend(a)
        return top, arg


def max_certainty(
    tt: TruthTable,
    prior: ProductPrior,
    alpha: AccuracyVector,
    k: int,
    profile_cap: int = DEFAULT_PROFILE_CAP,
) -> tuple[Fraction, OptimalSequenceSet]:
    """Largest ``|Pr(phi | S) - 1/2|`` over sequences ``S`` of length ``k``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    table = _CertaintyTable(tt, prior, alpha, profile_cap)
    top, arg = table.up_to(k)
    members = frozenset(OutcomeCounts(t, f) for t, f in arg)
    return top, OptimalSequenceSet(k, top, members)


def certainty_curve(
    tt: TruthTable, prior: ProductPrior, alpha: AccuracyVector, k_max: int, profile_cap: int = DEFAULT_PROFILE_CAP
) -> list[Fraction]:
    """``max_certainty`` for every budget ``0..k_max``."""
    table = _CertaintyTable(tt, prior, alpha, profile_cap)
    return [table.up_to(k)[0] for k in range(k_max + 1)]


def test_complexity(spec: ComplexitySpec, profile_cap: int = DEFAULT_PROFILE_CAP) -> int | Unbounded:
    """Least ``k <= k_max`` with ``max_certainty(k) > q``, else :class:`Unbounded`."""
    table = _CertaintyTable(spec.tt, spec.prior, spec.alpha, profile_cap)
    for k in range(spec.k_max + 1):
        if table.up_to(k)[0] > spec.q:
            return k
    return Unbounded(spec.k_max)


# pytest would otherwise collect the function above as a test
test_complexity.__test__ = False


@dataclass
class XorReport:
    n: int
    alpha: Fraction
    q: Fraction
    k_max: int
    xor_cpl: int | Unbounded
    xnor_cpl: int | Unbounded
    maximal: bool
    distribution: dict[str, int]
    per_table: dict[str, str] | None = None
    violations: list[str] = field(default_factory=list)


def _cpl_key(c: int | Unbounded) -> float:
    return math.inf if isinstance(c, Unbounded) else c


def _cpl_chunk(args) -> list[tuple[int, int | Unbounded]]:
    n, chunk, alpha, q, k_max = args
    prior = ProductPrior.uniform(n)
    acc = AccuracyVector.uniform(n, alpha)
    return [(bits, test_complexity(ComplexitySpec(TruthTable(n, bits), prior, acc, q, k_max))) for bits in chunk]


def xor_maximality_check(
    n: int,
    alpha,
    q,
    k_max: int = DEFAULT_K_MAX,
    jobs: int = 1,
    symmetry: bool = True,
    keep_tables: bool = False,
) -> XorReport:
    """Compare the complexity of every table with that of the ``n``-variable XOR.

    Uses the uniform prior and a common accuracy ``alpha``.  Under those the
    complexity is invariant under permuting or negating inputs and under
    complementing the formula, so ``symmetry`` evaluates one table per class.
    ``keep_tables`` reports every table either way.
    """
    if not 1 <= n <= XOR_CHECK_MAX_VARS:
        raise ValueError(f"the XOR check supports 1 <= n <= {XOR_CHECK_MAX_VARS}")
    alpha, q = Fraction(alpha), Fraction(q)
    ComplexitySpec(TruthTable.constant(n, True), ProductPrior.uniform(n), AccuracyVector.uniform(n, alpha), q, k_max)
    if symmetry:
        classes = {tt.bits: members for tt, members in npn_classes(n)}
    else:
        classes = {tt.bits: [tt.bits] for tt in enumerate_truth_tables(n)}
    weights = {bits: len(members) for bits, members in classes.items()}
    xor = TruthTable.xor(n)
    tables = sorted(set(weights) | {xor.bits, (~xor).bits})
    size = max(1, math.ceil(len(tables) / max(jobs, 1)))
    tasks = [(n, tables[k : k + size], alpha, q, k_max) for k in range(0, len(tables), size)]
    cpl: dict[int, int | Unbounded] = {}
    if jobs <= 1:
        for part in map(_cpl_chunk, tasks):
            cpl.update(part)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_cpl_chunk, tasks):
                cpl.update(part)
    dist: Counter = Counter()
    for bits, w in weights.items():
        dist[str(cpl[bits])] += w
    top = _cpl_key(cpl[xor.bits])
    violations = sorted(
        TruthTable(n, m).bitstring() for b, members in classes.items() if _cpl_key(cpl[b]) > top for m in members
    )
    same = _cpl_key(cpl[xor.bits]) == _cpl_key(cpl[(~xor).bits])
    per_table = None
    if keep_tables:
        per_table = {
            TruthTable(n, m).bitstring(): str(cpl[b]) for b, members in classes.items() for m in members
        }
        per_table = dict(sorted(per_table.items()))
    ordered = dict(sorted(dist.items(), key=lambda kv: (kv[0].startswith(">"), int(kv[0].lstrip(">")))))
    return XorReport(
        n, alpha, q, k_max, cpl[xor.bits], cpl[(~xor).bits], same and not violations, ordered, per_table, violations
    )
