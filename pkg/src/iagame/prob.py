"""Exact posteriors, payoffs and characteristic fractions for test outcomes.

Everything is computed with :class:`fractions.Fraction`.  A test-outcome
sequence enters only through its per-variable counts of ``T`` and ``F``
observations (:class:`OutcomeCounts`), since the posterior of an assignment
is its prior weight times ``odds_i ** (matching observations of v_i)``,
normalised over all assignments.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .formula import TruthTable

HALF = Fraction(1, 2)

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``a/b`` or an integer.  Decimal literals are rejected."""
    m = _RATIONAL.match(text)
    if not m:
        raise ValueError(f"expected an integer or a fraction a/b, got {text!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a Fraction, int or 'a/b' string")
    if isinstance(x, str):
        return parse_rational(x)
    return Fraction(x)


@dataclass(frozen=True)
class ProductPrior:
    """Independent prior; ``p[i]`` is the probability that ``v_{i+1}`` is true."""

    p: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", tuple(_as_fraction(x) for x in self.p))
        for x in self.p:
            if not 0 < x < 1:
                raise ValueError(f"prior probabilities must lie strictly between 0 and 1, got {x}")

    @classmethod
    def uniform(cls, n: int) -> ProductPrior:
        return cls((HALF,) * n)

    @property
    def num_vars(self) -> int:
        return len(self.p)

    def is_uniform(self) -> bool:
        return all(x == HALF for x in self.p)

    def probability(self, a: int) -> Fraction:
        out = Fraction(1)
        for i, x in enumerate(self.p):
            out *= x if a >> i & 1 else 1 - x
        return out


@dataclass(frozen=True)
class AccuracyVector:
    """Test accuracies: a test of ``v_{i+1}`` is right with probability ``1/2 + alpha[i]``."""

    alpha: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", tuple(_as_fraction(x) for x in self.alpha))
        for x in self.alpha:
            if not 0 <= x < HALF:
                raise ValueError(f"accuracies must satisfy 0 <= alpha < 1/2, got {x}")

    @classmethod
    def uniform(cls, n: int, alpha) -> AccuracyVector:
        return cls((_as_fraction(alpha),) * n)

    @property
    def num_vars(self) -> int:
        return len(self.alpha)

    def is_uniform(self) -> bool:
        return len(set(self.alpha)) <= 1


@dataclass(frozen=True)
class Payoffs:
    g: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "g", _as_fraction(self.g))
        object.__setattr__(self, "b", _as_fraction(self.b))
        if not self.g > 0 > self.b:
            raise ValueError(f"payoffs need g > 0 > b, got g={self.g}, b={self.b}")


@dataclass(frozen=True, order=True)
class OutcomeCounts:
    """Per-variable counts of ``v_i ~ T`` (``t[i]``) and ``v_i ~ F`` (``f[i]``) observations."""

    t: tuple[int, ...]
    f: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.t) != len(self.f):
            raise ValueError("t and f must have one entry per variable")
        if any(x < 0 for x in self.t + self.f):
            raise ValueError("counts must be nonnegative")

    @classmethod
    def empty(cls, n: int) -> OutcomeCounts:
        return cls((0,) * n, (0,) * n)

    @classmethod
    def from_observations(cls, n: int, observations: Iterable[tuple[int, bool]]) -> OutcomeCounts:
        t, f = [0] * n, [0] * n
        for i, value in observations:
            if not 0 <= i < n:
                raise IndexError(f"variable index {i} out of range for n={n}")
            (t if value else f)[i] += 1
        return cls(tuple(t), tuple(f))

    @classmethod
    def from_dict(cls, n: int, counts: dict[int, tuple[int, int]]) -> OutcomeCounts:
        """``counts`` maps variable index to ``(t, f)``; missing variables are untested."""
        t, f = [0] * n, [0] * n
        for i, (ti, fi) in counts.items():
            t[i], f[i] = ti, fi
        return cls(tuple(t), tuple(f))

    @property
    def num_vars(self) -> int:
        return len(self.t)

    @property
    def total(self) -> int:
        return sum(self.t) + sum(self.f)

    def tests_of(self, i: int) -> int:
        return self.t[i] + self.f[i]

    def matching(self, a: int, i: int) -> int:
        """Observations of ``v_i`` that agree with assignment ``a``."""
        return self.t[i] if a >> i & 1 else self.f[i]

    def extend(self, i: int, value: bool) -> OutcomeCounts:
        if value:
            t = list(self.t)
            t[i] += 1
            return OutcomeCounts(tuple(t), self.f)
        f = list(self.f)
        f[i] += 1
        return OutcomeCounts(self.t, tuple(f))

    def __str__(self) -> str:
        parts = []
        for i, (ti, fi) in enumerate(zip(self.t, self.f)):
            if ti:
                parts.append(f"v{i + 1}:T*{ti}" if ti > 1 else f"v{i + 1}:T")
            if fi:
                parts.append(f"v{i + 1}:F*{fi}" if fi > 1 else f"v{i + 1}:F")
        return ",".join(parts) or "(none)"


class Action(enum.Enum):
    NO_GUESS = "NoGuess"
    GUESS_T = "GuessT"
    GUESS_F = "GuessF"

    def __str__(self) -> str:
        return self.value


def _check_dims(n: int, prior: ProductPrior, alpha: AccuracyVector, counts: OutcomeCounts | None = None) -> None:
    if prior.num_vars != n or alpha.num_vars != n or (counts is not None and counts.num_vars != n):
        raise ValueError(f"prior, accuracies and counts must all have {n} variables")


def odds(alpha_i) -> Fraction:
    alpha_i = _as_fraction(alpha_i)
    if not 0 <= alpha_i < HALF:
        raise ValueError(f"odds need 0 <= alpha < 1/2, got {alpha_i}")
    return (HALF + alpha_i) / (HALF - alpha_i)


def weight(prior: ProductPrior, alpha: AccuracyVector, counts: OutcomeCounts, a: int) -> Fraction:
    """Unnormalised posterior weight ``Pr(A) * prod_i odds_i ** matching_i``."""
    _check_dims(counts.num_vars, prior, alpha)
    w = prior.probability(a)
    for i, x in enumerate(alpha.alpha):
        w *= odds(x) ** counts.matching(a, i)
    return w


def weights(prior: ProductPrior, alpha: AccuracyVector, counts: OutcomeCounts) -> list[Fraction]:
    n = counts.num_vars
    _check_dims(n, prior, alpha)
    o = [odds(x) for x in alpha.alpha]
    out = []
    for a in range(1 << n):
        w = prior.probability(a)
        for i in range(n):
            w *= o[i] ** counts.matching(a, i)
        out.append(w)
    return out


def posterior_assignment(prior: ProductPrior, alpha: AccuracyVector, counts: OutcomeCounts, a: int) -> Fraction:
    ws = weights(prior, alpha, counts)
    return ws[a] / sum(ws)


def posterior_formula(tt: TruthTable, prior: ProductPrior, alpha: AccuracyVector, counts: OutcomeCounts) -> Fraction:
    _check_dims(tt.num_vars, prior, alpha, counts)
    ws = weights(prior, alpha, counts)
    sat = sum(w for a, w in enumerate(ws) if tt.bits >> a & 1)
    return sat / sum(ws)


def posterior_sequence(
    tt: TruthTable, prior: ProductPrior, alpha: AccuracyVector, observations: Sequence[tuple[int, bool]]
) -> Fraction:
    """``Pr(phi | S)`` for an ordered sequence ``S`` of ``(variable, outcome)`` pairs."""
    counts = OutcomeCounts.from_observations(tt.num_vars, observations)
    return posterior_formula(tt, prior, alpha, counts)


def threshold(payoffs: Payoffs) -> Fraction:
    """Certainty ``|Pr - 1/2|`` a guess must exceed to have positive expected payoff."""
    g, b = payoffs.g, payoffs.b
    return (b + g) / (2 * (b - g))


def guess_value(p: Fraction, payoffs: Payoffs, guess: bool) -> Fraction:
    if guess:
        return payoffs.g * p + payoffs.b * (1 - p)
    return payoffs.g * (1 - p) + payoffs.b * p


def best_action(p: Fraction, payoffs: Payoffs) -> tuple[Action, Fraction]:
    """Best final move at posterior ``p``; abstains unless a guess is strictly profitable."""
    vt = guess_value(p, payoffs, True)
    vf = guess_value(p, payoffs, False)
    if max(vt, vf) <= 0:
        return Action.NO_GUESS, Fraction(0)
    if vt >= vf:
        return Action.GUESS_T, vt
    return Action.GUESS_F, vf


def certainty(p: Fraction) -> Fraction:
    return abs(p - HALF)


def characteristic_fraction(tt: TruthTable, prior: ProductPrior, alpha: AccuracyVector, counts: OutcomeCounts) -> Fraction:
    """Falsifying weight over satisfying weight; ordered inversely to ``Pr(phi | S)``."""
    _check_dims(tt.num_vars, prior, alpha, counts)
    if tt.bits == 0:
        raise ValueError("characteristic fraction is undefined for an unsatisfiable formula")
    ws = weights(prior, alpha, counts)
    sat = sum(w for a, w in enumerate(ws) if tt.bits >> a & 1)
    return (sum(ws) - sat) / sat


def trace_of(counts: OutcomeCounts, a: int) -> tuple[Fraction, ...]:
    """Fraction of all observations that test ``v_i`` and agree with ``a``, per variable."""
    total = counts.total
    if total == 0:
        raise ValueError("the trace of an empty sequence is undefined")
    return tuple(Fraction(counts.matching(a, i), total) for i in range(counts.num_vars))


def cancel_contradictions(counts: OutcomeCounts) -> OutcomeCounts:
    """Drop matched pairs of opposite observations; the posterior is unchanged."""
    m = [min(t, f) for t, f in zip(counts.t, counts.f)]
    return OutcomeCounts(
        tuple(t - x for t, x in zip(counts.t, m)),
        tuple(f - x for f, x in zip(counts.f, m)),
    )


class Likelihood:
    """Integer-scaled joint weights ``Pr(A) * Pr(S | A)`` for fast repeated evaluation.

    With ``p_i = u_i / w_i`` and ``alpha_i = a_i / d_i`` the joint probability of
    an assignment and a sequence with counts ``(t, f)`` is, up to a factor that
    depends only on the counts,
    ``prod_i prior_num_i(A) * (d_i + 2 a_i) ** right_i * (d_i - 2 a_i) ** wrong_i``.
    """

    def __init__(self, n: int, prior: ProductPrior, alpha: AccuracyVector):
        _check_dims(n, prior, alpha)
        self.n = n
        self.right = []
        self.wrong = []
        self.scale = []  # per-observation denominator 2 d_i
        for x in alpha.alpha:
            self.right.append(x.denominator + 2 * x.numerator)
            self.wrong.append(x.denominator - 2 * x.numerator)
            self.scale.append(2 * x.denominator)
        prior_num = []
        prior_den = 1
        for x in prior.p:
            prior_num.append((x.denominator - x.numerator, x.numerator))
            prior_den *= x.denominator
        self.prior_den = prior_den
        self.base = []
        for a in range(1 << n):
            w = 1
            for i in range(n):
                w *= prior_num[i][a >> i & 1]
            self.base.append(w)

    def joint(self, t: Sequence[int], f: Sequence[int]) -> list[int]:
        """Scaled ``Pr(A, S)`` for every assignment ``A``."""
        n = self.n
        # per variable: factor when A(v_i) is F, factor when T
        factors = []
        for i in range(n):
            r, w = self.right[i], self.wrong[i]
            factors.append((r ** f[i] * w ** t[i], r ** t[i] * w ** f[i]))
        out = []
        for a, base in enumerate(self.base):
            x = base
            for i in range(n):
                x *= factors[i][a >> i & 1]
            out.append(x)
        return out

    def denominator(self, t: Sequence[int], f: Sequence[int]) -> int:
        """Integer ``D`` with ``Pr(A, S) = joint(A) / D``."""
        d = self.prior_den
        for i in range(self.n):
            d *= self.scale[i] ** (t[i] + f[i])
        return d

    def split(self, tt_bits: int, t: Sequence[int], f: Sequence[int]) -> tuple[int, int]:
        """Scaled ``(Pr(phi, S), Pr(not phi, S))``."""
        sat = unsat = 0
        for a, x in enumerate(self.joint(t, f)):
            if tt_bits >> a & 1:
                sat += x
            else:
                unsat += x
        return sat, unsat
