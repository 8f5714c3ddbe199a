"""Expected values and optimal strategies for information-acquisition games.

Histories are keyed by :class:`~iagame.prob.OutcomeCounts`: the posterior
after a test-outcome sequence depends only on its counts, and so does every
continuation, so backward induction over counts is exact.

Internally values are carried "probability-weighted": ``U(S) = Pr(S) * V(S)``
where ``Pr(S)`` is the probability of observing the outcomes in ``S`` given
the tests in ``S``.  Then ``U(S) = sum_b U(S + (i, b))`` for the tested
variable ``i`` and no division is needed until the root, where ``Pr = 1``.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from .errors import ResourceLimitExceeded
from .formula import TruthTable
from .prob import (
    HALF,
    AccuracyVector,
    Action,
    Likelihood,
    OutcomeCounts,
    Payoffs,
    ProductPrior,
    best_action,
    posterior_formula,
    weights,
)

DEFAULT_STATE_CAP = 5_000_000


class StateSpaceTooLarge(ResourceLimitExceeded):
    """The count-state space of a game exceeds the configured cap."""


@dataclass(frozen=True)
class GameSpec:
    tt: TruthTable
    prior: ProductPrior
    k: int
    alpha: AccuracyVector
    payoffs: Payoffs

    def __post_init__(self) -> None:
        n = self.tt.num_vars
        if self.prior.num_vars != n or self.alpha.num_vars != n:
            raise ValueError(f"prior and accuracies must have {n} entries")
        if self.k < 0:
            raise ValueError("the test budget k must be nonnegative")

    @property
    def n(self) -> int:
        return self.tt.num_vars


class Strategy:
    """Which variable to test after each short history, and what to do after ``k`` tests.

    ``tests`` and ``actions`` may be mappings keyed by :class:`OutcomeCounts`
    or callables taking one.
    """

    def __init__(self, tests: Mapping | Callable, actions: Mapping | Callable):
        self._tests = tests
        self._actions = actions

    def test(self, counts: OutcomeCounts) -> int:
        return self._tests(counts) if callable(self._tests) else self._tests[counts]

    def action(self, counts: OutcomeCounts) -> Action:
        return self._actions(counts) if callable(self._actions) else self._actions[counts]


@dataclass(frozen=True)
class ValueReport:
    value: Fraction
    strategy: Strategy | None = None
    states: int = 0


def outcome_probability(game: GameSpec, counts: OutcomeCounts, i: int, value: bool) -> Fraction:
    """Probability that the next test of ``v_i`` reads ``value`` given the history."""
    if not 0 <= i < game.n:
        raise ValueError(f"variable index {i} out of range")
    ws = weights(game.prior, game.alpha, counts)
    right = HALF + game.alpha.alpha[i]
    total = sum(ws)
    hit = sum(w for a, w in enumerate(ws) if bool(a >> i & 1) == value)
    return (hit * right + (total - hit) * (1 - right)) / total


def state_count(n: int, k: int) -> int:
    """Number of count vectors with total at most ``k`` over ``n`` variables."""
    return math.comb(k + 2 * n, 2 * n)


class _Solver:
    def __init__(self, game: GameSpec, state_cap: int):
        if state_count(game.n, game.k) > state_cap:
            raise StateSpaceTooLarge(
                f"{state_count(game.n, game.k)} count states for n={game.n}, k={game.k} exceed the cap {state_cap}"
            )
        self.game = game
        self.lik = Likelihood(game.n, game.prior, game.alpha)
        self.g = game.payoffs.g
        self.b = game.payoffs.b

    def leaf(self, t: tuple, f: tuple) -> tuple[Action, Fraction]:
        """Best final action and its probability-weighted value."""
        sat, unsat = self.lik.split(self.game.tt.bits, t, f)
        den = self.lik.denominator(t, f)
        vt = self.g * sat + self.b * unsat
        vf = self.g * unsat + self.b * sat
        if max(vt, vf) <= 0:
            return Action.NO_GUESS, Fraction(0)
        if vt >= vf:
            return Action.GUESS_T, Fraction(vt) / den
        return Action.GUESS_F, Fraction(vf) / den

    def action_value(self, action: Action, t: tuple, f: tuple) -> Fraction:
        if action is Action.NO_GUESS:
            return Fraction(0)
        sat, unsat = self.lik.split(self.game.tt.bits, t, f)
        den = self.lik.denominator(t, f)
        if action is Action.GUESS_T:
            return Fraction(self.g * sat + self.b * unsat) / den
        return Fraction(self.g * unsat + self.b * sat) / den


def _ensure_recursion(k: int) -> None:
    if 2 * k + 200 > sys.getrecursionlimit():
        sys.setrecursionlimit(2 * k + 200)


def _children(t: tuple, f: tuple, i: int):
    t1 = t[:i] + (t[i] + 1,) + t[i + 1 :]
    f1 = f[:i] + (f[i] + 1,) + f[i + 1 :]
    return (t1, f), (t, f1)


def _solve(game: GameSpec, state_cap: int, keep_strategy: bool):
    s = _Solver(game, state_cap)
    n, k = game.n, game.k
    memo: dict[tuple, Fraction] = {}
    tests: dict[OutcomeCounts, int] = {}
    actions: dict[OutcomeCounts, Action] = {}
    _ensure_recursion(k)

    def value(t: tuple, f: tuple, depth: int) -> Fraction:
        key = t + f
        hit = memo.get(key)
        if hit is not None:
            return hit
        if depth == k:
            act, v = s.leaf(t, f)
            if keep_strategy:
                actions[OutcomeCounts(t, f)] = act
        else:
            v, best_i = None, 0
            for i in range(n):
                (tt_, ft_), (tf_, ff_) = _children(t, f, i)
                cand = value(tt_, ft_, depth + 1) + value(tf_, ff_, depth + 1)
                if v is None or cand > v:
                    v, best_i = cand, i
            if keep_strategy:
                tests[OutcomeCounts(t, f)] = best_i
        memo[key] = v
        return v

    zero = (0,) * n
    if n == 0 and k > 0:
        # nothing can be tested; the budget is irrelevant
        act, v = s.leaf(zero, zero)
        return v, Strategy({}, lambda c: act), 1
    v = value(zero, zero, 0)
    return v, Strategy(tests, actions), len(memo)


def first_moves(game: GameSpec, state_cap: int = DEFAULT_STATE_CAP) -> list[int]:
    """All variables whose test at the root starts some optimal strategy."""
    if game.k == 0 or game.n == 0:
        return []
    values = [_solve_with_root(game, state_cap, i) for i in range(game.n)]
    best = max(values)
    return [i for i, v in enumerate(values) if v == best]


def _solve_with_root(game: GameSpec, state_cap: int, root: int) -> Fraction:
    s = _Solver(game, state_cap)
    n, k = game.n, game.k
    memo: dict[tuple, Fraction] = {}
    _ensure_recursion(k)

    def value(t: tuple, f: tuple, depth: int) -> Fraction:
        key = t + f
        hit = memo.get(key)
        if hit is not None:
            return hit
        if depth == k:
            v = s.leaf(t, f)[1]
        else:
            v = max(sum(value(*child, depth + 1) for child in _children(t, f, i)) for i in range(n))
        memo[key] = v
        return v

    zero = (0,) * n
    return sum(value(*child, 1) for child in _children(zero, zero, root))


def optimal_value(game: GameSpec, state_cap: int = DEFAULT_STATE_CAP) -> Fraction:
    return _solve(game, state_cap, keep_strategy=False)[0]


def optimal_strategy(game: GameSpec, state_cap: int = DEFAULT_STATE_CAP) -> Strategy:
    """An optimal strategy; ties go to the lowest variable index."""
    return _solve(game, state_cap, keep_strategy=True)[1]


def solve(game: GameSpec, state_cap: int = DEFAULT_STATE_CAP) -> ValueReport:
    v, strategy, states = _solve(game, state_cap, keep_strategy=True)
    return ValueReport(v, strategy, states)


def evaluate_strategy(game: GameSpec, strategy: Strategy) -> Fraction:
    """Exact expected payoff of ``strategy``."""
    s = _Solver(game, sys.maxsize)
    n, k = game.n, game.k

    def value(t: tuple, f: tuple, depth: int) -> Fraction:
        counts = OutcomeCounts(t, f)
        if depth == k or n == 0:
            return s.action_value(strategy.action(counts), t, f)
        i = strategy.test(counts)
        if not 0 <= i < n:
            raise ValueError(f"strategy tests variable index {i} at {counts}")
        (tt_, ft_), (tf_, ff_) = _children(t, f, i)
        return value(tt_, ft_, depth + 1) + value(tf_, ff_, depth + 1)

    zero = (0,) * n
    return value(zero, zero, 0)


def _scheduled_value(game: GameSpec, choose: Callable[[tuple, tuple, int], list[tuple[Fraction, int]]]) -> Fraction:
    """Value of a strategy that mixes over tests by a count-dependent schedule and ends with the best action."""
    s = _Solver(game, sys.maxsize)
    n, k = game.n, game.k
    memo: dict[tuple, Fraction] = {}

    def value(t: tuple, f: tuple, depth: int) -> Fraction:
        key = t + f
        hit = memo.get(key)
        if hit is not None:
            return hit
        if depth == k or n == 0:
            v = s.leaf(t, f)[1]
        else:
            v = Fraction(0)
            for w, i in choose(t, f, depth):
                (tt_, ft_), (tf_, ff_) = _children(t, f, i)
                v += w * (value(tt_, ft_, depth + 1) + value(tf_, ff_, depth + 1))
        memo[key] = v
        return v

    zero = (0,) * n
    return value(zero, zero, 0)


def random_test_value(game: GameSpec) -> Fraction:
    """Expected payoff of testing a uniformly random variable at every step."""
    n = game.n
    uniform = [(Fraction(1, n), i) for i in range(n)] if n else []
    return _scheduled_value(game, lambda t, f, depth: uniform)


def uniform_split_value(game: GameSpec) -> Fraction:
    """Expected payoff of testing every variable ``k / n`` times."""
    n, k = game.n, game.k
    if n == 0 or k % n:
        raise ValueError(f"the budget k={k} is not a multiple of n={n}")
    per = k // n
    return _scheduled_value(game, lambda t, f, depth: [(Fraction(1), depth // per)])


def random_test_monte_carlo(game: GameSpec, samples: int, seed: int) -> float:
    """Monte-Carlo estimate of :func:`random_test_value` (cross-check only)."""
    if samples <= 0:
        raise ValueError("samples must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    n, k = game.n, game.k
    p_true = [float(x) for x in game.prior.p]
    right = [0.5 + float(x) for x in game.alpha.alpha]
    cache: dict[OutcomeCounts, Action] = {}
    total = 0.0
    for _ in range(samples):
        a = sum(1 << i for i in range(n) if rng.random() < p_true[i])
        t, f = [0] * n, [0] * n
        for _ in range(k if n else 0):
            i = int(rng.integers(n))
            truth = bool(a >> i & 1)
            seen = truth if rng.random() < right[i] else not truth
            (t if seen else f)[i] += 1
        counts = OutcomeCounts(tuple(t), tuple(f))
        act = cache.get(counts)
        if act is None:
            p = posterior_formula(game.tt, game.prior, game.alpha, counts)
            act = cache[counts] = best_action(p, game.payoffs)[0]
        if act is Action.NO_GUESS:
            continue
        correct = game.tt(a) == (act is Action.GUESS_T)
        total += float(game.payoffs.g if correct else game.payoffs.b)
    return total / samples


def render_strategy(game: GameSpec, strategy: Strategy, depth: int | None = None) -> list[str]:
    """Indented text rendering of the strategy tree, truncated at ``depth`` tests."""
    n, k = game.n, game.k
    limit = k if depth is None else min(depth, k)
    lines: list[str] = []

    def walk(counts: OutcomeCounts, level: int, label: str) -> None:
        pad = "  " * level
        if level == k or n == 0:
            lines.append(f"{pad}{label}{strategy.action(counts)}")
            return
        i = strategy.test(counts)
        if level == limit:
            lines.append(f"{pad}{label}test v{i + 1} ...")
            return
        lines.append(f"{pad}{label}test v{i + 1}")
        walk(counts.extend(i, True), level + 1, f"v{i + 1}~T: ")
        walk(counts.extend(i, False), level + 1, f"v{i + 1}~F: ")

    walk(OutcomeCounts.empty(n), 0, "")
    return lines
