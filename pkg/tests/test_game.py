import itertools
from fractions import Fraction as F

import pytest

from iagame.errors import ResourceLimitExceeded
from iagame.formula import TruthTable, formula
from iagame.game import (
    GameSpec,
    StateSpaceTooLarge,
    Strategy,
    evaluate_strategy,
    first_moves,
    optimal_strategy,
    optimal_value,
    outcome_probability,
    random_test_monte_carlo,
    random_test_value,
    render_strategy,
    solve,
    state_count,
    uniform_split_value,
)
from iagame.prob import AccuracyVector, Action, OutcomeCounts, Payoffs, ProductPrior

from oracles import fixed_strategy_value, game_value

QUARTER = F(1, 4)
PAY = Payoffs(1, -16)


def make(text, n, k, alpha=QUARTER, payoffs=PAY, prior=None):
    prior = prior or ProductPrior.uniform(n)
    return GameSpec(formula(text, n), prior, k, AccuracyVector.uniform(n, alpha), payoffs)


def guess_t_iff(pred):
    return lambda c: Action.GUESS_T if pred(c) else Action.NO_GUESS


def test_outcome_probability():
    g1 = make("v1", 1, 1)
    assert outcome_probability(g1, OutcomeCounts.empty(1), 0, True) == F(1, 2)
    after = OutcomeCounts((1,), (0,))
    assert outcome_probability(g1, after, 0, True) == F(5, 8)
    g = make("v1|v2", 2, 2)
    c = OutcomeCounts((1, 0), (0, 2))
    for i in range(2):
        assert outcome_probability(g, c, i, True) + outcome_probability(g, c, i, False) == 1


def test_twovaror_value():
    g = make("v1|v2", 2, 2)
    assert optimal_value(g) == F(3, 64)
    assert optimal_value(make("v1|v2", 2, 3)) == F(39, 256)


def test_k0_values():
    assert optimal_value(make("T", 2, 0)) == 1
    assert optimal_value(make("v1", 2, 0)) == 0


def test_optimal_strategy_shape():
    g = make("v1|v2", 2, 2)
    s = optimal_strategy(g)
    root = OutcomeCounts.empty(2)
    assert s.test(root) == 0
    assert s.test(root.extend(0, True)) == 0
    leaves = {
        OutcomeCounts((2, 0), (0, 0)): Action.GUESS_T,
        OutcomeCounts((1, 0), (1, 0)): Action.NO_GUESS,
        OutcomeCounts((0, 0), (2, 0)): Action.NO_GUESS,
    }
    for c, act in leaves.items():
        assert s.action(c) is act
    assert evaluate_strategy(g, s) == optimal_value(g)


def test_first_moves_report_ties():
    g = make("v1|v2", 2, 2)
    assert first_moves(g) == [0, 1]
    assert first_moves(make("v2", 2, 3)) == [1]
    assert first_moves(make("v2", 2, 2)) == [0, 1]  # worth 0 either way


def test_test_one_variable_twice_is_optimal():
    g = make("v1|v2", 2, 2)
    s = Strategy(lambda c: 0, guess_t_iff(lambda c: c.t[0] == 2))
    assert evaluate_strategy(g, s) == optimal_value(g)


def test_fixed_v1_then_v2_strategy_is_negative():
    g = make("v1|v2", 2, 2)
    s = Strategy(lambda c: c.total, guess_t_iff(lambda c: c.t == (1, 1)))
    value = evaluate_strategy(g, s)
    assert value == F(-1, 64)
    oracle = fixed_strategy_value(0b1110, (F(1, 2),) * 2, (QUARTER,) * 2, (0, 1), lambda o: o == (True, True), 1, -16)
    assert value == oracle


def test_never_guessing_is_worth_zero():
    g = make("v1|v2", 2, 3)
    assert evaluate_strategy(g, Strategy(lambda c: 1, lambda c: Action.NO_GUESS)) == 0


def test_k4_strategy_from_the_text_is_optimal():
    g = make("v1|v2", 2, 4)
    best = optimal_strategy(g)

    def tests(c):
        if c.f[0] == 1 and c.t[0] == 0:
            return 1
        return best.test(c)

    def actions(c):
        if c.f[0] == 1 and c.t[0] == 0:
            return Action.GUESS_T if c.t[1] == 3 else Action.NO_GUESS
        return best.action(c)

    assert evaluate_strategy(g, Strategy(tests, actions)) == optimal_value(g) == F(235, 1024)


def test_single_variable_formula_only_tests_it():
    # off the profitable path every test is worth 0, so check value and root move
    g = make("v2", 3, 3)
    only_v2 = Strategy(lambda c: 1, optimal_strategy(g).action)
    assert evaluate_strategy(g, only_v2) == optimal_value(g) > 0
    assert first_moves(g) == [1]


@pytest.mark.parametrize("k", [0, 1, 2, 3])
@pytest.mark.parametrize("bits", [0b1110, 0b0110, 0b1000, 0b0010, 0b1010])
def test_solver_matches_ordered_history_oracle(bits, k):
    prior = ProductPrior((F(1, 3), F(1, 2)))
    alpha = AccuracyVector((QUARTER, F(1, 8)))
    pay = Payoffs(1, -4)
    g = GameSpec(TruthTable(2, bits), prior, k, alpha, pay)
    assert optimal_value(g) == game_value(bits, prior.p, alpha.alpha, k, pay.g, pay.b)


def test_heuristic_values():
    g = make("v1|v2", 2, 2)
    assert random_test_value(g) == F(3, 128)
    assert uniform_split_value(g) == 0
    g0 = make("v1|v2", 2, 0)
    assert random_test_value(g0) == optimal_value(g0)
    g3 = make("v1", 2, 3)
    assert random_test_value(g3) > 0
    one = make("v1", 1, 3)
    assert uniform_split_value(one) == random_test_value(one)
    with pytest.raises(ValueError):
        uniform_split_value(make("v1|v2", 2, 3))


def test_monte_carlo_close_to_exact():
    g = make("v1|v2", 2, 2)
    est = random_test_monte_carlo(g, 20000, seed=1)
    assert abs(est - float(random_test_value(g))) < 0.02
    assert random_test_monte_carlo(g, 500, seed=7) == random_test_monte_carlo(g, 500, seed=7)


def test_value_monotone_in_k():
    values = [optimal_value(make("v1|v2", 2, k)) for k in range(5)]
    assert values == sorted(values)


def test_state_cap():
    g = make("v1|v2|v3", 3, 6)
    assert state_count(3, 6) <= 924
    with pytest.raises(StateSpaceTooLarge):
        optimal_value(g, state_cap=10)
    assert issubclass(StateSpaceTooLarge, ResourceLimitExceeded)


def test_solve_report_and_render():
    g = make("v1|v2", 2, 2)
    report = solve(g)
    assert report.value == F(3, 64) and report.states > 0
    lines = render_strategy(g, report.strategy)
    assert lines[0] == "test v1"
    assert "GuessT" in lines[2]
    assert render_strategy(g, report.strategy, depth=1)[1].endswith("...")


def test_spec_validation():
    with pytest.raises(ValueError):
        make("v1", 1, -1)
    with pytest.raises(ValueError):
        GameSpec(formula("v1", 1), ProductPrior.uniform(2), 1, AccuracyVector.uniform(1, QUARTER), PAY)


def test_exhaustive_tiny_games_match_oracle():
    prior = (F(1, 2), F(1, 2))
    for bits, k in itertools.product(range(16), (1, 2)):
        g = GameSpec(TruthTable(2, bits), ProductPrior(prior), k, AccuracyVector.uniform(2, QUARTER), Payoffs(3, -1))
        assert optimal_value(g) == game_value(bits, prior, (QUARTER, QUARTER), k, 3, -1)
