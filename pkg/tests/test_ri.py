import json
from fractions import Fraction as F

import pytest

from iagame.formula import TruthTable, enumerate_truth_tables, formula, npn_orbits, permute_inputs, relevance_counts
from iagame.lp import solve
from iagame.ri import (
    CensusReport,
    Verdict,
    admissible_pairs,
    agreement_masks,
    attentive_set,
    census,
    conflict_lp,
    conflict_minimum,
    default_c_grid,
    default_jobs,
    exhibits_ri,
    inattentive_lp,
    m_plus,
    maxpower,
    minimax_power,
    positive_region_empty,
    sample,
    sample_tables,
    t_minus_empty,
    wald_interval,
    worst_case_halfwidth,
)

from oracles import conflict_rows, polytope_vertices

OR, XOR = formula("v1|v2", 2), formula("v1^v2", 2)
TT, FF = 0b11, 0b00


def test_conflict_lp_examples():
    sol = solve(conflict_lp(OR, FF))
    assert sol.value == F(1, 2) and sol.point[:2] == (F(1, 2), F(1, 2))
    assert conflict_minimum(OR, TT) == 0
    assert conflict_minimum(XOR, TT) == F(1, 2)
    # the TT conflict LP for OR has the single row 0 <= m besides the simplex
    assert len(conflict_lp(OR, TT).constraints) == 2


def test_reduced_rows_keep_the_minimum():
    for tt in enumerate_truth_tables(3):
        for a in range(8):
            full = solve(conflict_lp(tt, a)).value
            assert solve(conflict_lp(tt, a, reduce=True)).value == full


def test_agreement_masks_are_maximal():
    masks = agreement_masks(formula("v1|v2|v3", 3), 0)
    assert masks == [0b011, 0b101, 0b110]


def test_maxpower_examples():
    assert maxpower(XOR, TT, (F(1, 2), F(1, 2))) == F(1, 2)
    assert maxpower(OR, TT, (F(1), F(0))) == 0
    lp = conflict_lp(XOR, TT)
    sol = solve(lp)
    assert maxpower(XOR, TT, sol.point[:2]) <= sol.value


def test_minimax_power_examples():
    assert minimax_power(OR) == (0, frozenset({0b01, 0b10, 0b11}))
    assert minimax_power(XOR) == (F(1, 2), frozenset(range(4)))
    assert minimax_power(TruthTable.constant(2, True)) == (0, frozenset(range(4)))


def test_xor2_every_conflict_lp_is_one_half():
    assert all(conflict_minimum(XOR, a) == F(1, 2) for a in range(4))


def test_minimax_invariant_under_complement():
    for tt in enumerate_truth_tables(3):
        assert minimax_power(tt) == minimax_power(~tt)


def test_admissible_pairs():
    assert admissible_pairs(OR) == [(0, 1), (1, 0)]
    assert admissible_pairs(formula("v1", 2)) == [(1, 0)]
    assert admissible_pairs(TruthTable.constant(2, True)) == []


def test_inattentive_lp_examples():
    sol = solve(inattentive_lp(OR, TT, 0, 1, F(1, 4)))
    assert sol.value == 0 and sol.point == (1, 0, 0)
    assert solve(inattentive_lp(XOR, TT, 0, 1, F(1, 4))).value == 1
    assert not solve(inattentive_lp(OR, TT, 0, 1, F(3, 2))).optimal
    with pytest.raises(ValueError):
        inattentive_lp(formula("v1", 2), TT, 0, 1, F(1, 4))


def test_m_plus_examples():
    assert m_plus(OR, F(1, 4)) == 0
    assert m_plus(XOR, F(1, 4)) == 1
    assert m_plus(formula("v1", 1), F(1, 4)) is None


def test_attentive_set():
    tt = formula("v1 | (v2 & v3)", 3)
    assert attentive_set(tt, 0) == {0, 1, 2}
    assert attentive_set(tt, 1) == {1, 2}


def test_t_minus_examples():
    assert t_minus_empty(OR, TT, 0, F(1, 4), 0)
    # a region with c_j < 1 on a simplex is nonempty once m is unrestricted
    assert not t_minus_empty(OR, TT, 0, F(1), F(1))
    # both XOR variables are equally relevant, so c1 + c2 = 1 with both
    # below 1/4 is impossible whatever m+ is
    assert t_minus_empty(XOR, TT, 0, F(1, 4), 1)
    assert t_minus_empty(XOR, TT, 0, F(1, 4), 1, closed=True)
    assert not t_minus_empty(XOR, TT, 0, F(1, 2), 1, closed=True)
    assert t_minus_empty(XOR, TT, 0, F(1, 2), 1)


def test_positive_region():
    # the XOR minimax point (1/2, 1/2) tests both variables
    assert not positive_region_empty(XOR, TT, F(1, 2))
    assert positive_region_empty(OR, FF, F(1, 4))


@pytest.mark.parametrize(
    "text",
    ["v1|v2", "!v1|v2", "v1|!v2", "!v1|!v2", "v1&v2", "!v1&v2", "v1&!v2", "!v1&!v2"],
)
def test_two_variable_disjunctions_and_conjunctions(text):
    v = exhibits_ri(formula(text, 2))
    assert v.verdict is Verdict.EXHIBITS_RI and v.witness_c == F(1, 4)


@pytest.mark.parametrize("text,n", [("v1", 2), ("!v1", 2), ("T", 2), ("F", 2), ("v1|(!v1&v2&v3)", 3)])
def test_unknown_examples(text, n):
    assert exhibits_ri(formula(text, n)).verdict is Verdict.UNKNOWN


def test_xor_family_unknown():
    for n in (1, 2, 3, 4):
        assert not exhibits_ri(TruthTable.xor(n)).exhibits_ri
        assert not exhibits_ri(~TruthTable.xor(n)).exhibits_ri


def test_four_variable_example():
    v = exhibits_ri(formula("(v1|v2)&(v2^v3^v4)", 4))
    assert v.exhibits_ri
    assert (v.witness_c, v.m_plus, v.minimax) == (F(1, 8), F(1, 2), F(1, 2))


def test_one_variable_always_unknown():
    assert all(not exhibits_ri(tt).exhibits_ri for tt in enumerate_truth_tables(1))


def test_explain_and_reasons():
    v = exhibits_ri(XOR, explain=True)
    assert v.reason and v.diagnostics
    assert exhibits_ri(OR, explain=True).diagnostics == ("C=1/4: m+=0",)


def test_grid_and_rule_validation():
    with pytest.raises(ValueError):
        exhibits_ri(OR, c_grid=[0])
    with pytest.raises(ValueError):
        exhibits_ri(OR, rule="other")
    assert default_c_grid(2) == (F(1, 4), F(1, 8), F(1, 16), F(1, 32))


def test_literal_rule_certifies_constants_and_xor():
    # the literal reading accepts tables known not to show inattention
    extra = [
        tt.bitstring()
        for tt in enumerate_truth_tables(2)
        if exhibits_ri(tt, rule="literal").exhibits_ri and not exhibits_ri(tt).exhibits_ri
    ]
    assert extra == ["0000", "0110", "1001", "1111"]
    assert census(2, jobs=1, rule="literal").ri == 12


def test_verdict_invariant_under_symmetries():
    perms = [(1, 2, 0), (1, 0, 2)]
    for tt in enumerate_truth_tables(3):
        v = exhibits_ri(tt).exhibits_ri
        assert exhibits_ri(~tt).exhibits_ri == v
        for p in perms:
            assert exhibits_ri(permute_inputs(tt, p)).exhibits_ri == v


def _optimal_vertices(tt, a):
    n = tt.num_vars
    rows = [(list(c), s, r) for c, s, r in {(tuple(c), s, r) for c, s, r in conflict_rows(tt.bits, n, a)}]
    verts = polytope_vertices(rows, [F(0)] * (n + 1), [F(1)] * (n + 1))
    best = min(x[-1] for x in verts)
    return best, [x for x in verts if x[-1] == best]


def test_witness_implies_inattentive_optimal_vertices():
    for n in (2, 3):
        for tt, _ in npn_orbits(n):
            v = exhibits_ri(tt)
            if not v.exhibits_ri:
                continue
            rel = relevance_counts(tt)
            opt = {a: _optimal_vertices(tt, a) for a in range(tt.size)}
            star = min(m for m, _ in opt.values())
            assert star == v.minimax
            for a, (m, verts) in opt.items():
                if m != star:
                    continue
                for x in verts:
                    assert any(
                        i != j and rel[i] <= rel[j] and x[i] >= v.witness_c and x[j] == 0
                        for i in range(n)
                        for j in range(n)
                    )


def test_census_small_rows():
    assert [(r.ri, r.unknown) for r in (census(n, jobs=1) for n in (1, 2, 3))] == [(0, 4), (8, 8), (40, 216)]


def test_census_without_symmetry_agrees():
    a, b = census(3, jobs=1), census(3, jobs=1, symmetry=False)
    assert (a.ri, a.witness_histogram) == (b.ri, b.witness_histogram)


def test_census_deterministic_across_jobs():
    assert census(3, jobs=1).to_json() == census(3, jobs=2).to_json()


def test_census_keeps_verdicts_and_round_trips():
    r = census(2, jobs=1, symmetry=False, keep_verdicts=True)
    assert r.verdicts["0111"] == "ExhibitsRI"
    assert r.verdicts["0110"] == "Unknown"
    text = r.to_json()
    assert CensusReport.from_json(text).to_json() == text
    assert json.loads(text)["schema_version"] == 1
    with pytest.raises(ValueError):
        CensusReport.from_dict({**json.loads(text), "schema_version": 99})


def test_census_limits():
    with pytest.raises(ValueError):
        census(5)


def test_census_csv():
    rows = census(2, jobs=1).csv_rows()
    assert rows[0][:5] == ["n", "mode", "total", "ri", "unknown"]
    assert rows[1][:5] == [2, "exhaustive", 16, 8, 8]


def test_sample_tables_deterministic():
    a = sample_tables(7, 5, seed=11)
    assert a == sample_tables(7, 5, seed=11)
    assert a != sample_tables(7, 5, seed=12)
    assert all(0 <= t < 1 << 128 for t in a)
    assert all(0 <= t < 16 for t in sample_tables(2, 50, seed=0))


def test_sample_report():
    a = sample(3, 30, seed=5, jobs=1)
    assert a.to_json() == sample(3, 30, seed=5, jobs=2).to_json()
    assert a.mode == "sample" and a.total == 30 and a.ri + a.unknown == 30
    lo, hi = a.ci
    assert lo <= a.fraction <= hi
    with pytest.raises(ValueError):
        sample(3, 0, seed=1)


def test_intervals():
    lo, hi = wald_interval(585, 4000)
    assert lo < 585 / 4000 < hi
    assert hi - lo <= 2 * worst_case_halfwidth(4000)
    assert worst_case_halfwidth(4000) == pytest.approx(0.0155, abs=1e-4)


def test_default_jobs_env(monkeypatch):
    monkeypatch.setenv("IAG_JOBS", "3")
    assert default_jobs() == 3
    monkeypatch.setenv("IAG_JOBS", "0")
    with pytest.raises(ValueError):
        default_jobs()
