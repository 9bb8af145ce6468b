import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from expertrev.collection import CaseCollection, WorldSet
from expertrev.errors import BottomReportError, BudgetExceeded, NotApplicable, UnknownNameError
from expertrev.expertise import get_universe
from expertrev.operators import (
    EXCESS_MIN,
    OPERATOR_NAMES,
    PART_RANK,
    VAR_RANK,
    Report,
    ReportSequence,
    excess_min_d,
    in_belief,
    in_knowledge,
    make_operator,
    soundness_collection,
    star_consistent,
)
from expertrev.propositional import Signature, parse_expertise_formula, parse_formula

ONE = Signature(["x"], ["c", "d"], ["*", "a", "b"])  # 16 worlds
TWO = Signature(["x", "y"], ["c"], ["*", "a"])  # 60 worlds


def report_sequences(sig, max_len=3):
    report = st.tuples(
        st.sampled_from(sig.sources),
        st.sampled_from(sig.cases),
        st.integers(1, sig.full_mask),
    )
    return st.lists(report, max_size=max_len).map(lambda ts: ReportSequence.of(sig, ts))


@pytest.mark.parametrize("name", OPERATOR_NAMES)
@pytest.mark.parametrize("sig", [ONE, TWO], ids=["one-var", "two-var"])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_operator_matches_set_oracle(name, sig, data):
    seq = data.draw(report_sequences(sig))
    worlds = list(get_universe(sig))
    X, Y = oracle.operator(name, worlds, seq)
    out = make_operator(name, sig)(seq)
    assert set(out.possible) == set(X)
    assert set(out.plausible) == set(Y)


def test_rank_vectors_match_scalar_and_oracle():
    u = get_universe(Signature(["x", "y"], ["c1", "c2"], ["*", "a", "b"]))
    for i in range(0, u.size, 37):
        w = u.world(i)
        assert VAR_RANK.array(u)[i] == VAR_RANK(w) == oracle.var_rank(w)
        assert PART_RANK.array(u)[i] == PART_RANK(w) == oracle.part_rank(w)


@settings(max_examples=40, deadline=None)
@given(report_sequences(TWO, 4))
def test_excess_vector_matches_scalar(seq):
    u = get_universe(TWO)
    total = np.zeros(u.size, dtype=np.int64)
    for r in seq:
        total = np.minimum(total + EXCESS_MIN.disagreement_values(u, r), 1 << 60)
    for i in range(0, u.size, 7):
        scalar = EXCESS_MIN.total(u.world(i), seq)
        assert (total[i] >= 1 << 60) == (scalar == math.inf) == (oracle.excess_score(u.world(i), seq) == math.inf)
        if scalar != math.inf:
            assert total[i] == scalar == oracle.excess_score(u.world(i), seq)


def test_excess_disagreement_of_unsound_report_is_infinite():
    u = get_universe(ONE)
    r = Report.make(ONE, "*", "c", "x")
    w = next(w for w in u if w.valuation("c") == 0)
    assert excess_min_d(w, r) == math.inf


def test_weak_mb_with_prior_knowledge():
    sig = TWO
    prior = CaseCollection(sig, {"c": [parse_expertise_formula("E(a, x)", sig)]})
    op = make_operator("weak-mb", sig, prior=prior)
    seq = ReportSequence.of(sig, [("a", "c", "y")])
    out = op(seq)
    f = parse_expertise_formula("E(a, x)", sig)
    assert in_knowledge(out, "c", f)
    assert in_belief(out, "c", f)
    assert out.possible <= make_operator("weak-mb", sig)(seq).possible


def test_empty_sequence_and_reliable_reports():
    op = make_operator("var-based-cond", ONE)
    empty = op(ReportSequence(ONE))
    assert empty.possible == WorldSet.all(get_universe(ONE))
    out = op(ReportSequence.of(ONE, [("*", "c", "x")]))
    assert out.holds("c", parse_formula("x", ONE))
    assert not out.holds("d", parse_formula("x", ONE))


def test_inconsistent_reliable_reports_give_empty_output():
    seq = ReportSequence.of(ONE, [("*", "c", "x"), ("*", "c", "!x")])
    assert not star_consistent(seq)
    for name in OPERATOR_NAMES:
        out = make_operator(name, ONE)(seq)
        assert out.possible_count == out.plausible_count == 0


def test_report_construction():
    r = Report.make(TWO, "a", "c", "x | y")
    assert str(r) == "<a, c, x | y>"
    assert r.mask == 0b1110
    assert Report.make(TWO, "a", "c", 0b1110).key == r.key
    with pytest.raises(BottomReportError):
        Report.make(TWO, "a", "c", "x & !x")
    with pytest.raises(UnknownNameError):
        Report.make(TWO, "z", "c", "x")
    with pytest.raises(UnknownNameError):
        Report.make(TWO, "a", "e", "x")


def test_sequence_behaviour():
    s = ReportSequence.of(TWO, [("a", "c", "x"), ("*", "c", "y")])
    t = ReportSequence.of(TWO, [("a", "c", "!!x"), ("*", "c", "y")])
    assert s == t and hash(s) == hash(t)
    assert len(s + s[0]) == 3
    assert isinstance(s[:1], ReportSequence)
    assert s.restrict("c") == {("a", 0b1010), ("*", 0b1100)}
    assert s.to_list() == [["a", "c", "x"], ["*", "c", "y"]]
    g = soundness_collection(s)
    assert len(g["c"]) == 2


def test_outputs_are_cached_by_semantic_key():
    op = make_operator("excess-min", TWO)
    a = op(ReportSequence.of(TWO, [("a", "c", "x")]))
    b = op(ReportSequence.of(TWO, [("a", "c", "!!x")]))
    assert a is b
    op.clear_cache()
    assert op(ReportSequence.of(TWO, [("a", "c", "x")])) is not a


def test_operator_rejects_foreign_sequences_and_bad_names():
    with pytest.raises(ValueError):
        make_operator("weak-mb", ONE)(ReportSequence(TWO))
    with pytest.raises(UnknownNameError):
        make_operator("nope", ONE)
    with pytest.raises(ValueError):
        make_operator("weak-mb", ONE, engine="fast")
    prior = CaseCollection(ONE, {"c": [parse_expertise_formula("x", ONE)]})
    with pytest.raises(NotApplicable):
        make_operator("weak-mb", ONE, prior=prior, engine="decomposed")


def test_prior_over_budget_is_refused():
    big = Signature(["p", "q", "r"], ["c"], ["*", "i", "j"])
    prior = CaseCollection(big, {"c": [parse_expertise_formula("p", big)]})
    with pytest.raises(BudgetExceeded):
        make_operator("weak-mb", big, prior=prior)(ReportSequence(big))
