import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfklab.errors import EvenLambda, InvalidTorusParams, OddSignature
from hfklab.hfk import HfkTable, alternating_hfk, lspace_hfk
from hfklab.laurent import LaurentPoly, parse_poly, torus_alexander
from hfklab.periodic import (
    PeriodicPair,
    check_filtered_rank,
    check_total_rank,
    check_alternating_alexander,
    check_lspace_alexander,
    lift_grading,
    max_grading_check,
    mirror,
)

UNKNOT = HfkTable({(0, 0): 1})
TREFOIL = lspace_hfk(torus_alexander(2, 3))
FIG8 = parse_poly("-t + 3 - t^-1")
K10_122 = parse_poly("-2t^3 + 11t^2 - 24t + 31 - 24t^-1 + 11t^-2 - 2t^-3")

tables = st.dictionaries(
    st.tuples(st.integers(-4, 4), st.integers(-3, 3)), st.integers(1, 4), max_size=8
).map(HfkTable)


def brute_filtered_rank(up, down, lam, a_range, q_range):
    """Inequalities straight from the definition, with no prefix sums."""
    ok = True
    for a in a_range:
        at = 2 * a + (lam - 1) // 2
        for q in q_range:
            lhs = sum(r for (m, x), r in up.items() if m >= q and x in (at, at + 1))
            rhs = sum(r for (m, x), r in down.items() if 2 * m >= q + 1 and x == a)
            ok &= lhs >= rhs
            lhs = sum(r for (m, x), r in up.items() if m <= q and x in (-at, -at - 1))
            rhs = sum(r for (m, x), r in down.items() if 2 * m <= q - 1 and x == -a)
            ok &= lhs >= rhs
    return ok


def test_lift_grading():
    assert lift_grading(0, 1) == 0
    assert lift_grading(1, 1) == 2
    assert lift_grading(0, 3) == 1
    with pytest.raises(EvenLambda):
        lift_grading(0, 2)


def test_pair_requires_odd_lambda():
    with pytest.raises(EvenLambda):
        PeriodicPair(UNKNOT, UNKNOT, 4)


def test_total_rank_examples():
    rep = check_total_rank(PeriodicPair(UNKNOT, UNKNOT, 1))
    assert rep.passed
    row = [r for r in rep.rows if r.a == 0][0]
    assert (row.terms, row.rhs) == ((1, 0), 1)

    rep = check_total_rank(PeriodicPair(TREFOIL, UNKNOT, 3))
    row = [r for r in rep.rows if r.a == 0][0]
    assert rep.passed and row.terms == (1, 0) and row.rhs == 1

    rep = check_total_rank(PeriodicPair(HfkTable({}), UNKNOT, 1))
    assert not rep.passed
    assert rep.first_failure == {"a": 0}


def test_filtered_rank_trefoil_over_unknot():
    rep = check_filtered_rank(PeriodicPair(TREFOIL, UNKNOT, 3))
    assert rep.passed
    row = [r for r in rep.rows if r.kind == "first" and r.a == 0 and r.q == 0][0]
    assert (row.lhs, row.rhs) == (1, 0)


def test_filtered_rank_designed_failure():
    rep = check_filtered_rank(PeriodicPair(HfkTable({(-3, 0): 1}), HfkTable({(0, 0): 1}), 1))
    assert not rep.passed
    assert rep.first_failure["a"] == 0


def test_filtered_rank_rejects_unknown_mode():
    with pytest.raises(ValueError):
        check_filtered_rank(PeriodicPair(UNKNOT, UNKNOT, 1), rows="some")


@given(tables, tables, st.sampled_from([-3, -1, 1, 3, 5]))
@settings(max_examples=300)
def test_filtered_rank_matches_definition(up, down, lam):
    rep = check_filtered_rank(PeriodicPair(up, down, lam))
    crit = check_filtered_rank(PeriodicPair(up, down, lam), rows="critical")
    assert rep.passed == crit.passed
    assert rep.passed == brute_filtered_rank(up, down, lam, range(-5, 6), range(-14, 15))


@given(tables, tables, st.sampled_from([-1, 1, 3]))
@settings(max_examples=200)
def test_total_rank_matches_definition(up, down, lam):
    rep = check_total_rank(PeriodicPair(up, down, lam))
    expect = True
    for a in range(-6, 7):
        at = 2 * a + (lam - 1) // 2
        lhs = sum(r for (_, x), r in up.items() if x in (at, at + 1))
        expect &= lhs >= sum(r for (_, x), r in down.items() if x == a)
    assert rep.passed == expect


def test_mirror():
    t = HfkTable({(1, 2): 3, (-1, 0): 1})
    assert mirror(t).ranks == {(-1, -2): 3, (1, 0): 1}
    assert mirror(mirror(t)) == t


def test_alternating_alexander_example():
    rep = check_alternating_alexander(FIG8, 0, K10_122, 0, 1)
    assert rep.passed
    rank_rows = [(r.terms, r.rhs) for r in rep.filter("rank")]
    assert rank_rows == [((11, 2), 1), ((31, 24), 3), ((11, 24), 1)]
    sig_rows = [(r.lhs, r.rhs) for r in rep.filter("signature")]
    assert sig_rows == [(2, 1), (0, -1), (-2, -3)]


def test_alternating_alexander_unknot():
    one = LaurentPoly.constant(1)
    assert check_alternating_alexander(one, 0, one, 0, 1).passed
    assert check_alternating_alexander(one, 0, one, 0, -1).passed
    # the signature bounds pin lambda down when both knots are trivial
    assert not check_alternating_alexander(one, 0, one, 0, 3).passed


def test_alternating_alexander_rejects():
    with pytest.raises(OddSignature):
        check_alternating_alexander(FIG8, 1, K10_122, 0, 1)
    with pytest.raises(EvenLambda):
        check_alternating_alexander(FIG8, 0, K10_122, 0, 2)


def test_lspace_alexander_examples():
    assert check_lspace_alexander(torus_alexander(3, 5), torus_alexander(6, 5), 5).passed
    one = LaurentPoly.constant(1)
    assert check_lspace_alexander(one, one, 1).passed
    # three terms above the bound of 2n + (lambda+1)/2 = 1
    wide = parse_poly("t^100 - t^99 + t^98 - 1 + t^-98 - t^-99 + t^-100")
    rep = check_lspace_alexander(one, wide, 1)
    assert not rep.passed
    assert [r.kind for r in rep.failures()] == ["above-bound", "below-bound", "total-terms"]


def test_lspace_alexander_single_far_term_is_allowed():
    one = LaurentPoly.constant(1)
    rep = check_lspace_alexander(one, parse_poly("t^100 + 1 + t^-100"), 1)
    assert rep.filter("above-bound")[0].ok


@pytest.mark.parametrize("p,q", [(1, 3), (2, 3), (2, 5), (3, 5), (4, 7), (5, 3)])
def test_max_grading(p, q):
    rep = max_grading_check(p, q)
    assert rep.passed
    assert rep.filter("top-grading")[0].lhs == (2 * p - 1) * (q - 1) // 2


def test_max_grading_rejects():
    with pytest.raises(InvalidTorusParams):
        max_grading_check(2, 4)


def test_report_json_and_render():
    rep = check_alternating_alexander(FIG8, 0, K10_122, 0, 1)
    js = rep.to_json()
    assert js["passed"] and "first_failure" not in js
    assert "rank a=1: 11+2 >= 1 ok" in rep.render()
    bad = check_total_rank(PeriodicPair(HfkTable({}), UNKNOT, 1))
    assert bad.to_json()["first_failure"] == {"a": 0}
    assert "FAIL" in bad.render(verbose=False)


def test_alternating_pair_tables():
    pair = PeriodicPair(alternating_hfk(K10_122, 0), alternating_hfk(FIG8, 0), 1)
    assert check_total_rank(pair).passed
    assert check_filtered_rank(pair).passed
