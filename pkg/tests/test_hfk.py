import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hfklab.datafiles import data_path
from hfklab.errors import (
    AsymmetricPolynomial,
    DuplicateEntry,
    NonpositiveRank,
    NotLSpacePolynomial,
    OddSignature,
    ParseError,
)
from hfklab.hfk import (
    HfkTable,
    alexander_column,
    alternating_hfk,
    alternating_signs_ok,
    delta_sequence,
    euler,
    lspace_hfk,
    rank_at,
    read_table,
    total_rank,
    write_table,
)
from hfklab.laurent import LaurentPoly, parse_poly, torus_alexander

TREFOIL = parse_poly("t - 1 + t^-1")
FIG8 = parse_poly("-t + 3 - t^-1")


@st.composite
def lspace_polys(draw):
    """Symmetric, alternating +-1 coefficients, top +1, odd term count."""
    gaps = draw(st.lists(st.integers(1, 4), max_size=5))
    pos = []
    e = 0
    for g in gaps:
        e += g
        pos.append(e)
    exps = [-x for x in reversed(pos)] + [0] + pos
    k = len(pos)
    return LaurentPoly({n: (-1) ** (k - i) for i, n in zip(range(-k, k + 1), exps)})


@st.composite
def alternating_inputs(draw):
    """Symmetric polynomials whose signs follow the diagonal, as for alternating knots."""
    sigma = 2 * draw(st.integers(-4, 4))
    half = draw(st.dictionaries(st.integers(1, 5), st.integers(1, 30), max_size=4))
    mags = {0: draw(st.integers(1, 40)), **half, **{-s: c for s, c in half.items()}}
    terms = {s: c * (-1) ** ((s + sigma // 2) % 2) for s, c in mags.items()}
    return LaurentPoly(terms), sigma


def test_delta_sequence_examples():
    assert delta_sequence(TREFOIL).steps == ((-1, -2), (0, -1), (1, 0))
    assert delta_sequence(torus_alexander(3, 4)).steps == ((-3, -6), (-2, -5), (0, -2), (2, -1), (3, 0))
    assert delta_sequence(LaurentPoly.constant(1)).steps == ((0, 0),)


@pytest.mark.parametrize("bad", ["t + 1 + t^-1", "-t + 1 - t^-1", "t^2 - 1 + t^-1", "t - t^-1", "2t - 3 + 2t^-1"])
def test_delta_sequence_rejects(bad):
    with pytest.raises(NotLSpacePolynomial):
        delta_sequence(parse_poly(bad))


def test_lspace_examples():
    assert lspace_hfk(LaurentPoly.constant(1)).ranks == {(0, 0): 1}
    assert lspace_hfk(TREFOIL).ranks == {(0, 1): 1, (-1, 0): 1, (-2, -1): 1}
    assert lspace_hfk(torus_alexander(3, 4)).ranks == {
        (0, 3): 1, (-1, 2): 1, (-2, 0): 1, (-5, -2): 1, (-6, -3): 1,
    }


def test_alternating_examples():
    assert alternating_hfk(FIG8, 0).ranks == {(1, 1): 1, (0, 0): 3, (-1, -1): 1}
    assert alternating_hfk(LaurentPoly.constant(1), 0).ranks == {(0, 0): 1}
    assert alternating_hfk(TREFOIL, -2) == lspace_hfk(TREFOIL)


def test_alternating_rejects():
    with pytest.raises(OddSignature):
        alternating_hfk(FIG8, 1)
    with pytest.raises(AsymmetricPolynomial):
        alternating_hfk(parse_poly("t^2 - t + 1"), 0)


def test_accessors():
    t = alternating_hfk(FIG8, 0)
    assert total_rank(t) == 5
    assert rank_at(lspace_hfk(TREFOIL), -1, 0) == 1
    assert rank_at(t, 99, 99) == 0
    assert alexander_column(t, 0) == {0: 3}
    assert alexander_column(t, 7) == {}


def test_euler_examples():
    assert euler(lspace_hfk(TREFOIL)) == TREFOIL
    assert euler(alternating_hfk(FIG8, 0)) == FIG8
    assert euler(HfkTable({})).is_zero()


def test_filtered_rank_sums():
    t = lspace_hfk(torus_alexander(3, 4))
    for a in range(-4, 5):
        col = t.alexander_column(a)
        for q in range(-8, 3):
            assert t.rank_at_least(a, q) == sum(r for m, r in col.items() if m >= q)
            assert t.rank_at_most(a, q) == sum(r for m, r in col.items() if m <= q)


@given(lspace_polys())
def test_lspace_categorifies(d):
    t = lspace_hfk(d)
    assert euler(t) == d
    assert all(r == 1 for _, r in t.items())
    assert len(t.alexander_gradings()) == len(t)
    top = max(t.alexander_gradings())
    assert t.alexander_column(top) == {0: 1}
    seq = delta_sequence(d)
    assert min(seq.deltas()) == seq.exponents()[0] - seq.exponents()[-1]


@given(alternating_inputs())
def test_alternating_categorifies(inp):
    d, sigma = inp
    t = alternating_hfk(d, sigma)
    assert alternating_signs_ok(d, sigma)
    assert euler(t) == d
    assert all(m - a == sigma // 2 for (m, a), _ in t.items())


def test_alternating_sign_pattern():
    assert alternating_signs_ok(FIG8, 0)
    assert alternating_signs_ok(TREFOIL, -2)
    assert not alternating_signs_ok(TREFOIL, 0)
    assert euler(alternating_hfk(TREFOIL, 0)) != TREFOIL


@pytest.mark.parametrize("p,q", [(2, 3), (3, 5), (4, 7), (5, 6), (7, 9)])
def test_torus_extremes(p, q):
    t = lspace_hfk(torus_alexander(p, q))
    assert max(t.alexander_gradings()) == (p - 1) * (q - 1) // 2
    assert min(t.maslov_gradings()) == -(p - 1) * (q - 1)


def test_json_and_csv_round_trip(tmp_path):
    t = alternating_hfk(FIG8, 0, label="4_1")
    assert HfkTable.from_json(t.to_json()) == t
    assert HfkTable.from_csv(t.to_csv()) == t
    for name in ("x.json", "x.csv"):
        write_table(t, tmp_path / name)
        assert read_table(tmp_path / name) == t


def test_json_generators_sorted():
    t = HfkTable({(1, 1): 1, (0, 0): 3, (-1, -1): 1, (5, 0): 2})
    keys = [(g["alexander"], g["maslov"]) for g in t.to_json()["generators"]]
    assert keys == sorted(keys)


def test_bundled_tables_match_builders():
    assert read_table(data_path("trefoil.json")) == lspace_hfk(TREFOIL)
    assert read_table(data_path("trefoil.csv")) == lspace_hfk(TREFOIL)
    assert read_table(data_path("4_1.json")) == alternating_hfk(FIG8, 0)
    d = parse_poly("-2t^3 + 11t^2 - 24t + 31 - 24t^-1 + 11t^-2 - 2t^-3")
    assert read_table(data_path("10_122.json")) == alternating_hfk(d, 0)


def test_ingest_validation(tmp_path):
    dup = {"generators": [{"maslov": 0, "alexander": 0, "rank": 1}] * 2}
    with pytest.raises(DuplicateEntry):
        HfkTable.from_json(dup)
    with pytest.raises(NonpositiveRank):
        HfkTable.from_json({"generators": [{"maslov": 0, "alexander": 0, "rank": 0}]})
    with pytest.raises(ParseError):
        HfkTable.from_csv("maslov,alexander\n0,0\n")
    with pytest.raises(ParseError):
        HfkTable.from_json({"generators": [{"maslov": "x", "alexander": 0, "rank": 1}]})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        read_table(bad)


def test_empty_table_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        t = HfkTable.from_json({"generators": []})
    assert len(t) == 0
    assert caught
