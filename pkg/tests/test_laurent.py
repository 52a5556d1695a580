from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfklab.errors import InvalidTorusParams, NotDivisible, ParseError
from hfklab.laurent import (
    LaurentPoly,
    add,
    divide_exact,
    mul,
    parse_poly,
    render_poly,
    torus_alexander,
)

T = LaurentPoly.monomial
ONE = LaurentPoly.constant(1)


def semigroup_alexander(p, q):
    """Independent oracle: 1 + (t - 1) * sum of t^g over gaps g of <p, q>, recentred."""
    genus2 = (p - 1) * (q - 1)
    reachable = {a * p + b * q for a in range(q) for b in range(p)}
    gaps = [g for g in range(genus2) if g not in reachable]
    coeffs = {0: 1}
    for g in gaps:
        coeffs[g + 1] = coeffs.get(g + 1, 0) + 1
        coeffs[g] = coeffs.get(g, 0) - 1
    return LaurentPoly({e - genus2 // 2: c for e, c in coeffs.items() if c})


polys = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5).filter(bool), max_size=6).map(LaurentPoly)


def test_add_cancels():
    assert add(T(1), -T(1)).is_zero()
    assert add(T(1) - 1, ONE) == T(1)


def test_add_figure_eight_twice():
    d = parse_poly("-t + 3 - t^-1")
    assert add(d, d) == parse_poly("-2t + 6 - 2t^-1")


def test_mul_examples():
    p = parse_poly("t - 1 + t^-1")
    assert mul(p, ONE) == p
    assert mul(T(1) - 1, T(1) + 1) == T(2) - 1
    assert mul(p, T(1) + 1) == T(2) + T(-1)


def test_divide_exact_examples():
    assert divide_exact(T(2) - 1, T(1) - 1) == T(1) + 1
    num = mul(T(12) - 1, T(1) - 1)
    den = mul(T(3) - 1, T(4) - 1)
    assert divide_exact(num, den).shift(-3) == parse_poly("t^3 - t^2 + 1 - t^-2 + t^-3")


def test_divide_exact_rejects_remainder():
    with pytest.raises(NotDivisible):
        divide_exact(T(2) + 1, T(1) - 1)
    with pytest.raises(ZeroDivisionError):
        divide_exact(T(2), LaurentPoly())


def test_torus_examples():
    assert torus_alexander(2, 3) == parse_poly("t - 1 + t^-1")
    assert torus_alexander(3, 4) == parse_poly("t^3 - t^2 + 1 - t^-2 + t^-3")
    assert torus_alexander(5, 7).width() == 24


@pytest.mark.parametrize("p,q", [(1, 3), (2, 4), (6, 9), (0, 5)])
def test_torus_rejects_bad_params(p, q):
    with pytest.raises(InvalidTorusParams):
        torus_alexander(p, q)


@pytest.mark.parametrize("p", range(2, 14))
def test_torus_matches_semigroup_oracle(p):
    for q in range(2, 14):
        if gcd(p, q) == 1:
            assert torus_alexander(p, q) == semigroup_alexander(p, q)


@pytest.mark.parametrize("p,q", [(p, q) for p in range(2, 20) for q in range(p + 1, 20) if gcd(p, q) == 1])
def test_torus_shape(p, q):
    d = torus_alexander(p, q)
    assert d.symmetric()
    assert d.width() == (p - 1) * (q - 1)
    assert d.coefficient(d.max_exp()) == 1
    coeffs = [c for _, c in sorted(d.items())]
    assert set(coeffs) <= {1, -1}
    assert all(a == -b for a, b in zip(coeffs, coeffs[1:]))
    assert abs(d.evaluate(1)) == 1


def test_width_sentinel():
    assert LaurentPoly().width() == -1
    assert ONE.width() == 0


def test_parse_examples():
    assert parse_poly("-t + 3 - t^-1").terms == {1: -1, 0: 3, -1: -1}
    assert parse_poly("0").is_zero()
    s = "t^3 - t^2 + 1 - t^-2 + t^-3"
    assert render_poly(parse_poly(s)) == s
    assert render_poly(parse_poly("  t^3-t^2 +1-t^-2+ t^-3 ")) == s


@pytest.mark.parametrize("bad", ["", "t^", "2x", "t^-", "3 +", "0t", "1 ++ t", "t^1.5"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_poly(bad)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_poly("t + 3 + x")
    assert info.value.position == 8


def test_json_round_trip():
    d = torus_alexander(3, 5)
    assert LaurentPoly.from_json(d.to_json()) == d
    with pytest.raises(ParseError):
        LaurentPoly.from_json([[1, 1], [0, 1]])


@given(polys, polys)
def test_mul_commutes(p, q):
    assert mul(p, q) == mul(q, p)


@given(polys, polys, polys)
@settings(max_examples=50)
def test_mul_associates_and_distributes(p, q, r):
    assert mul(mul(p, q), r) == mul(p, mul(q, r))
    assert mul(p, add(q, r)) == add(mul(p, q), mul(p, r))


@given(polys, polys.filter(lambda q: not q.is_zero()))
def test_divide_inverts_mul(p, q):
    assert divide_exact(mul(p, q), q) == p


@given(polys)
def test_render_round_trip(p):
    assert parse_poly(render_poly(p)) == p


@given(polys)
def test_no_zero_coefficients_stored(p):
    assert all(c != 0 for _, c in p.items())
