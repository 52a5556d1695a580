"""Integer Laurent polynomials in one variable ``t``.

Polynomials are immutable and hashable.  Coefficients are Python ints, so
arithmetic never overflows.  The zero polynomial has no terms and width -1.
"""

from __future__ import annotations

import re
from math import gcd
from typing import Iterable, Mapping

from .errors import InvalidTorusParams, NotDivisible, ParseError

__all__ = [
    "LaurentPoly",
    "add",
    "mul",
    "divide_exact",
    "torus_alexander",
    "parse_poly",
    "render_poly",
]


class LaurentPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[int, int] = {}
        for e, c in items:
            e, c = int(e), int(c)
            c += clean.get(e, 0)
            if c:
                clean[e] = c
            else:
                clean.pop(e, None)
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # -- construction helpers -------------------------------------------------
    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> LaurentPoly:
        return cls({exponent: coefficient})

    @classmethod
    def constant(cls, c: int) -> LaurentPoly:
        return cls({0: c})

    @classmethod
    def from_dense(cls, coeffs: list[int], offset: int = 0) -> LaurentPoly:
        """Build from a dense list where ``coeffs[k]`` is the coefficient of t^(k+offset)."""
        return cls((k + offset, c) for k, c in enumerate(coeffs) if c)

    # -- accessors ------------------------------------------------------------
    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, e: int) -> int:
        return self._terms.get(e, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def exponents(self) -> list[int]:
        return list(self._terms)

    def min_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return next(iter(self._terms))

    def max_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return next(reversed(self._terms))

    def width(self) -> int:
        """max exponent - min exponent; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return self.max_exp() - self.min_exp()

    def term_count(self) -> int:
        return len(self._terms)

    def symmetric(self) -> bool:
        return all(self._terms.get(-e) == c for e, c in self._terms.items())

    def evaluate(self, t):
        return sum(c * t**e for e, c in self._terms.items())

    def shift(self, k: int) -> LaurentPoly:
        return LaurentPoly((e + k, c) for e, c in self._terms.items())

    def dense(self) -> tuple[list[int], int]:
        """Return ``(coeffs, offset)`` with ``coeffs[k]`` the coefficient of t^(k+offset)."""
        if not self._terms:
            return [], 0
        lo, hi = self.min_exp(), self.max_exp()
        out = [0] * (hi - lo + 1)
        for e, c in self._terms.items():
            out[e - lo] = c
        return out, lo

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly((e, -c) for e, c in self._terms.items())

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({render_poly(self)!r})"

    def __str__(self):
        return render_poly(self)

    # -- serialization --------------------------------------------------------
    def to_json(self) -> list[list[int]]:
        return [[e, c] for e, c in self._terms.items()]

    @classmethod
    def from_json(cls, data) -> LaurentPoly:
        if isinstance(data, str):
            return parse_poly(data)
        pairs = []
        last = None
        for item in data:
            if not (isinstance(item, (list, tuple)) and len(item) == 2):
                raise ParseError(f"expected [exponent, coefficient] pair, got {item!r}")
            e, c = item
            if not isinstance(e, int) or not isinstance(c, int):
                raise ParseError(f"non-integer term {item!r}")
            if last is not None and e <= last:
                raise ParseError("exponents must be strictly increasing")
            last = e
            pairs.append((e, c))
        return cls(pairs)


def add(P: LaurentPoly, Q: LaurentPoly) -> LaurentPoly:
    out = dict(P._terms)
    for e, c in Q._terms.items():
        out[e] = out.get(e, 0) + c
    return LaurentPoly(out)


def mul(P: LaurentPoly, Q: LaurentPoly) -> LaurentPoly:
    out: dict[int, int] = {}
    for e1, c1 in P._terms.items():
        for e2, c2 in Q._terms.items():
            e = e1 + e2
            out[e] = out.get(e, 0) + c1 * c2
    return LaurentPoly(out)


def divide_exact(P: LaurentPoly, Q: LaurentPoly) -> LaurentPoly:
    """Return R with Q*R == P, raising NotDivisible if no such Laurent polynomial exists."""
    if Q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if P.is_zero():
        return LaurentPoly()
    rem, p_lo = P.dense()
    q_dense, q_lo = Q.dense()
    q_terms = [(k, c) for k, c in enumerate(q_dense) if c]
    q_top = len(q_dense) - 1
    lead = q_dense[q_top]
    n_quot = len(rem) - q_top
    if n_quot <= 0:
        raise NotDivisible(f"{render_poly(Q)} does not divide {render_poly(P)}")
    quot = [0] * n_quot
    # top-down long division; only the divisor's nonzero terms are touched
    for k in range(n_quot - 1, -1, -1):
        c = rem[k + q_top]
        if not c:
            continue
        if c % lead:
            raise NotDivisible(f"{render_poly(Q)} does not divide {render_poly(P)}")
        f = c // lead
        quot[k] = f
        for j, qc in q_terms:
            rem[k + j] -= f * qc
    if any(rem):
        raise NotDivisible(f"{render_poly(Q)} does not divide {render_poly(P)}")
    return LaurentPoly.from_dense(quot, p_lo - q_lo)


def torus_alexander(p: int, q: int) -> LaurentPoly:
    """Symmetrized Alexander polynomial of the torus knot T(p, q).

    Computed as (t^pq - 1)(t - 1) / ((t^p - 1)(t^q - 1)) and shifted down by
    (p-1)(q-1)/2 so that the result is symmetric under t -> 1/t.
    """
    if p < 2 or q < 2 or gcd(p, q) != 1:
        raise InvalidTorusParams(f"T({p},{q}) needs p, q >= 2 and gcd(p, q) = 1")
    one = LaurentPoly.constant(1)
    t = LaurentPoly.monomial(1)
    num = (LaurentPoly.monomial(p * q) - one) * (t - one)
    den = (LaurentPoly.monomial(p) - one) * (LaurentPoly.monomial(q) - one)
    return divide_exact(num, den).shift(-((p - 1) * (q - 1) // 2))


# -- text form ---------------------------------------------------------------

_TERM = re.compile(r"(\d+)?\s*(?:\*\s*)?(t(?:\s*\^\s*(-?\d+))?)?")


def parse_poly(text: str) -> LaurentPoly:
    """Parse text such as ``"-t + 3 - t^-1"`` or ``"2t^3 - 1"``."""
    pos = 0
    n = len(text)
    terms: dict[int, int] = {}
    first = True

    def skip_ws(i):
        while i < n and text[i].isspace():
            i += 1
        return i

    pos = skip_ws(pos)
    if pos == n:
        raise ParseError("empty polynomial", 0)
    while pos < n:
        sign = 1
        if text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos = skip_ws(pos + 1)
        elif not first:
            raise ParseError(f"expected '+' or '-', found {text[pos]!r}", pos)
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError("expected a term", pos)
        coef_s, t_part, exp_s = m.group(1), m.group(2), m.group(3)
        if coef_s is None and t_part is None:
            raise ParseError("expected a term", pos)
        coef = int(coef_s) if coef_s is not None else 1
        # a bare "0" is the zero polynomial; otherwise coefficients are >= 1
        if coef == 0 and not (first and t_part is None and skip_ws(m.end()) == n):
            raise ParseError("coefficients must be positive integers", pos)
        exp = 0
        if t_part is not None:
            exp = int(exp_s) if exp_s is not None else 1
        terms[exp] = terms.get(exp, 0) + sign * coef
        pos = skip_ws(m.end())
        first = False
    return LaurentPoly(terms)


def render_poly(P: LaurentPoly) -> str:
    """Canonical text form, exponents descending: ``t^3 - t^2 + 1 - t^-2 + t^-3``."""
    if P.is_zero():
        return "0"
    parts = []
    for e, c in sorted(P.items(), reverse=True):
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            var = "t" if e == 1 else f"t^{e}"
            body = var if mag == 1 else f"{mag}{var}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)
