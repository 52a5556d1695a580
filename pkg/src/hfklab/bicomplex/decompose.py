"""Splitting a finite bicomplex into squares and staircases.

The construction runs in two stages.

1. Squares.  At each bigrading the composite ``D = d_v d_h`` has some rank
   ``r``; ``r`` generators with independent ``D``-images span free summands
   (squares).  A complementary sub-bicomplex ``N`` is cut out by linear
   conditions dual to the squares' bottom-left corners.

2. Staircases.  On ``N`` the composite vanishes, so the span ``R`` of all
   images is killed by both differentials.  Choosing a complement ``T`` of
   ``R`` in every bigrading, each differential maps ``T`` into ``R``.  Along a
   fixed total degree these maps form a zigzag

       R(c-1, q) <-h- T(c, q) -v-> R(c, q-1) <-h- T(c+1, q-1) -v-> ...

   and a left-to-right sweep puts the zigzag into normal form.  Each
   interval of the resulting barcode is one staircase.

During the sweep a basis vector may only absorb vectors of intervals that
admit a morphism into it; with intervals keyed by birth (``-b`` when born
through a forward arrow, ``+b`` through a backward arrow, ``0`` at the first
vertex) this is exactly "absorb vectors of equal or larger key".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..errors import InternalError, InvalidComplex
from ..f2lin import F2Matrix, SpanBuilder, inverse, kernel_basis, mul
from ..errors import Singular
from .complexes import Bicomplex, Pos, Verdict, validate

__all__ = [
    "Square",
    "Staircase",
    "Decomposition",
    "decompose",
    "verify_decomposition",
    "conjugated_differentials",
    "staircase_homology",
]

Cell = tuple[int, int, int]  # (p, q, local index)


@dataclass(frozen=True)
class Square:
    """Square summand with top-right generator ``b`` at ``corner``.

    ``indices`` are the local indices of (b, a, d, c) at corner, corner-(1,0),
    corner-(0,1) and corner-(1,1) respectively.
    """

    corner: Pos
    indices: tuple[int, int, int, int]

    def cells(self) -> list[Cell]:
        p, q = self.corner
        b, a, d, c = self.indices
        return [(p, q, b), (p - 1, q, a), (p, q - 1, d), (p - 1, q - 1, c)]


@dataclass(frozen=True)
class Staircase:
    """Generators listed from top-left to bottom-right.

    Consecutive cells are joined by a unit arrow: the next cell one column to
    the right means a horizontal arrow from it back to this one; one row
    down means a vertical arrow from this cell to it.
    """

    cells: tuple[Cell, ...]

    @property
    def length(self) -> int:
        return len(self.cells) - 1

    def arrows(self) -> list[str]:
        out = []
        for (p0, q0, _), (p1, q1, _) in zip(self.cells, self.cells[1:]):
            if (p1, q1) == (p0 + 1, q0):
                out.append("h")
            elif (p1, q1) == (p0, q0 - 1):
                out.append("v")
            else:
                out.append("?")
        return out

    @property
    def open_top(self) -> bool:
        """True when the top-left generator has no horizontal partner (a_0 = 0)."""
        return self.length == 0 or self.arrows()[0] == "v"

    @property
    def open_bottom(self) -> bool:
        """True when the bottom-right generator has no horizontal source (b_n = 0)."""
        return self.length == 0 or self.arrows()[-1] == "v"

    @property
    def top_row(self) -> int:
        return self.cells[0][1]

    @property
    def bottom_row(self) -> int:
        return self.cells[-1][1]

    def columns(self) -> range:
        return range(self.cells[0][0], self.cells[-1][0] + 1)

    def total_degree(self) -> int:
        """Total degree of the top-left generator."""
        p, q, _ = self.cells[0]
        return p + q


@dataclass(frozen=True)
class Decomposition:
    basis_change: Mapping[Pos, F2Matrix]
    squares: tuple[Square, ...] = ()
    staircases: tuple[Staircase, ...] = ()

    def generator_counts(self) -> dict[Pos, int]:
        counts: dict[Pos, int] = {}
        for sq in self.squares:
            for p, q, _ in sq.cells():
                counts[(p, q)] = counts.get((p, q), 0) + 1
        for st in self.staircases:
            for p, q, _ in st.cells:
                counts[(p, q)] = counts.get((p, q), 0) + 1
        return counts


# -- helpers -------------------------------------------------------------------

def _from_coords(basis: list[int], coords: int) -> int:
    v = 0
    k = 0
    while coords:
        if coords & 1:
            v ^= basis[k]
        coords >>= 1
        k += 1
    return v


class _Interval:
    __slots__ = ("start", "key", "vecs", "end")

    def __init__(self, start: int, key: int, vec: int):
        self.start = start
        self.key = key
        self.vecs = {start: vec}
        self.end = None


def _zigzag_intervals(dims: list[int], arrows: list[tuple[str, list[int]]]) -> list[_Interval]:
    """Normal form of a zigzag of F2 vector spaces.

    ``dims[k]`` is the dimension of vertex k.  ``arrows[k]`` joins vertices k
    and k+1: ``("f", cols)`` for a map V_k -> V_{k+1}, ``("b", cols)`` for
    V_{k+1} -> V_k, with ``cols`` the images of the source basis vectors.
    Returns intervals whose vectors form a basis at every vertex and on which
    every arrow acts as a partial bijection.
    """
    done: list[_Interval] = []
    alive = [_Interval(0, 0, 1 << j) for j in range(dims[0])]

    def apply(cols, v):
        return _from_coords(cols, v)

    def absorb(target: _Interval, source: _Interval, upto: int):
        for k in range(max(target.start, source.start), upto + 1):
            target.vecs[k] ^= source.vecs[k]

    for k, (kind, cols) in enumerate(arrows):
        nxt = k + 1
        if kind == "f":
            table: dict[int, tuple[int, list[_Interval]]] = {}
            survivors = []
            for iv in sorted(alive, key=lambda i: -i.key):
                img = apply(cols, iv.vecs[k])
                combo: set[int] = set()
                used: dict[int, _Interval] = {}
                while img:
                    top = img.bit_length() - 1
                    entry = table.get(top)
                    if entry is None:
                        break
                    img ^= entry[0]
                    for other in entry[1]:
                        if id(other) in combo:
                            combo.discard(id(other))
                            used.pop(id(other))
                        else:
                            combo.add(id(other))
                            used[id(other)] = other
                if img == 0:
                    for other in used.values():
                        absorb(iv, other, k)
                    if apply(cols, iv.vecs[k]):
                        raise InternalError("forward reduction left a nonzero image")
                    iv.end = k
                    done.append(iv)
                else:
                    table[img.bit_length() - 1] = (img, list(used.values()) + [iv])
                    survivors.append(iv)
            span = SpanBuilder()
            for iv in survivors:
                iv.vecs[nxt] = apply(cols, iv.vecs[k])
                if not span.add(iv.vecs[nxt]):
                    raise InternalError("surviving images are dependent")
            alive = survivors + [_Interval(nxt, -nxt, e) for e in span.extend_to(dims[nxt])]
        else:
            # order alive intervals by key; bit position = rank in that order
            order = sorted(alive, key=lambda i: i.key)
            coord_span = SpanBuilder()
            for iv in order:
                if not coord_span.add(iv.vecs[k]):
                    raise InternalError("interval vectors are not a basis")
            image_span = SpanBuilder()
            for c in cols:
                image_span.add(c)
            # echelon form with pivot = lowest set bit (smallest key), fully reduced
            rows: dict[int, int] = {}
            for w in image_span.basis:
                u = coord_span.coordinates(w)
                for piv in sorted(rows):
                    if (u >> piv) & 1:
                        u ^= rows[piv]
                if u:
                    low = (u & -u).bit_length() - 1
                    for key_bit in list(rows):
                        if (rows[key_bit] >> low) & 1:
                            rows[key_bit] ^= u
                    rows[low] = u
            pivots = set(rows)
            for low, u in rows.items():
                target = order[low]
                rest = u & ~(1 << low)
                j = 0
                while rest:
                    if rest & 1:
                        if j in pivots:
                            raise InternalError("echelon form not fully reduced")
                        absorb(target, order[j], k)
                    rest >>= 1
                    j += 1
            pre_span = SpanBuilder()
            for c in cols:
                pre_span.add(c)
            # pre_span.basis is a subset of cols; recover which source vectors they are
            col_index = {}
            for j, c in enumerate(cols):
                if c and c not in col_index:
                    col_index[c] = j
            survivors = []
            for low in sorted(rows):
                iv = order[low]
                coords = pre_span.coordinates(iv.vecs[k])
                pre = 0
                for bit, bvec in enumerate(pre_span.basis):
                    if (coords >> bit) & 1:
                        pre ^= 1 << col_index[bvec]
                if apply(cols, pre) != iv.vecs[k]:
                    raise InternalError("bad preimage in backward step")
                iv.vecs[nxt] = pre
                survivors.append(iv)
            for low, iv in enumerate(order):
                if low not in pivots:
                    iv.end = k
                    done.append(iv)
            kernel = kernel_basis(F2Matrix.from_columns(max(dims[k], 0), cols) if cols else F2Matrix.zeros(dims[k], dims[nxt]))
            alive = survivors + [_Interval(nxt, nxt, v) for v in kernel.columns()]
        if len(alive) != dims[nxt]:
            raise InternalError(f"vertex {nxt}: {len(alive)} intervals for dimension {dims[nxt]}")
    last = len(dims) - 1
    for iv in alive:
        iv.end = last
        done.append(iv)
    return done


def decompose(B: Bicomplex) -> Decomposition:
    """Square/staircase decomposition with an explicit change of basis."""
    verdict = validate(B)
    if not verdict:
        raise InvalidComplex(verdict.message)
    support = B.support()
    if not support:
        return Decomposition({}, (), ())

    def h(pos, vec):
        return B.h(pos).apply(vec)

    def v(pos, vec):
        return B.v(pos).apply(vec)

    def D(pos, vec):
        p, q = pos
        return B.v((p - 1, q)).apply(B.h(pos).apply(vec))

    # vectors assigned to each position, in final local order
    new_basis: dict[Pos, list[int]] = {pos: [] for pos in support}

    def place(pos, vec):
        new_basis[pos].append(vec)
        return len(new_basis[pos]) - 1

    # -- stage 1: squares ----------------------------------------------------
    square_gens: list[tuple[Pos, int]] = []
    socle: dict[Pos, list[int]] = {}
    for pos in support:
        p, q = pos
        if not B.dim((p - 1, q - 1)):
            continue
        span = SpanBuilder()
        for j in range(B.dim(pos)):
            if span.add(D(pos, 1 << j)):
                square_gens.append((pos, 1 << j))
        if len(span):
            socle[(p - 1, q - 1)] = list(span.basis)

    squares = []
    for pos, x in square_gens:
        p, q = pos
        b = place(pos, x)
        a = place((p - 1, q), h(pos, x))
        d = place((p, q - 1), v(pos, x))
        c = place((p - 1, q - 1), D(pos, x))
        squares.append(Square(pos, (b, a, d, c)))

    # functionals dual to the socle vectors at each socle position
    dual: dict[Pos, tuple[SpanBuilder, int]] = {}
    for s, zs in socle.items():
        sb = SpanBuilder()
        for z in zs:
            sb.add(z)
        sb.extend_to(B.dim(s))
        dual[s] = (sb, len(zs))

    def conditions(pos, vec):
        p, q = pos
        bits = []
        for delta, fn in (((0, 0), lambda w: w), ((1, 0), lambda w: h(pos, w)),
                          ((0, 1), lambda w: v(pos, w)), ((1, 1), lambda w: D(pos, w))):
            s = (p - delta[0], q - delta[1])
            if s in dual:
                sb, nz = dual[s]
                coords = sb.coordinates(fn(vec))
                bits.append(coords & ((1 << nz) - 1))
                bits.append(nz)
        out, shift = 0, 0
        for val, width in zip(bits[::2], bits[1::2]):
            out |= val << shift
            shift += width
        return out, shift

    complement: dict[Pos, list[int]] = {}
    for pos in support:
        n = B.dim(pos)
        cols, nconds = [], 0
        for j in range(n):
            c, nconds = conditions(pos, 1 << j)
            cols.append(c)
        phi = F2Matrix.from_columns(nconds, cols) if nconds else F2Matrix.zeros(0, n)
        ker = kernel_basis(phi).columns()
        if len(ker) + len(new_basis[pos]) != n:
            raise InternalError(f"square complement has the wrong dimension at {pos}")
        complement[pos] = ker

    # -- stage 2: staircases on the square-free complement ----------------------
    image_part: dict[Pos, list[int]] = {}
    top_part: dict[Pos, list[int]] = {}
    for pos in support:
        p, q = pos
        span = SpanBuilder()
        for w in complement.get((p + 1, q), []):
            span.add(h((p + 1, q), w))
        for w in complement.get((p, q + 1), []):
            span.add(v((p, q + 1), w))
        image_part[pos] = list(span.basis)
        top = []
        for w in complement[pos]:
            if span.add(w):
                top.append(w)
        if len(span) != len(complement[pos]):
            raise InternalError(f"images leave the complement at {pos}")
        top_part[pos] = top

    degrees = sorted({p + q for p, q in support})
    cols_all = [p for p, _ in support]
    c_lo, c_hi = min(cols_all), max(cols_all)
    staircases = []
    for s in degrees:
        # vertices: R(c_lo-1), T(c_lo), R(c_lo), ..., T(c_hi), R(c_hi)
        vertices: list[tuple[str, Pos]] = [("R", (c_lo - 1, s - c_lo))]
        for c in range(c_lo, c_hi + 1):
            vertices.append(("T", (c, s - c)))
            vertices.append(("R", (c, s - 1 - c)))
        bases = [
            (top_part if kind == "T" else image_part).get(pos, []) for kind, pos in vertices
        ]
        if not any(bases):
            continue
        solvers = []
        for basis in bases:
            sb = SpanBuilder()
            for w in basis:
                sb.add(w)
            solvers.append(sb)
        arrows = []
        for k in range(len(vertices) - 1):
            (kind0, pos0), (kind1, pos1) = vertices[k], vertices[k + 1]
            if kind0 == "R":
                # T(pos1) -h-> R(pos0): backward arrow
                cols = [solvers[k].coordinates(h(pos1, w)) for w in bases[k + 1]]
                arrows.append(("b", cols))
            else:
                # T(pos0) -v-> R(pos1): forward arrow
                cols = [solvers[k + 1].coordinates(v(pos0, w)) for w in bases[k]]
                arrows.append(("f", cols))
        intervals = _zigzag_intervals([len(b) for b in bases], arrows)
        for iv in sorted(intervals, key=lambda i: (i.start, i.end)):
            cells = []
            for k in range(iv.start, iv.end + 1):
                pos = vertices[k][1]
                vec = _from_coords(bases[k], iv.vecs[k])
                cells.append((pos[0], pos[1], place(pos, vec)))
            staircases.append(Staircase(tuple(cells)))

    basis_change = {}
    for pos in support:
        vecs = new_basis[pos]
        if len(vecs) != B.dim(pos):
            raise InternalError(f"{len(vecs)} generators placed at {pos}, dimension {B.dim(pos)}")
        basis_change[pos] = F2Matrix.from_columns(B.dim(pos), vecs)
    return Decomposition(basis_change, tuple(squares), tuple(staircases))


def conjugated_differentials(B: Bicomplex, D: Decomposition) -> tuple[dict, dict]:
    """d_h and d_v written in the decomposition's basis."""
    inv = {pos: inverse(U) for pos, U in D.basis_change.items()}
    hh, vv = {}, {}
    for pos in B.support():
        p, q = pos
        U = D.basis_change[pos]
        if B.dim((p - 1, q)):
            hh[pos] = mul(mul(inv[(p - 1, q)], B.h(pos)), U)
        if B.dim((p, q - 1)):
            vv[pos] = mul(mul(inv[(p, q - 1)], B.v(pos)), U)
    return hh, vv


def verify_decomposition(B: Bicomplex, D: Decomposition) -> Verdict:
    """Certificate check for a decomposition; falsy with the first violation."""
    support = B.support()
    if set(D.basis_change) != set(support):
        return Verdict(False, "basis_change positions do not match the support")
    for pos in support:
        U = D.basis_change[pos]
        if U.shape != (B.dim(pos), B.dim(pos)):
            return Verdict(False, f"basis change at {pos} has shape {U.shape}")
        try:
            inverse(U)
        except Singular:
            return Verdict(False, f"basis change at {pos} is singular")
    hh, vv = conjugated_differentials(B, D)
    for name, maps in (("d_h", hh), ("d_v", vv)):
        for pos, M in maps.items():
            if not M.is_partial_permutation():
                return Verdict(False, f"conjugated {name} at {pos} is not a partial permutation")

    owner: dict[Cell, str] = {}
    expected: set[tuple[str, Cell, Cell]] = set()

    def claim(cell, who):
        p, q, idx = cell
        if not 0 <= idx < B.dim((p, q)):
            return f"{who} uses nonexistent generator {cell}"
        if cell in owner:
            return f"generator {cell} claimed by both {owner[cell]} and {who}"
        owner[cell] = who
        return None

    for n, sq in enumerate(D.squares):
        b, a, d, c = sq.cells()
        for cell in (b, a, d, c):
            err = claim(cell, f"square {n}")
            if err:
                return Verdict(False, err)
        expected |= {("h", b, a), ("h", d, c), ("v", b, d), ("v", a, c)}
    for n, st in enumerate(D.staircases):
        for cell in st.cells:
            err = claim(cell, f"staircase {n}")
            if err:
                return Verdict(False, err)
        for kind, x, y in zip(st.arrows(), st.cells, st.cells[1:]):
            if kind == "h":
                expected.add(("h", y, x))
            elif kind == "v":
                expected.add(("v", x, y))
            else:
                return Verdict(False, f"staircase {n} has non-adjacent cells {x}, {y}")
    total = sum(B.dim(pos) for pos in support)
    if len(owner) != total:
        return Verdict(False, f"{len(owner)} of {total} generators are covered")

    actual = set()
    for kind, maps, delta in (("h", hh, (1, 0)), ("v", vv, (0, 1))):
        for (p, q), M in maps.items():
            for i, row in enumerate(M.rows):
                if row:
                    j = row.bit_length() - 1
                    actual.add((kind, (p, q, j), (p - delta[0], q - delta[1], i)))
    missing = expected - actual
    if missing:
        return Verdict(False, f"arrow {sorted(missing)[0]} is missing")
    extra = actual - expected
    if extra:
        return Verdict(False, f"unexpected arrow {sorted(extra)[0]} joins two summands")
    return Verdict(True)


def staircase_homology(D: Decomposition) -> dict[int, int]:
    """Total-complex homology read off the summands.

    Squares and odd-length staircases are acyclic; every even-length
    staircase contributes one class in the total degree of its end cells.
    """
    out: dict[int, int] = {}
    for st in D.staircases:
        if st.length % 2 == 0:
            s = st.total_degree()
            out[s] = out.get(s, 0) + 1
    return out
