"""Chain complexes, Z/2-equivariant cell complexes and bicomplexes over F2."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..errors import InvalidComplex, NotASubcomplex
from ..f2lin import F2Matrix, mul, rank

Pos = tuple[int, int]


def _zero(nrows: int, ncols: int) -> F2Matrix:
    return F2Matrix.zeros(nrows, ncols)


@dataclass(frozen=True)
class Verdict:
    """Boolean outcome of a structural check plus the first violation, if any."""

    ok: bool
    message: str | None = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class ChainComplex:
    """Graded F2 vector space with a degree -1 differential."""

    dims: Mapping[int, int]
    boundary: Mapping[int, F2Matrix] = field(default_factory=dict)

    def dim(self, i: int) -> int:
        return self.dims.get(i, 0)

    def gradings(self) -> list[int]:
        return sorted(i for i, d in self.dims.items() if d)

    def d(self, i: int) -> F2Matrix:
        """Boundary map from grading ``i`` to ``i - 1``."""
        m = self.boundary.get(i)
        return m if m is not None else _zero(self.dim(i - 1), self.dim(i))

    def validate(self) -> None:
        for i, m in self.boundary.items():
            if m.shape != (self.dim(i - 1), self.dim(i)):
                raise InvalidComplex(f"boundary {i} has shape {m.shape}, expected {(self.dim(i - 1), self.dim(i))}")
        for i in self.gradings():
            if not mul(self.d(i - 1), self.d(i)).is_zero():
                raise InvalidComplex(f"d o d != 0 at grading {i}")


def homology(C: ChainComplex) -> dict[int, int]:
    """F2 Betti numbers: dim ker d_i - rank d_{i+1} for each grading."""
    out = {}
    for i in C.gradings():
        ker = C.dim(i) - rank(C.d(i))
        out[i] = ker - rank(C.d(i + 1))
    return out


@dataclass(frozen=True)
class EquivariantComplex:
    """Cellular chains of a Z/2-CW complex with the involution in the cell basis.

    ``tau`` must permute cells: fixed cells map to themselves and every other
    cell is swapped with a partner.  The fixed cells must span a subcomplex.
    """

    dims: Mapping[int, int]
    boundary: Mapping[int, F2Matrix]
    tau: Mapping[int, F2Matrix]
    fixed_cells: Mapping[int, frozenset[int]]
    name: str = ""

    def dim(self, i: int) -> int:
        return self.dims.get(i, 0)

    def gradings(self) -> list[int]:
        return sorted(i for i, d in self.dims.items() if d)

    def chain_complex(self) -> ChainComplex:
        return ChainComplex(dict(self.dims), dict(self.boundary))

    def d(self, i: int) -> F2Matrix:
        return self.chain_complex().d(i)

    def t(self, i: int) -> F2Matrix:
        m = self.tau.get(i)
        return m if m is not None else F2Matrix.identity(self.dim(i))

    def fixed(self, i: int) -> frozenset[int]:
        return frozenset(self.fixed_cells.get(i, ()))

    def orbits(self, i: int) -> list[tuple[int, int]]:
        """Free orbits ``(c, tau c)`` with ``c < tau c``."""
        t = self.t(i)
        out = []
        for c in range(self.dim(i)):
            image = t.column(c)
            partner = image.bit_length() - 1
            if partner > c:
                out.append((c, partner))
        return out

    def validate(self) -> None:
        self.chain_complex().validate()
        for i in self.gradings():
            n = self.dim(i)
            t = self.t(i)
            if t.shape != (n, n):
                raise InvalidComplex(f"tau at grading {i} has shape {t.shape}")
            fixed = self.fixed(i)
            if any(not 0 <= c < n for c in fixed):
                raise InvalidComplex(f"fixed cell index out of range at grading {i}")
            for c, image in enumerate(t.columns()):
                if image.bit_count() != 1:
                    raise InvalidComplex(f"tau does not permute cells at grading {i}")
                partner = image.bit_length() - 1
                if (partner == c) != (c in fixed):
                    raise InvalidComplex(
                        f"cell {c} in grading {i}: fixed_cells disagrees with tau"
                    )
            if not mul(t, t) == F2Matrix.identity(n):
                raise InvalidComplex(f"tau^2 != id at grading {i}")
            if mul(self.d(i), t) != mul(self.t(i - 1), self.d(i)):
                raise InvalidComplex(f"tau does not commute with the boundary at grading {i}")
        for i in self.gradings():
            for c in self.fixed(i):
                col = self.d(i).column(c)
                allowed = sum(1 << k for k in self.fixed(i - 1))
                if col & ~allowed:
                    raise NotASubcomplex(
                        f"boundary of fixed cell {c} in grading {i} leaves the fixed cells"
                    )


def fixed_subcomplex(E: EquivariantComplex) -> ChainComplex:
    """Restriction of the boundary to the span of fixed cells, re-indexed in sorted order."""
    index = {i: sorted(E.fixed(i)) for i in E.gradings()}
    dims = {i: len(ix) for i, ix in index.items() if ix}
    boundary = {}
    for i, cells in index.items():
        below = index.get(i - 1, [])
        pos = {c: k for k, c in enumerate(below)}
        d = E.d(i)
        cols = []
        for c in cells:
            col = d.column(c)
            v = 0
            while col:
                low = col & -col
                b = low.bit_length() - 1
                if b not in pos:
                    raise NotASubcomplex(
                        f"boundary of fixed cell {c} in grading {i} hits non-fixed cell {b}"
                    )
                v |= 1 << pos[b]
                col ^= low
            cols.append(v)
        if cells and below:
            boundary[i] = F2Matrix.from_columns(len(below), cols)
    return ChainComplex(dims, boundary)


@dataclass(frozen=True)
class Bicomplex:
    """Finite bigraded F2 vector space with commuting differentials.

    ``d_h[(p, q)]`` maps bigrading (p, q) to (p-1, q) and ``d_v[(p, q)]`` maps
    (p, q) to (p, q-1).  Rows increase upward and columns rightward, so the
    horizontal differential points left and the vertical one points down.
    """

    dims: Mapping[Pos, int]
    d_h: Mapping[Pos, F2Matrix] = field(default_factory=dict)
    d_v: Mapping[Pos, F2Matrix] = field(default_factory=dict)

    def dim(self, pos: Pos) -> int:
        return self.dims.get(pos, 0)

    def support(self) -> list[Pos]:
        return sorted(pos for pos, d in self.dims.items() if d)

    def h(self, pos: Pos) -> F2Matrix:
        m = self.d_h.get(pos)
        p, q = pos
        return m if m is not None else _zero(self.dim((p - 1, q)), self.dim(pos))

    def v(self, pos: Pos) -> F2Matrix:
        m = self.d_v.get(pos)
        p, q = pos
        return m if m is not None else _zero(self.dim((p, q - 1)), self.dim(pos))

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def total_complex(self) -> tuple[ChainComplex, dict[int, list[Pos]]]:
        """Total complex graded by p + q, with the block order used for each degree."""
        blocks: dict[int, list[Pos]] = {}
        for pos in self.support():
            blocks.setdefault(pos[0] + pos[1], []).append(pos)
        offsets = {}
        dims = {}
        for s, poss in blocks.items():
            off = 0
            for pos in poss:
                offsets[pos] = off
                off += self.dim(pos)
            dims[s] = off
        boundary = {}
        for s, poss in blocks.items():
            if s - 1 not in dims:
                continue
            cols = []
            for pos in poss:
                p, q = pos
                hcols = self.h(pos).columns()
                vcols = self.v(pos).columns()
                for j in range(self.dim(pos)):
                    col = 0
                    if self.dim((p - 1, q)):
                        col ^= hcols[j] << offsets[(p - 1, q)]
                    if self.dim((p, q - 1)):
                        col ^= vcols[j] << offsets[(p, q - 1)]
                    cols.append(col)
            boundary[s] = F2Matrix.from_columns(dims[s - 1], cols)
        return ChainComplex(dims, boundary), blocks


def validate(B: Bicomplex) -> Verdict:
    """Check shapes, d_h^2 = 0, d_v^2 = 0 and d_h d_v = d_v d_h.

    The returned verdict is falsy on failure and names the first violated
    identity and its bigrading.
    """
    for name, maps, delta in (("d_h", B.d_h, (1, 0)), ("d_v", B.d_v, (0, 1))):
        for pos, m in maps.items():
            target = (pos[0] - delta[0], pos[1] - delta[1])
            if m.shape != (B.dim(target), B.dim(pos)):
                return Verdict(False, f"{name} at {pos} has shape {m.shape}, expected {(B.dim(target), B.dim(pos))}")
    for pos in B.support():
        p, q = pos
        if not mul(B.h((p - 1, q)), B.h(pos)).is_zero():
            return Verdict(False, f"d_h o d_h != 0 at {pos}")
        if not mul(B.v((p, q - 1)), B.v(pos)).is_zero():
            return Verdict(False, f"d_v o d_v != 0 at {pos}")
        if mul(B.h((p, q - 1)), B.v(pos)) != mul(B.v((p - 1, q)), B.h(pos)):
            return Verdict(False, f"d_h o d_v != d_v o d_h at {pos}")
    return Verdict(True)


def tate_bicomplex(E: EquivariantComplex, width: int) -> Bicomplex:
    """Columns 0..width-1, each a copy of E vertically, joined by 1 + tau."""
    if width < 2:
        raise ValueError("window width must be at least 2")
    dims, d_h, d_v = {}, {}, {}
    for i in E.gradings():
        n = E.dim(i)
        one_plus_tau = E.t(i) + F2Matrix.identity(n)
        for p in range(width):
            dims[(p, i)] = n
            if p > 0 and not one_plus_tau.is_zero():
                d_h[(p, i)] = one_plus_tau
            d = E.d(i)
            if E.dim(i - 1) and not d.is_zero():
                d_v[(p, i)] = d
    return Bicomplex(dims, d_h, d_v)


def tate_e1_ranks(E: EquivariantComplex) -> dict[int, int]:
    """dim ker(1+tau) / im(1+tau) per grading."""
    out = {}
    for i in E.gradings():
        n = E.dim(i)
        r = rank(E.t(i) + F2Matrix.identity(n))
        out[i] = (n - r) - r
    return out
