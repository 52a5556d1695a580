"""Small named models and pseudorandom generators for tests and the CLI."""

from __future__ import annotations

import random
from collections import Counter

from ..f2lin import F2Matrix, inverse, kernel_basis, mul
from .complexes import Bicomplex, EquivariantComplex

__all__ = [
    "point",
    "free_pair",
    "s2_reflection",
    "random_equivariant",
    "random_bicomplex",
    "random_invertible",
    "planted_bicomplex",
    "summand_shapes",
]


def _sparse(nrows, ncols, rows):
    return F2Matrix.from_sparse(nrows, ncols, rows)


def point() -> EquivariantComplex:
    return EquivariantComplex({0: 1}, {}, {0: F2Matrix.identity(1)}, {0: frozenset({0})}, name="point")


def free_pair() -> EquivariantComplex:
    """Two points swapped by the involution."""
    tau = _sparse(2, 2, [[1], [0]])
    return EquivariantComplex({0: 2}, {}, {0: tau}, {0: frozenset()}, name="free-pair")


def s2_reflection() -> EquivariantComplex:
    """The 2-sphere reflected across its equator.

    Two vertices and two edges on the equator are fixed; the two
    hemispheres are swapped.
    """
    swap = _sparse(2, 2, [[1], [0]])
    ident = F2Matrix.identity(2)
    both = _sparse(2, 2, [[0, 1], [0, 1]])
    return EquivariantComplex(
        dims={0: 2, 1: 2, 2: 2},
        boundary={1: both, 2: both},
        tau={0: ident, 1: ident, 2: swap},
        fixed_cells={0: frozenset({0, 1}), 1: frozenset({0, 1}), 2: frozenset()},
        name="s2-reflection",
    )


def _random_cycle(rng: random.Random, cycles: list[int]) -> int:
    v = 0
    for z in cycles:
        if rng.random() < 0.5:
            v ^= z
    return v


def random_equivariant(rng: random.Random, max_degree: int = 3, max_cells: int = 4) -> EquivariantComplex:
    """Random Z/2-cell complex built one grading at a time.

    A new fixed cell bounds a random cycle of the fixed cells below; a new
    free pair ``(c, tau c)`` bounds ``(z, tau z)`` for a random cycle ``z``.
    Cell indices are shuffled within each grading.
    """
    top = rng.randint(0, max_degree)
    dims, boundary, tau, fixed = {}, {}, {}, {}
    for i in range(top + 1):
        n_fixed = rng.randint(0, max_cells)
        n_pairs = rng.randint(0, max(0, (max_cells - n_fixed) // 2))
        if i == 0 and n_fixed + n_pairs == 0:
            n_fixed = 1
        n = n_fixed + 2 * n_pairs
        if n == 0:
            break
        below = dims.get(i - 1, 0)
        if below:
            d_prev = boundary.get(i - 1, F2Matrix.zeros(dims.get(i - 2, 0), below))
            ker = kernel_basis(d_prev).columns()
            # cycles supported on fixed cells
            restricted = kernel_basis(_restrict_columns(d_prev, fixed[i - 1])).columns()
            fixed_cycles = [_expand(z, sorted(fixed[i - 1])) for z in restricted]
        else:
            ker, fixed_cycles = [], []
        t_below = tau.get(i - 1)
        order = list(range(n))
        rng.shuffle(order)
        cols = [0] * n
        perm = list(range(n))
        fixed_here = set()
        slots = iter(order)
        for _ in range(n_fixed):
            c = next(slots)
            fixed_here.add(c)
            cols[c] = _random_cycle(rng, fixed_cycles)
        for _ in range(n_pairs):
            c, c2 = next(slots), next(slots)
            z = _random_cycle(rng, ker)
            cols[c] = z
            cols[c2] = t_below.apply(z) if t_below is not None else z
            perm[c], perm[c2] = c2, c
        dims[i] = n
        if below:
            boundary[i] = F2Matrix.from_columns(below, cols)
        tau[i] = F2Matrix.from_columns(n, [1 << perm[c] for c in range(n)])
        fixed[i] = frozenset(fixed_here)
    return EquivariantComplex(dims, boundary, tau, fixed, name="random")


def _restrict_columns(M: F2Matrix, keep) -> F2Matrix:
    cols = M.columns()
    return F2Matrix.from_columns(M.nrows, [cols[c] for c in sorted(keep)])


def _expand(z: int, index: list[int]) -> int:
    v = 0
    for k, c in enumerate(index):
        if (z >> k) & 1:
            v |= 1 << c
    return v


def random_invertible(n: int, rng: random.Random) -> F2Matrix:
    while True:
        M = F2Matrix.random(n, n, rng)
        if M.rank() == n:
            return M


def _summand_shapes(rng: random.Random, grid: int):
    """Yield lists of (pos, ("h"|"v", source, target)) describing one summand."""
    p, q = rng.randrange(grid), rng.randrange(grid)
    if rng.random() < 0.25 and p >= 1 and q >= 1:
        return [(p, q), (p - 1, q), (p, q - 1), (p - 1, q - 1)], [
            ("h", 0, 1), ("h", 2, 3), ("v", 0, 2), ("v", 1, 3)
        ]
    cells = [(p, q)]
    arrows = []
    first = rng.choice("hv")
    kind = first
    for _ in range(rng.randint(0, 5)):
        cp, cq = cells[-1]
        nxt = (cp + 1, cq) if kind == "h" else (cp, cq - 1)
        if not (0 <= nxt[0] < grid and 0 <= nxt[1] < grid):
            break
        k = len(cells)
        cells.append(nxt)
        # horizontal arrows point left, so the new right-hand cell is the source
        arrows.append(("h", k, k - 1) if kind == "h" else ("v", k - 1, k))
        kind = "v" if kind == "h" else "h"
    return cells, arrows


def random_bicomplex(rng: random.Random, grid: int = 4, max_dim: int = 6,
                     max_summands: int = 8) -> Bicomplex:
    """Direct sum of random squares and staircases in a grid, in a scrambled basis.

    Every finite bicomplex has this form up to isomorphism, so conjugating by
    random invertible matrices gives instances with no visible structure.
    """
    return planted_bicomplex(rng, grid, max_dim, max_summands)[0]


def planted_bicomplex(rng: random.Random, grid: int = 4, max_dim: int = 6,
                      max_summands: int = 8) -> tuple[Bicomplex, Counter]:
    """As :func:`random_bicomplex`, also returning the planted summands.

    Summands are ``("square", corner)`` or ``("staircase", positions)`` with
    positions listed top-left to bottom-right.
    """
    dims: dict = {}
    h_arrows, v_arrows = [], []
    planted: Counter = Counter()
    for _ in range(rng.randint(0, max_summands)):
        cells, arrows = _summand_shapes(rng, grid)
        if any(dims.get(c, 0) >= max_dim for c in cells):
            continue
        if len(cells) == 4 and len(arrows) == 4:
            planted[("square", cells[0])] += 1
        else:
            planted[("staircase", tuple(cells))] += 1
        index = []
        for c in cells:
            index.append((c, dims.get(c, 0)))
            dims[c] = dims.get(c, 0) + 1
        for kind, s, t in arrows:
            (h_arrows if kind == "h" else v_arrows).append((index[s], index[t]))

    def build(arrows, delta):
        rows: dict = {}
        for (src, j), (tgt, i) in arrows:
            M = rows.setdefault(src, [0] * dims[tgt])
            M[i] |= 1 << j
        return {
            src: F2Matrix(dims[(src[0] - delta[0], src[1] - delta[1])], dims[src], tuple(r))
            for src, r in rows.items()
        }

    d_h = build(h_arrows, (1, 0))
    d_v = build(v_arrows, (0, 1))
    U = {pos: random_invertible(n, rng) for pos, n in dims.items()}
    Uinv = {pos: inverse(M) for pos, M in U.items()}
    d_h = {(p, q): mul(mul(Uinv[(p - 1, q)], M), U[(p, q)]) for (p, q), M in d_h.items()}
    d_v = {(p, q): mul(mul(Uinv[(p, q - 1)], M), U[(p, q)]) for (p, q), M in d_v.items()}
    return Bicomplex(dims, d_h, d_v), planted


def summand_shapes(D) -> Counter:
    """The decomposition's summands in the form used by :func:`planted_bicomplex`."""
    out: Counter = Counter()
    for sq in D.squares:
        out[("square", sq.corner)] += 1
    for st in D.staircases:
        out[("staircase", tuple((p, q) for p, q, _ in st.cells))] += 1
    return out
