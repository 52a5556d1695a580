"""Smith and Floyd inequalities for involutions, and staircase shape checks.

For the Floyd inequality, the Tate bicomplex of an involution (columns of
cellular chains joined by ``1 + tau``) splits into squares and staircases.
An even-length staircase carries one class when the vertical differential
is taken first (a class of X) and one when the horizontal differential is
taken first (a class of the fixed set).  The first sits at the end that no
vertical arrow touches; for a staircase opening with a horizontal arrow that
is its top row, and the fixed-set class sits on its bottom row.
"""

from __future__ import annotations

from collections import Counter

from ..errors import WindowTooSmall
from ..report import CheckReport, CheckRow
from .complexes import EquivariantComplex, fixed_subcomplex, homology, tate_bicomplex
from .decompose import Decomposition, Staircase, decompose

__all__ = [
    "check_smith",
    "check_floyd",
    "per_grading_ranks",
    "classify_staircases",
    "check_open_top_staircases",
    "open_top_violations",
    "check_no_vertical_then_horizontal",
    "floyd_witnesses",
    "default_window",
]


def _ranks(E: EquivariantComplex) -> tuple[dict[int, int], dict[int, int]]:
    E.validate()
    return homology(E.chain_complex()), homology(fixed_subcomplex(E))


def check_smith(E: EquivariantComplex) -> CheckReport:
    """Total mod 2 Betti number of X against that of the fixed set."""
    hx, hf = _ranks(E)
    report = CheckReport("smith")
    report.rows.append(CheckRow(sum(hx.values()), sum(hf.values()), kind="total"))
    return report


def per_grading_ranks(E: EquivariantComplex) -> list[tuple[int, int, int]]:
    """``(i, rank H_i(X), rank H_i(F))`` for each grading; diagnostic only."""
    hx, hf = _ranks(E)
    grades = sorted(set(hx) | set(hf))
    return [(i, hx.get(i, 0), hf.get(i, 0)) for i in grades]


def check_floyd(E: EquivariantComplex) -> CheckReport:
    """Tail inequality ``sum_{i>=n} H_i(X) >= sum_{i>=n} H_i(F)``, one row per n.

    Rows run from the top grading down to the bottom one, so the last row is
    the Smith inequality.
    """
    rows = per_grading_ranks(E)
    report = CheckReport("floyd")
    if not rows:
        return report
    lx = lf = 0
    for i, x, f in reversed(rows):
        lx += x
        lf += f
        report.rows.append(CheckRow(lx, lf, kind="tail", n=i))
    return report


def classify_staircases(D: Decomposition, staircases=None) -> Counter:
    """Count staircases by ``(open_top, open_bottom, length)``."""
    items = D.staircases if staircases is None else staircases
    return Counter((s.open_top, s.open_bottom, s.length) for s in items)


def check_no_vertical_then_horizontal(D: Decomposition) -> bool:
    """No staircase opens with a vertical arrow and closes with a horizontal one."""
    return not any(_bad_shape(s) for s in D.staircases)


def _bad_shape(s: Staircase) -> bool:
    arrows = s.arrows()
    return bool(arrows) and arrows[0] == "v" and arrows[-1] == "h"


def floyd_witnesses(D: Decomposition) -> list[tuple[int, int]]:
    """Rows of the two classes carried by each even-length staircase.

    Returns ``(x_row, f_row)``: the row of the class of X and the row of the
    class of the fixed set.  For staircases opening horizontally these are the
    top and bottom rows; a length-0 staircase gives the same row twice.
    """
    out = []
    for s in D.staircases:
        if s.length % 2:
            continue
        if s.length == 0 or s.arrows()[0] == "h":
            out.append((s.top_row, s.bottom_row))
        else:
            out.append((s.bottom_row, s.top_row))
    return out


def default_window(E: EquivariantComplex) -> int:
    grades = E.gradings()
    extent = grades[-1] - grades[0] + 1 if grades else 1
    return 2 * extent + 4


def _interior(D: Decomposition, W: int) -> list[Staircase]:
    return [s for s in D.staircases if all(1 <= p <= W - 2 for p, _, _ in s.cells)]


def _anchored_summary(E: EquivariantComplex, W: int):
    D = decompose(tate_bicomplex(E, W))
    inner = _interior(D, W)
    anchored = [s for s in inner if s.cells[0][0] == 1]
    return D, inner, Counter((tuple(s.arrows()), s.top_row) for s in anchored)


def open_top_violations(E: EquivariantComplex, W: int | None = None) -> list[Staircase]:
    """Interior staircases opening with a vertical arrow and longer than 1.

    Summands are unique up to isomorphism, so the shapes do not depend on the
    basis chosen by :func:`decompose`; a violation here is present in every
    decomposition of the window.
    """
    E.validate()
    W = default_window(E) if W is None else W
    if W < 4:
        raise WindowTooSmall(f"window {W} has no interior columns to compare")
    _, inner, summary = _anchored_summary(E, W)
    _, _, wider = _anchored_summary(E, W + 2)
    if summary != wider:
        raise WindowTooSmall(f"interior staircases at width {W} differ from width {W + 2}")
    return [s for s in inner if s.open_top and s.length > 1]


def check_open_top_staircases(E: EquivariantComplex, W: int | None = None) -> bool:
    """True when every interior staircase opening vertically has length at most 1."""
    return not open_top_violations(E, W)
