"""Bicomplexes over F2, their square/staircase splitting, and Smith/Floyd checks."""

from .complexes import (
    Bicomplex,
    ChainComplex,
    EquivariantComplex,
    Verdict,
    fixed_subcomplex,
    homology,
    tate_bicomplex,
    tate_e1_ranks,
    validate,
)
from .decompose import (
    Decomposition,
    Square,
    Staircase,
    conjugated_differentials,
    decompose,
    staircase_homology,
    verify_decomposition,
)
from .io import (
    bicomplex_from_json,
    bicomplex_to_json,
    decomposition_from_json,
    decomposition_to_json,
    equivariant_from_json,
    equivariant_to_json,
    load_bicomplex,
    load_equivariant,
)
from .samples import (
    free_pair,
    planted_bicomplex,
    point,
    random_bicomplex,
    random_equivariant,
    s2_reflection,
    summand_shapes,
)
from .theorems import (
    check_floyd,
    check_open_top_staircases,
    check_no_vertical_then_horizontal,
    check_smith,
    classify_staircases,
    default_window,
    floyd_witnesses,
    open_top_violations,
    per_grading_ranks,
)

__all__ = [name for name in dir() if not name.startswith("_")]
