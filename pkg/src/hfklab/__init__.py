"""Knot Floer rank tables, periodic-knot rank inequalities, and F2 bicomplexes."""

from .errors import HfklabError, InputError, InternalError
from .hfk import HfkTable, alternating_hfk, delta_sequence, euler, lspace_hfk, read_table
from .laurent import LaurentPoly, divide_exact, parse_poly, render_poly, torus_alexander
from .periodic import (
    PeriodicPair,
    check_filtered_rank,
    check_total_rank,
    check_alternating_alexander,
    check_lspace_alexander,
    lift_grading,
    max_grading_check,
    mirror,
)
from .report import CheckReport, CheckRow

__version__ = "0.1.0"
