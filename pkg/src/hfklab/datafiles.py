"""Locating and loading the bundled example data.

Set ``HFKLAB_DATA`` to a directory to use other files in place of the
bundled ones.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .errors import InputError
from .laurent import LaurentPoly, parse_poly

__all__ = ["data_dir", "data_path", "load_knots", "knot_polynomial", "knot_signature"]


def data_dir() -> Path:
    override = os.environ.get("HFKLAB_DATA")
    return Path(override) if override else Path(__file__).with_name("data")


def data_path(name: str) -> Path:
    path = data_dir() / name
    if not path.exists():
        raise InputError(f"no bundled data file {name!r} in {data_dir()}")
    return path


def load_knots() -> dict[str, dict]:
    with open(data_path("knots.json"), encoding="utf-8") as fh:
        raw = json.load(fh)
    return {k["name"]: k for k in raw["knots"]}


def knot_polynomial(name: str) -> LaurentPoly:
    knots = load_knots()
    if name not in knots:
        raise InputError(f"unknown knot {name!r}; known: {', '.join(sorted(knots))}")
    return parse_poly(knots[name]["alexander"])


def knot_signature(name: str) -> int:
    return int(load_knots()[name]["signature"])
