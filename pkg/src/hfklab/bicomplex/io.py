"""JSON interchange for bicomplexes, equivariant complexes and decompositions.

Matrices are written sparse-by-row: one list of column indices per row.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import DimensionMismatch, ParseError
from ..f2lin import F2Matrix
from .complexes import Bicomplex, EquivariantComplex
from .decompose import Decomposition, Square, Staircase

__all__ = [
    "bicomplex_to_json",
    "bicomplex_from_json",
    "equivariant_to_json",
    "equivariant_from_json",
    "decomposition_to_json",
    "load_bicomplex",
    "load_equivariant",
    "load_json",
]


def _int(x, what):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{what} must be an integer, got {x!r}")
    return x


def _pairs(obj, key, width):
    raw = obj.get(key, [])
    if not isinstance(raw, list):
        raise ParseError(f"'{key}' must be a list")
    out = []
    for entry in raw:
        if not isinstance(entry, list) or len(entry) != width:
            raise ParseError(f"'{key}' entries must have {width} fields, got {entry!r}")
        out.append(entry)
    return out


def _matrix(rows, nrows, ncols, where):
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{where}: matrix must be a list of index lists")
    try:
        return F2Matrix.from_sparse(nrows, ncols, [[_int(j, where) for j in r] for r in rows])
    except DimensionMismatch as exc:
        raise ParseError(f"{where}: {exc}") from None


def bicomplex_to_json(B: Bicomplex) -> dict:
    return {
        "dims": [[p, q, n] for (p, q), n in sorted(B.dims.items()) if n],
        "d_h": [[p, q, M.to_sparse()] for (p, q), M in sorted(B.d_h.items()) if not M.is_zero()],
        "d_v": [[p, q, M.to_sparse()] for (p, q), M in sorted(B.d_v.items()) if not M.is_zero()],
    }


def bicomplex_from_json(obj) -> Bicomplex:
    if not isinstance(obj, dict):
        raise ParseError("bicomplex JSON must be an object")
    dims = {}
    for p, q, n in _pairs(obj, "dims", 3):
        key = (_int(p, "p"), _int(q, "q"))
        if key in dims:
            raise ParseError(f"bigrading {key} listed twice")
        if _int(n, "dim") < 0:
            raise ParseError(f"negative dimension at {key}")
        dims[key] = n
    maps = {}
    for name, delta in (("d_h", (1, 0)), ("d_v", (0, 1))):
        out = {}
        for p, q, rows in _pairs(obj, name, 3):
            pos = (_int(p, "p"), _int(q, "q"))
            target = (pos[0] - delta[0], pos[1] - delta[1])
            out[pos] = _matrix(rows, dims.get(target, 0), dims.get(pos, 0), f"{name} at {pos}")
        maps[name] = out
    return Bicomplex(dims, maps["d_h"], maps["d_v"])


def equivariant_to_json(E: EquivariantComplex) -> dict:
    out = {
        "dims": [[i, n] for i, n in sorted(E.dims.items())],
        "boundary": [[i, M.to_sparse()] for i, M in sorted(E.boundary.items())],
        "tau": [[i, M.to_sparse()] for i, M in sorted(E.tau.items())],
        "fixed_cells": [[i, sorted(c)] for i, c in sorted(E.fixed_cells.items())],
    }
    if E.name:
        out["name"] = E.name
    return out


def equivariant_from_json(obj) -> EquivariantComplex:
    if not isinstance(obj, dict):
        raise ParseError("equivariant complex JSON must be an object")
    dims = {}
    for i, n in _pairs(obj, "dims", 2):
        dims[_int(i, "grading")] = _int(n, "dim")
    boundary = {}
    for i, rows in _pairs(obj, "boundary", 2):
        i = _int(i, "grading")
        boundary[i] = _matrix(rows, dims.get(i - 1, 0), dims.get(i, 0), f"boundary {i}")
    tau = {}
    for i, rows in _pairs(obj, "tau", 2):
        i = _int(i, "grading")
        tau[i] = _matrix(rows, dims.get(i, 0), dims.get(i, 0), f"tau {i}")
    fixed = {}
    for i, cells in _pairs(obj, "fixed_cells", 2):
        if not isinstance(cells, list):
            raise ParseError("fixed_cells entries must be index lists")
        fixed[_int(i, "grading")] = frozenset(_int(c, "cell") for c in cells)
    return EquivariantComplex(dims, boundary, tau, fixed, name=str(obj.get("name", "")))


def decomposition_to_json(D: Decomposition) -> dict:
    return {
        "basis_change": [[p, q, U.to_sparse()] for (p, q), U in sorted(D.basis_change.items())],
        "squares": [{"corner": list(s.corner), "indices": list(s.indices)} for s in D.squares],
        "staircases": [
            {
                "cells": [list(c) for c in s.cells],
                "length": s.length,
                "open_top": s.open_top,
                "open_bottom": s.open_bottom,
            }
            for s in D.staircases
        ],
    }


def decomposition_from_json(obj) -> Decomposition:
    basis = {}
    for p, q, rows in _pairs(obj, "basis_change", 3):
        n = len(rows)
        basis[(p, q)] = _matrix(rows, n, n, f"basis_change at {(p, q)}")
    squares = tuple(Square(tuple(s["corner"]), tuple(s["indices"])) for s in obj.get("squares", []))
    stairs = tuple(Staircase(tuple(tuple(c) for c in s["cells"])) for s in obj.get("staircases", []))
    return Decomposition(basis, squares, stairs)


def load_json(path) -> object:
    try:
        with open(Path(path), encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg})", exc.pos) from None


def load_bicomplex(path) -> Bicomplex:
    return bicomplex_from_json(load_json(path))


def load_equivariant(path) -> EquivariantComplex:
    return equivariant_from_json(load_json(path))
