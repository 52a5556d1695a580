"""Bigraded knot Floer rank tables.

An :class:`HfkTable` records the F2 rank of HFK-hat in each bigrading
(maslov, alexander).  Two closed-form builders are provided: one for
L-space knots (a staircase read off from the Alexander polynomial) and one
for alternating knots (ranks |a_s| on a single diagonal fixed by the
signature).
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from bisect import bisect_left
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (
    AsymmetricPolynomial,
    DuplicateEntry,
    NonpositiveRank,
    NotLSpacePolynomial,
    OddSignature,
    ParseError,
)
from .laurent import LaurentPoly

__all__ = [
    "HfkTable",
    "DeltaSequence",
    "delta_sequence",
    "lspace_hfk",
    "alternating_hfk",
    "alternating_signs_ok",
    "euler",
    "total_rank",
    "rank_at",
    "alexander_column",
    "read_table",
    "write_table",
]


class HfkTable:
    """Map (maslov, alexander) -> positive rank.  Absent entries are zero."""

    def __init__(self, ranks: Mapping[tuple[int, int], int] | None = None, label: str | None = None):
        clean = {}
        for (m, a), r in (ranks or {}).items():
            if r < 0:
                raise NonpositiveRank(f"negative rank {r} at ({m},{a})")
            if r:
                clean[(int(m), int(a))] = int(r)
        self._ranks = dict(sorted(clean.items(), key=lambda kv: (kv[0][1], kv[0][0])))
        self.label = label

    @property
    def ranks(self) -> dict[tuple[int, int], int]:
        return dict(self._ranks)

    def items(self):
        return self._ranks.items()

    def __len__(self):
        return len(self._ranks)

    def __eq__(self, other):
        if not isinstance(other, HfkTable):
            return NotImplemented
        return self._ranks == other._ranks

    def __hash__(self):
        return hash(tuple(self._ranks.items()))

    def __repr__(self):
        name = f"{self.label!r}, " if self.label else ""
        return f"HfkTable({name}{self._ranks})"

    def rank_at(self, maslov: int, alexander: int) -> int:
        return self._ranks.get((maslov, alexander), 0)

    def total_rank(self) -> int:
        return sum(self._ranks.values())

    def alexander_gradings(self) -> list[int]:
        return sorted({a for _, a in self._ranks})

    def maslov_gradings(self) -> list[int]:
        return sorted({m for m, _ in self._ranks})

    def alexander_column(self, a: int) -> dict[int, int]:
        return {m: r for (m, aa), r in self._ranks.items() if aa == a}

    @cached_property
    def _columns(self) -> dict[int, tuple[list[int], list[int]]]:
        # per alexander grading: sorted maslov list and suffix sums of ranks
        cols: dict[int, dict[int, int]] = {}
        for (m, a), r in self._ranks.items():
            cols.setdefault(a, {})[m] = r
        out = {}
        for a, col in cols.items():
            ms = sorted(col)
            suffix = [0] * (len(ms) + 1)
            for k in range(len(ms) - 1, -1, -1):
                suffix[k] = suffix[k + 1] + col[ms[k]]
            out[a] = (ms, suffix)
        return out

    def column_total(self, a: int) -> int:
        col = self._columns.get(a)
        return col[1][0] if col else 0

    def rank_at_least(self, a: int, q: int) -> int:
        """Sum of ranks in alexander grading ``a`` with maslov >= q."""
        col = self._columns.get(a)
        if col is None:
            return 0
        ms, suffix = col
        return suffix[bisect_left(ms, q)]

    def rank_at_most(self, a: int, q: int) -> int:
        """Sum of ranks in alexander grading ``a`` with maslov <= q."""
        col = self._columns.get(a)
        if col is None:
            return 0
        ms, suffix = col
        return suffix[0] - suffix[bisect_left(ms, q + 1)]

    # -- serialization --------------------------------------------------------
    def to_json(self) -> dict:
        out = {}
        if self.label is not None:
            out["label"] = self.label
        out["generators"] = [
            {"alexander": a, "maslov": m, "rank": r} for (m, a), r in self._ranks.items()
        ]
        return out

    @classmethod
    def from_json(cls, data) -> HfkTable:
        if not isinstance(data, dict) or "generators" not in data:
            raise ParseError("HFK table JSON must be an object with a 'generators' list")
        gens = data["generators"]
        if not isinstance(gens, list):
            raise ParseError("'generators' must be a list")
        return cls._from_rows(
            ((g.get("maslov"), g.get("alexander"), g.get("rank")) if isinstance(g, dict) else (None, None, None)
             for g in gens),
            label=data.get("label"),
        )

    @classmethod
    def _from_rows(cls, rows: Iterable[tuple], label=None) -> HfkTable:
        ranks: dict[tuple[int, int], int] = {}
        for k, (m, a, r) in enumerate(rows):
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in (m, a, r)):
                raise ParseError(f"generator {k}: maslov, alexander, rank must be integers")
            if r <= 0:
                raise NonpositiveRank(f"generator {k}: rank {r} at ({m},{a}) is not positive")
            if (m, a) in ranks:
                raise DuplicateEntry(f"generator {k}: duplicate bigrading ({m},{a})")
            ranks[(m, a)] = r
        if not ranks:
            warnings.warn("HFK table has no generators", stacklevel=3)
        return cls(ranks, label=label)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["maslov", "alexander", "rank"])
        for (m, a), r in self._ranks.items():
            w.writerow([m, a, r])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, label=None) -> HfkTable:
        reader = csv.reader(io.StringIO(text))
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty CSV") from None
        if [h.strip() for h in header] != ["maslov", "alexander", "rank"]:
            raise ParseError("CSV header must be maslov,alexander,rank")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 3:
                raise ParseError(f"line {lineno}: expected 3 fields")
            try:
                rows.append(tuple(int(x) for x in row))
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer field") from None
        return cls._from_rows(rows, label=label)


def read_table(path) -> HfkTable:
    """Load a table from a ``.json`` or ``.csv`` file."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return HfkTable.from_csv(text, label=path.stem)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg}", exc.pos) from None
    return HfkTable.from_json(data)


def write_table(table: HfkTable, path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        path.write_text(table.to_csv())
    else:
        path.write_text(json.dumps(table.to_json(), indent=1, sort_keys=True) + "\n")


# -- builders -----------------------------------------------------------------

@dataclass(frozen=True)
class DeltaSequence:
    """Pairs (n_i, delta_i) for i = -k..k, ordered by increasing n."""

    steps: tuple[tuple[int, int], ...]

    @property
    def k(self) -> int:
        return len(self.steps) // 2

    def exponents(self) -> list[int]:
        return [n for n, _ in self.steps]

    def deltas(self) -> list[int]:
        return [d for _, d in self.steps]


def _lspace_exponents(delta: LaurentPoly) -> list[int]:
    if delta.is_zero():
        raise NotLSpacePolynomial("zero polynomial")
    if not delta.symmetric():
        raise NotLSpacePolynomial("polynomial is not symmetric")
    exps = delta.exponents()
    coefs = [delta.coefficient(e) for e in exps]
    if any(abs(c) != 1 for c in coefs):
        raise NotLSpacePolynomial("coefficients must all be +1 or -1")
    if coefs[-1] != 1:
        raise NotLSpacePolynomial("top coefficient must be +1")
    if any(coefs[i] == coefs[i + 1] for i in range(len(coefs) - 1)):
        raise NotLSpacePolynomial("coefficients must alternate in sign")
    if len(exps) % 2 == 0:
        raise NotLSpacePolynomial("number of terms must be odd")
    return exps


def delta_sequence(delta: LaurentPoly) -> DeltaSequence:
    """Staircase gradings of an L-space knot from its Alexander polynomial.

    Runs the recursion downward from the top exponent: the top generator sits
    in maslov grading 0; stepping from n_{i+1} to n_i subtracts
    2(n_{i+1} - n_i) - 1 when k - i is odd and 1 when it is even.
    """
    n = _lspace_exponents(delta)
    k = len(n) // 2
    d = [0] * len(n)
    # list index j corresponds to i = j - k
    for j in range(len(n) - 2, -1, -1):
        i = j - k
        if (k - i) % 2 == 1:
            d[j] = d[j + 1] - 2 * (n[j + 1] - n[j]) + 1
        else:
            d[j] = d[j + 1] - 1
    return DeltaSequence(tuple(zip(n, d)))


def lspace_hfk(delta: LaurentPoly, label: str | None = None) -> HfkTable:
    seq = delta_sequence(delta)
    return HfkTable({(d, a): 1 for a, d in seq.steps}, label=label)


def alternating_hfk(delta: LaurentPoly, sigma: int, label: str | None = None) -> HfkTable:
    """Rank ``|a_s|`` at (s + sigma/2, s) for each term ``a_s t^s``.

    For an alternating knot the sign of ``a_s`` is ``(-1)^(s + sigma/2)``, so
    the Euler characteristic returns ``delta``.  The sign pattern is not
    enforced here; use :func:`alternating_signs_ok` to test it.
    """
    if sigma % 2:
        raise OddSignature(f"signature {sigma} is odd")
    if delta.is_zero():
        raise AsymmetricPolynomial("zero polynomial is not an Alexander polynomial")
    if not delta.symmetric():
        raise AsymmetricPolynomial(f"{delta} is not symmetric")
    return HfkTable({(s + sigma // 2, s): abs(c) for s, c in delta.items()}, label=label)


def alternating_signs_ok(delta: LaurentPoly, sigma: int) -> bool:
    """True when every coefficient has sign ``(-1)^(s + sigma/2)``."""
    return all((c > 0) == ((s + sigma // 2) % 2 == 0) for s, c in delta.items())


def euler(table: HfkTable) -> LaurentPoly:
    return LaurentPoly(((a, (-1) ** (m % 2) * r) for (m, a), r in table.items()))


def total_rank(table: HfkTable) -> int:
    return table.total_rank()


def rank_at(table: HfkTable, maslov: int, alexander: int) -> int:
    return table.rank_at(maslov, alexander)


def alexander_column(table: HfkTable, a: int) -> dict[int, int]:
    return table.alexander_column(a)
