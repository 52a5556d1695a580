"""Random tangle words on a few strands, their trace closures, and PD export.

A word is read top to bottom.  Between consecutive operations sits a level
of ``strands`` points numbered 1..n from left to right; operation ``k``
connects level ``k`` to level ``k + 1``:

* ``o_i`` / ``u_i`` cross strands i and i+1; the strand entering from
  position i goes over (``o``) or under (``u``);
* ``c_i`` caps positions i, i+1 of the level above and cups positions i, i+1
  of the level below;
* every other position passes straight through.

The trace closure joins position j of the bottom level to position j of the
top level around the right-hand side, so the closure is planar and the
braid axis sits to the right of all strands.  The linking number with that
axis is the signed number of times the knot crosses the top level.

Random words come from SplitMix64 (Steele, Lea and Flood), which takes a
64-bit state and steps it as::

    state = state + 0x9E3779B97F4A7C15           (mod 2^64)
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9      (mod 2^64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB      (mod 2^64)
    out = z ^ (z >> 31)

Each operation draws one output ``x`` and takes ``r = (x * m) >> 64`` with
``m = 3 * (strands - 1)``; ``r`` selects kind ``"cou"[r // (strands - 1)]``
and index ``r % (strands - 1) + 1``.  Word ``seed`` starts from state
``seed``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Iterator

from .errors import NotAKnot, ParseError

__all__ = [
    "TangleOp",
    "TangleWord",
    "PdCode",
    "SplitMix64",
    "random_word",
    "parse_word",
    "closure_components",
    "trace_components",
    "double",
    "is_periodic_candidate",
    "linking_with_axis",
    "pd_export",
    "harness",
    "HarnessStats",
]

log = logging.getLogger(__name__)

KINDS = ("c", "o", "u")
_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class TangleOp:
    kind: str  # "c" cup-cap, "o" over, "u" under
    index: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown tangle operation {self.kind!r}")
        if self.index < 1:
            raise ValueError(f"operation index {self.index} must be at least 1")

    def __str__(self):
        return f"{self.kind}{self.index}"


@dataclass(frozen=True)
class TangleWord:
    ops: tuple[TangleOp, ...] = ()
    strands: int = 5

    def __post_init__(self):
        if self.strands < 2:
            raise ValueError("a tangle word needs at least 2 strands")
        for op in self.ops:
            if op.index > self.strands - 1:
                raise ValueError(f"{op} is out of range for {self.strands} strands")

    def __len__(self):
        return len(self.ops)

    def __str__(self):
        return " ".join(map(str, self.ops))

    def crossings(self) -> int:
        return sum(op.kind != "c" for op in self.ops)


def parse_word(text: str, strands: int = 5) -> TangleWord:
    """Inverse of ``str(word)``: ops like ``c1 o3 u2`` separated by spaces."""
    ops = []
    pos = 0
    for tok in text.split():
        m = re.fullmatch(r"([cou])(\d+)", tok)
        pos = text.index(tok, pos)
        if not m:
            raise ParseError(f"bad tangle operation {tok!r}", pos)
        ops.append(TangleOp(m.group(1), int(m.group(2))))
        pos += len(tok)
    try:
        return TangleWord(tuple(ops), strands)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, m: int) -> int:
        return (self.next() * m) >> 64


def random_word(seed: int, n_ops: int = 18, strands: int = 5) -> TangleWord:
    if n_ops < 1 or strands < 2:
        raise ValueError("need n_ops >= 1 and strands >= 2")
    rng = SplitMix64(seed)
    k = strands - 1
    ops = []
    for _ in range(n_ops):
        r = rng.below(3 * k)
        ops.append(TangleOp(KINDS[r // k], r % k + 1))
    return TangleWord(tuple(ops), strands)


def double(T: TangleWord) -> TangleWord:
    return TangleWord(T.ops + T.ops, T.strands)


# -- component counting in the connectivity monoid ---------------------------
#
# A tangle is a perfect matching on its 2n endpoints ("t", j) / ("b", j)
# plus a count of closed loops.  Stacking glues the bottom of the upper
# tangle to the top of the lower one.

class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        self.parent[self.find(x)] = self.find(y)


def _op_matching(op: TangleOp, n: int) -> dict:
    m = {}

    def join(x, y):
        m[x] = y
        m[y] = x

    i = op.index
    for j in range(1, n + 1):
        if j not in (i, i + 1):
            join(("t", j), ("b", j))
    if op.kind == "c":
        join(("t", i), ("t", i + 1))
        join(("b", i), ("b", i + 1))
    else:
        join(("t", i), ("b", i + 1))
        join(("t", i + 1), ("b", i))
    return m


def _compose(upper: tuple[dict, int], lower: tuple[dict, int], n: int) -> tuple[dict, int]:
    mu, loops_u = upper
    ml, loops_l = lower
    uf = _UnionFind()
    for x, y in mu.items():
        uf.union(("U",) + x, ("U",) + y)
    for x, y in ml.items():
        uf.union(("L",) + x, ("L",) + y)
    for j in range(1, n + 1):
        uf.union(("U", "b", j), ("L", "t", j))
    outer = [("U", "t", j) for j in range(1, n + 1)] + [("L", "b", j) for j in range(1, n + 1)]
    by_root: dict = {}
    for node in outer:
        by_root.setdefault(uf.find(node), []).append(node[1:])
    match = {}
    for a, b in by_root.values():
        match[a] = b
        match[b] = a
    middle_roots = {uf.find(("U", "b", j)) for j in range(1, n + 1)}
    loops = loops_u + loops_l + len(middle_roots - set(by_root))
    return match, loops


def _monoid(T: TangleWord) -> tuple[dict, int]:
    n = T.strands
    ident = {}
    for j in range(1, n + 1):
        ident[("t", j)] = ("b", j)
        ident[("b", j)] = ("t", j)
    acc = (ident, 0)
    for op in T.ops:
        acc = _compose(acc, (_op_matching(op, n), 0), n)
    return acc


def closure_components(T: TangleWord) -> int:
    """Components of the trace closure, free circles included."""
    match, loops = _monoid(T)
    uf = _UnionFind()
    for x, y in match.items():
        uf.union(x, y)
    for j in range(1, T.strands + 1):
        uf.union(("t", j), ("b", j))
    return len({uf.find(("t", j)) for j in range(1, T.strands + 1)}) + loops


# -- the closed diagram as an explicit graph -----------------------------------
#
# Every level point (k, j) has an "up" slot and a "down" slot, each holding
# one edge.  Cup and cap edges join two slots on the same level.

@dataclass(eq=False)
class _Edge:
    ends: tuple  # ((node, slot), (node, slot))
    crossing: int | None = None  # op index for crossing strands
    over: bool = False
    closure: bool = False

    def other_end(self, node, slot):
        first, second = self.ends
        return second if first == (node, slot) else first


def _diagram(T: TangleWord) -> dict:
    n, L = T.strands, len(T.ops)
    slots: dict = {(k, j): {} for k in range(L + 1) for j in range(1, n + 1)}

    def attach(a, a_slot, b, b_slot, **kw):
        edge = _Edge(((a, a_slot), (b, b_slot)), **kw)
        slots[a][a_slot] = edge
        slots[b][b_slot] = edge

    for k, op in enumerate(T.ops):
        i = op.index
        for j in range(1, n + 1):
            if j not in (i, i + 1):
                attach((k, j), "down", (k + 1, j), "up")
        if op.kind == "c":
            attach((k, i), "down", (k, i + 1), "down")
            attach((k + 1, i), "up", (k + 1, i + 1), "up")
        else:
            left_over = op.kind == "o"
            attach((k, i), "down", (k + 1, i + 1), "up", crossing=k, over=left_over)
            attach((k, i + 1), "down", (k + 1, i), "up", crossing=k, over=not left_over)
    for j in range(1, n + 1):
        attach((0, j), "up", (L, j), "down", closure=True)
    return slots


def _other(slot: str) -> str:
    return "down" if slot == "up" else "up"


def _walk(slots: dict, node, slot) -> Iterator[tuple[_Edge, tuple, tuple]]:
    """Traverse one component leaving ``node`` through ``slot``.

    Yields ``(edge, (from_node, from_slot), (to_node, to_slot))`` once per
    edge until the walk returns to its start.
    """
    start = (node, slot)
    while True:
        edge = slots[node][slot]
        nxt, arrive = edge.other_end(node, slot)
        yield edge, (node, slot), (nxt, arrive)
        node, slot = nxt, _other(arrive)
        if (node, slot) == start:
            return


def trace_components(T: TangleWord) -> int:
    """Components of the closure by walking the diagram edge by edge."""
    slots = _diagram(T)
    seen = set()
    comps = 0
    for node in slots:
        if node in seen:
            continue
        comps += 1
        for _, (a, _), (b, _) in _walk(slots, node, "up"):
            seen.add(a)
            seen.add(b)
    return comps


def is_periodic_candidate(T: TangleWord) -> bool:
    return closure_components(T) == 1 and closure_components(double(T)) == 1


def _require_knot(T: TangleWord) -> None:
    c = closure_components(T)
    if c != 1:
        raise NotAKnot(f"closure of '{T}' has {c} components")


def linking_with_axis(T: TangleWord) -> int:
    """Signed count of crossings of the top level, oriented upward at position 1."""
    _require_knot(T)
    lam = 0
    for edge, (a, slot), _ in _walk(_diagram(T), (0, 1), "up"):
        if edge.closure:
            lam += 1 if (a[0], slot) == (0, "up") and edge.ends[0] == (a, slot) else -1
    return lam


# -- planar diagram codes ------------------------------------------------------

@dataclass(frozen=True)
class PdCode:
    """Crossings as 4-tuples of edge labels.

    Each tuple starts at the incoming under-edge and lists the four edges
    counterclockwise.  Edge labels run 1..2n along the orientation.
    """

    crossings: tuple[tuple[int, int, int, int], ...] = ()

    def validate(self) -> None:
        counts: dict[int, int] = {}
        for x in self.crossings:
            if len(x) != 4:
                raise ParseError(f"crossing {x} does not have four edges")
            for e in x:
                counts[e] = counts.get(e, 0) + 1
        n = len(self.crossings)
        if sorted(counts) != list(range(1, 2 * n + 1)):
            raise ParseError(f"edge labels must be 1..{2 * n}")
        bad = [e for e, c in counts.items() if c != 2]
        if bad:
            raise ParseError(f"edge {bad[0]} appears {counts[bad[0]]} times")

    def render(self) -> str:
        return "PD[" + ", ".join("X[" + ",".join(map(str, x)) + "]" for x in self.crossings) + "]"

    def to_json(self) -> list[list[int]]:
        return [list(x) for x in self.crossings]

    @classmethod
    def from_json(cls, data) -> PdCode:
        try:
            pd = cls(tuple(tuple(int(e) for e in x) for x in data))
        except (TypeError, ValueError):
            raise ParseError("PD JSON must be a list of integer 4-tuples") from None
        pd.validate()
        return pd

    @classmethod
    def parse(cls, text: str) -> PdCode:
        m = re.fullmatch(r"\s*PD\[(.*)\]\s*", text, re.S)
        if not m:
            raise ParseError("expected PD[...]", 0)
        body = m.group(1).strip()
        crossings = []
        pos = 0
        for xm in re.finditer(r"X\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]", body):
            gap = body[pos:xm.start()].strip()
            if gap not in ("", ","):
                raise ParseError(f"unexpected text {gap!r}", m.start(1) + pos)
            crossings.append(tuple(int(g) for g in xm.groups()))
            pos = xm.end()
        if body[pos:].strip():
            raise ParseError(f"unexpected text {body[pos:].strip()!r}", m.start(1) + pos)
        pd = cls(tuple(crossings))
        pd.validate()
        return pd


def pd_export(T: TangleWord) -> PdCode:
    """PD code of the trace closure; cup-caps only reroute edges."""
    _require_knot(T)
    slots = _diagram(T)
    passages = [(edge, a, b) for edge, (a, _), (b, _) in _walk(slots, (0, 1), "up") if edge.crossing is not None]
    m = len(passages)
    if m == 0:
        return PdCode(())
    # the edge entering passage t is labelled t + 1; it leaves with t + 2
    label_at: dict = {}
    for t, (edge, a, b) in enumerate(passages):
        label_at[(edge.crossing, a)] = t + 1
        label_at[(edge.crossing, b)] = (t + 1) % m + 1
    under_in = {}
    for edge, a, _ in passages:
        if not edge.over:
            under_in[edge.crossing] = a
    crossings = []
    for k in sorted(under_in):
        i = T.ops[k].index
        ccw = [(k, i + 1), (k, i), (k + 1, i), (k + 1, i + 1)]  # NE, NW, SW, SE
        r = ccw.index(under_in[k])
        crossings.append(tuple(label_at[(k, ccw[(r + s) % 4])] for s in range(4)))
    return PdCode(tuple(crossings))


# -- harness -------------------------------------------------------------------

@dataclass
class HarnessStats:
    drawn: int = 0
    not_knot: int = 0
    duplicate: int = 0
    even_lambda: int = 0

    def rejection_rate(self) -> float:
        rejected = self.not_knot + self.duplicate + self.even_lambda
        return rejected / self.drawn if self.drawn else 0.0


def harness(seed0: int, target: int = 500, n_ops: int = 18, strands: int = 5,
            stats: HarnessStats | None = None, progress_every: int = 100) -> list[dict]:
    """Draw words from consecutive seeds until ``target`` distinct candidates are found.

    A word is kept when both its closure and that of its double are knots,
    it has not been seen before, and its linking number with the axis is odd.
    """
    if target < 1:
        raise ValueError("target must be at least 1")
    stats = stats if stats is not None else HarnessStats()
    seen = set()
    out = []
    seed = seed0
    while len(out) < target:
        word = random_word(seed & _MASK, n_ops, strands)
        stats.drawn += 1
        key = str(word)
        if not is_periodic_candidate(word):
            stats.not_knot += 1
        elif key in seen:
            stats.duplicate += 1
        else:
            lam = linking_with_axis(word)
            if lam % 2 == 0:
                stats.even_lambda += 1
            else:
                seen.add(key)
                out.append({
                    "seed": seed,
                    "word": key,
                    "lambda": lam,
                    "pd": pd_export(word).to_json(),
                    "pd_doubled": pd_export(double(word)).to_json(),
                })
                if progress_every and len(out) % progress_every == 0:
                    log.info("harness: %d/%d kept after %d draws", len(out), target, stats.drawn)
        seed += 1
    log.info(
        "harness: %d draws, rejection rate %.3f (not a knot %d, duplicate %d, even lambda %d)",
        stats.drawn, stats.rejection_rate(), stats.not_knot, stats.duplicate, stats.even_lambda,
    )
    return out
