"""Pass/fail reports produced by the inequality checkers."""

from __future__ import annotations

import json
import operator
from dataclasses import dataclass, field

_OPS = {">=": operator.ge, "<=": operator.le, "==": operator.eq}


@dataclass(frozen=True)
class CheckRow:
    lhs: int
    rhs: int
    op: str = ">="
    kind: str = ""
    a: int | None = None
    q: int | None = None
    n: int | None = None
    terms: tuple[int, ...] | None = None

    @property
    def ok(self) -> bool:
        return _OPS[self.op](self.lhs, self.rhs)

    def key(self) -> dict:
        return {k: v for k, v in (("a", self.a), ("q", self.q), ("n", self.n)) if v is not None}

    def to_json(self) -> dict:
        out = {"lhs": self.lhs, "rhs": self.rhs, "ok": self.ok, **self.key()}
        if self.kind:
            out["kind"] = self.kind
        if self.op != ">=":
            out["op"] = self.op
        if self.terms is not None:
            out["terms"] = list(self.terms)
        return out

    def describe(self) -> str:
        lhs = "+".join(map(str, self.terms)) if self.terms is not None else str(self.lhs)
        where = " ".join(f"{k}={v}" for k, v in self.key().items())
        head = " ".join(x for x in (self.kind, where) if x)
        status = "ok" if self.ok else "FAIL"
        return f"{head}: {lhs} {self.op} {self.rhs} {status}"


@dataclass
class CheckReport:
    kind: str
    rows: list[CheckRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def first_failure(self) -> dict | None:
        for r in self.rows:
            if not r.ok:
                return r.key()
        return None

    @property
    def checks(self) -> list[CheckRow]:
        return self.rows

    def failures(self) -> list[CheckRow]:
        return [r for r in self.rows if not r.ok]

    def filter(self, kind: str) -> list[CheckRow]:
        return [r for r in self.rows if r.kind == kind]

    def to_json(self) -> dict:
        out = {"passed": self.passed, "kind": self.kind, "rows": [r.to_json() for r in self.rows]}
        ff = self.first_failure
        if ff is not None:
            out["first_failure"] = ff
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def render(self, verbose: bool = True) -> str:
        lines = [f"[{'PASS' if self.passed else 'FAIL'}] {self.kind} ({len(self.rows)} rows)"]
        rows = self.rows if verbose else self.failures()
        lines += ["  " + r.describe() for r in rows]
        return "\n".join(lines)

    def __bool__(self):
        return self.passed
