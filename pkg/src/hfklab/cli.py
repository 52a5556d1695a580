"""Command line for HFK rank tables, periodic-knot inequality checks and F2 bicomplexes.

Exit status: 0 when every check passed, 1 when a check failed, 2 for bad
input (unparsable files, even linking numbers, ...), 3 for internal errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd
from pathlib import Path
from typing import Callable

from . import bicomplex as bx
from .datafiles import data_dir, load_knots
from .errors import HfklabError, InputError
from .hfk import HfkTable, lspace_hfk, read_table
from .laurent import LaurentPoly, parse_poly, torus_alexander
from .periodic import (
    PeriodicPair,
    check_filtered_rank,
    check_total_rank,
    check_alternating_alexander,
    check_lspace_alexander,
    max_grading_check,
)
from .report import CheckReport, CheckRow
from .tangle import HarnessStats, harness

log = logging.getLogger("hfklab")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


@dataclass
class Config:
    max_pq: int = 60
    seed: int = 0
    window: int | None = None
    fmt: str = "human"
    out: str | None = None
    jobs: int = 1
    count: int = 500

    def __post_init__(self):
        if self.max_pq < 3:
            raise InputError("--max-pq must be at least 3")
        if self.window is not None and self.window < 2:
            raise InputError("--window must be at least 2")
        if self.fmt not in ("human", "json", "csv"):
            raise InputError(f"unknown format {self.fmt!r}")


class _Output:
    """Writes to --out or stdout."""

    def __init__(self, path):
        self.path = path
        self.buf = io.StringIO()

    def write(self, text: str):
        self.buf.write(text)
        if not text.endswith("\n"):
            self.buf.write("\n")

    def close(self):
        if self.path:
            Path(self.path).write_text(self.buf.getvalue())
        else:
            sys.stdout.write(self.buf.getvalue())
            sys.stdout.flush()


def _csv(rows: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


_ROW_FIELDS = ["report", "kind", "a", "q", "n", "lhs", "op", "rhs", "ok"]


def emit_reports(reports: list[CheckReport], cfg: Config, out: _Output) -> None:
    if cfg.fmt == "json":
        payload = reports[0].to_json() if len(reports) == 1 else {
            "passed": all(r.passed for r in reports),
            "reports": [r.to_json() for r in reports],
        }
        out.write(json.dumps(payload, sort_keys=True))
    elif cfg.fmt == "csv":
        rows = []
        for rep in reports:
            for r in rep.rows:
                rows.append({"report": rep.kind, "op": r.op, **r.to_json()})
        out.write(_csv(rows, _ROW_FIELDS))
    else:
        out.write("\n".join(r.render() for r in reports))


# -- torus sweep ---------------------------------------------------------------

def sweep_pairs(max_pq: int) -> list[tuple[int, int]]:
    """Pairs 2 <= p, q < max_pq with gcd(p, q) = 1 and q odd."""
    return [
        (p, q)
        for p in range(2, max_pq)
        for q in range(3, max_pq, 2)
        if gcd(p, q) == 1
    ]


def sweep_one(p: int, q: int, hook: Callable | None = None) -> dict:
    dq = torus_alexander(p, q)
    dt = torus_alexander(2 * p, q)
    down = lspace_hfk(dq, label=f"T({p},{q})")
    up = lspace_hfk(dt, label=f"T({2 * p},{q})")
    if hook is not None:
        up, down = hook(p, q, up, down)
    pair = PeriodicPair(up, down, q)
    reports = {
        "filtered_rank": check_filtered_rank(pair, rows="critical"),
        "total_rank": check_total_rank(pair),
        "max_grading": max_grading_check(p, q),
        "lspace_alexander": check_lspace_alexander(dq, dt, q),
    }
    row = {"p": p, "q": q, "lambda": q, "passed": all(r.passed for r in reports.values())}
    for name, rep in reports.items():
        row[name] = rep.passed
        if not rep.passed:
            row[f"{name}_first_failure"] = rep.first_failure
    row["rows"] = sum(len(r.rows) for r in reports.values())
    return row


def _sweep_star(args):
    return sweep_one(*args)


def cmd_torus_sweep(cfg: Config, hook: Callable | None = None, out: _Output | None = None) -> int:
    """Check every admissible torus pair; ``hook(p, q, up, down)`` may replace the tables."""
    own = out is None
    out = out or _Output(cfg.out)
    pairs = sweep_pairs(cfg.max_pq)
    log.info("sweep: %d pairs below %d", len(pairs), cfg.max_pq)
    if cfg.jobs > 1 and hook is None:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            rows = list(pool.map(_sweep_star, pairs, chunksize=8))
    else:
        rows = []
        for k, (p, q) in enumerate(pairs):
            rows.append(sweep_one(p, q, hook))
            if (k + 1) % 200 == 0:
                log.info("sweep: %d/%d pairs", k + 1, len(pairs))
    passed = all(r["passed"] for r in rows)
    if cfg.fmt == "json":
        for r in rows:
            out.write(json.dumps(r, sort_keys=True))
    elif cfg.fmt == "csv":
        out.write(_csv(rows, ["p", "q", "lambda", "filtered_rank", "total_rank", "max_grading", "lspace_alexander", "rows", "passed"]))
    else:
        for r in rows:
            status = "PASS" if r["passed"] else "FAIL"
            out.write(f"T({2 * r['p']},{r['q']}) over T({r['p']},{r['q']}) lambda={r['q']}: {status}")
        failed = sum(not r["passed"] for r in rows)
        out.write(f"{len(rows)} pairs, {failed} failed")
    if own:
        out.close()
    return EXIT_OK if passed else EXIT_FAIL


# -- table and polynomial checks --------------------------------------------------

def _table_arg(spec: str) -> HfkTable:
    path = Path(spec)
    if not path.exists():
        for suffix in ("", ".json", ".csv"):
            cand = data_dir() / f"{spec}{suffix}"
            if cand.is_file():
                path = cand
                break
        else:
            raise InputError(f"no such table file or bundled table: {spec}")
    return read_table(path)


def cmd_check(tilde: str, quotient: str, lam: int, mode: str, cfg: Config, rows: str = "all") -> int:
    pair = PeriodicPair(_table_arg(tilde), _table_arg(quotient), lam)
    if mode == "rank":
        report = check_total_rank(pair)
    elif mode == "filtered":
        report = check_filtered_rank(pair, rows=rows)
    else:
        raise InputError(f"unknown mode {mode!r}")
    out = _Output(cfg.out)
    emit_reports([report], cfg, out)
    out.close()
    return EXIT_OK if report.passed else EXIT_FAIL


def _poly_arg(spec: str) -> tuple[LaurentPoly, int | None]:
    """A bundled knot name, a file holding a polynomial, or polynomial text."""
    knots = load_knots()
    if spec in knots:
        k = knots[spec]
        return parse_poly(k["alexander"]), k.get("signature")
    path = Path(spec)
    if path.is_file():
        text = path.read_text().strip()
        if text.startswith("["):
            return LaurentPoly.from_json(text), None
        return parse_poly(text), None
    return parse_poly(spec), None


def cmd_alex_check(tilde: str, quotient: str, lam: int, mode: str, cfg: Config,
                   sigma_tilde: int | None = None, sigma_q: int | None = None) -> int:
    dt, st = _poly_arg(tilde)
    dq, sq = _poly_arg(quotient)
    if mode == "alternating":
        st = sigma_tilde if sigma_tilde is not None else st
        sq = sigma_q if sigma_q is not None else sq
        if st is None or sq is None:
            raise InputError("alternating mode needs both signatures (--sigma-tilde, --sigma-q)")
        report = check_alternating_alexander(dq, sq, dt, st, lam)
    elif mode == "lspace":
        report = check_lspace_alexander(dq, dt, lam)
    else:
        raise InputError(f"unknown mode {mode!r}")
    out = _Output(cfg.out)
    emit_reports([report], cfg, out)
    out.close()
    return EXIT_OK if report.passed else EXIT_FAIL


# -- generation and ingestion -------------------------------------------------------

def cmd_gen(cfg: Config, n_ops: int = 18, strands: int = 5) -> int:
    stats = HarnessStats()
    records = harness(cfg.seed, cfg.count, n_ops=n_ops, strands=strands, stats=stats)
    out = _Output(cfg.out)
    for rec in records:
        out.write(json.dumps(rec, sort_keys=True))
    out.close()
    log.info("gen: kept %d of %d draws", len(records), stats.drawn)
    return EXIT_OK


def cmd_ingest(paths: list[str], cfg: Config) -> list[HfkTable]:
    tables = [read_table(p) for p in paths]
    out = _Output(cfg.out)
    for path, t in zip(paths, tables):
        if cfg.fmt == "json":
            out.write(json.dumps(t.to_json(), sort_keys=True))
        elif cfg.fmt == "csv":
            out.write(t.to_csv())
        else:
            out.write(f"{path}: {len(t)} bigradings, total rank {t.total_rank()}")
    out.close()
    return tables


# -- bicomplex ---------------------------------------------------------------------

def _json_arg(spec: str):
    path = Path(spec)
    if not path.exists():
        for suffix in ("", ".json"):
            cand = data_dir() / f"{spec}{suffix}"
            if cand.is_file():
                path = cand
                break
        else:
            raise InputError(f"no such file or bundled model: {spec}")
    return bx.io.load_json(path)


def _is_equivariant(obj) -> bool:
    return isinstance(obj, dict) and "tau" in obj


def _as_bicomplex(obj, window: int | None):
    if _is_equivariant(obj):
        E = bx.equivariant_from_json(obj)
        E.validate()
        return bx.tate_bicomplex(E, window or bx.default_window(E))
    return bx.bicomplex_from_json(obj)


def _bool_report(kind: str, ok: bool, detail: str | None = None) -> CheckReport:
    rep = CheckReport(kind)
    rep.rows.append(CheckRow(int(ok), 1, op="==", kind=detail or kind))
    return rep


def cmd_bicomplex(sub: str, path: str, cfg: Config, per_grading: bool = False) -> int:
    obj = _json_arg(path)
    out = _Output(cfg.out)
    status = EXIT_OK
    if sub in ("smith", "floyd", "open-top"):
        if not _is_equivariant(obj):
            raise InputError(f"'{sub}' needs an equivariant complex (with 'tau')")
        E = bx.equivariant_from_json(obj)
        if sub == "smith":
            reports = [bx.check_smith(E)]
        elif sub == "floyd":
            reports = [bx.check_floyd(E)]
        else:
            reports = [_bool_report("open-top", bx.check_open_top_staircases(E, cfg.window), "open-top-length")]
        emit_reports(reports, cfg, out)
        if sub == "floyd" and per_grading:
            rows = bx.per_grading_ranks(E)
            if cfg.fmt == "json":
                out.write(json.dumps({"per_grading": [
                    {"i": i, "x": x, "fixed": f, "ok": x >= f} for i, x, f in rows
                ]}, sort_keys=True))
            else:
                out.write("per-grading comparison (diagnostic, not a check):")
                for i, x, f in rows:
                    out.write(f"  i={i}: {x} {'>=' if x >= f else '<'} {f}")
        status = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    elif sub in ("decompose", "verify", "staircase-ends"):
        B = _as_bicomplex(obj, cfg.window)
        verdict = bx.validate(B)
        if not verdict:
            raise InputError(f"not a bicomplex: {verdict.message}")
        D = bx.decompose(B)
        if sub == "decompose":
            payload = bx.decomposition_to_json(D)
            if cfg.fmt == "json":
                out.write(json.dumps(payload, sort_keys=True))
            else:
                out.write(f"{len(D.squares)} squares, {len(D.staircases)} staircases")
                for (top, bottom, length), n in sorted(bx.classify_staircases(D).items()):
                    out.write(f"  open_top={top} open_bottom={bottom} length={length}: {n}")
        elif sub == "verify":
            v = bx.verify_decomposition(B, D)
            emit_reports([_bool_report("verify", bool(v), v.message or "certificate")], cfg, out)
            status = EXIT_OK if v else EXIT_FAIL
        else:
            ok = bx.check_no_vertical_then_horizontal(D)
            emit_reports([_bool_report("staircase-ends", ok, "no-vertical-then-horizontal")], cfg, out)
            status = EXIT_OK if ok else EXIT_FAIL
    else:
        raise InputError(f"unknown bicomplex subcommand {sub!r}")
    out.close()
    return status


# -- argument parsing ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=["human", "json", "csv"], default="human")
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")

    parser = argparse.ArgumentParser(prog="hfklab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("torus-sweep", parents=[common], help="check T(2p,q) over T(p,q) for all small pairs")
    p.add_argument("--max-pq", type=int, default=60)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("check", parents=[common], help="rank inequalities between two HFK tables")
    p.add_argument("tilde", help="table of the periodic knot (file or bundled name)")
    p.add_argument("quotient", help="table of the quotient knot (file or bundled name)")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--mode", choices=["rank", "filtered"], default="rank")
    p.add_argument("--rows", choices=["all", "critical"], default="all")

    p = sub.add_parser("alex-check", parents=[common], help="Alexander-polynomial consequences")
    p.add_argument("tilde", help="polynomial, file, or bundled knot name")
    p.add_argument("quotient", help="polynomial, file, or bundled knot name")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--mode", choices=["alternating", "lspace"], default="alternating")
    p.add_argument("--sigma-tilde", type=int)
    p.add_argument("--sigma-q", type=int)

    p = sub.add_parser("gen", parents=[common], help="random 2-periodic tangle words as JSON lines")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--n-ops", type=int, default=18)
    p.add_argument("--strands", type=int, default=5)

    p = sub.add_parser("ingest", parents=[common], help="validate HFK table files")
    p.add_argument("files", nargs="+")

    p = sub.add_parser("bicomplex", parents=[common], help="bicomplex and involution tools")
    p.add_argument("action", choices=["decompose", "verify", "smith", "floyd", "open-top", "staircase-ends"])
    p.add_argument("file", help="JSON file or bundled model name (e.g. s2_reflection)")
    p.add_argument("--window", type=int)
    p.add_argument("--per-grading", action="store_true", help="with floyd: print the per-grading comparison")
    return parser


def _config(args) -> Config:
    return Config(
        max_pq=getattr(args, "max_pq", 60),
        seed=getattr(args, "seed", 0),
        window=getattr(args, "window", None),
        fmt=args.fmt,
        out=args.out,
        jobs=getattr(args, "jobs", 1),
        count=getattr(args, "count", 500),
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = _config(args)
        if args.command == "torus-sweep":
            return cmd_torus_sweep(cfg)
        if args.command == "check":
            return cmd_check(args.tilde, args.quotient, args.lam, args.mode, cfg, rows=args.rows)
        if args.command == "alex-check":
            return cmd_alex_check(args.tilde, args.quotient, args.lam, args.mode, cfg,
                                  args.sigma_tilde, args.sigma_q)
        if args.command == "gen":
            if cfg.count < 1:
                raise InputError("--count must be at least 1")
            return cmd_gen(cfg, n_ops=args.n_ops, strands=args.strands)
        if args.command == "ingest":
            cmd_ingest(args.files, cfg)
            return EXIT_OK
        if args.command == "bicomplex":
            return cmd_bicomplex(args.action, args.file, cfg, per_grading=args.per_grading)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except HfklabError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # anything unexpected is a bug
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    parser.error(f"unhandled command {args.command}")
    return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
