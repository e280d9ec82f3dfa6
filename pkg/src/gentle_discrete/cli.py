"""Command-line front end.

Every command prints (or writes) a JSON report validated against the shipped
schema.  Exit codes: 0 success, 1 usage error, 2 structured refusal (band
obstruction or exceeded budget).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path

import jsonschema

from . import CONVENTIONS, __version__
from .algebra import (AlgebraError, GentlePresentation, build_lambda, from_json, kronecker, linear_a,
                      validate_gentle)
from .complexes import cohomology_profile, direct_sum, loads, profile_key
from .discreteness import (FiberQuery, Refusal, abelian_fiber, c_fiber, cone_census, h_fiber,
                           hom_bound_scan, uniqueness_check)
from .endo import DEFAULT_BUDGET, BudgetExceeded
from .exactla import Field
from .homcat import decompose
from .strings import HomotopyString, StringError, enumerate_homotopy_strings

THREADS_ENV = "GENTLE_DISCRETE_THREADS"

# commands that make sense for a bound quiver that fails the gentleness checks
NON_GENTLE_COMMANDS = ("decompose",)


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    algebra: GentlePresentation
    field: Field
    output: Path | None = None
    threads: int = 1
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    dot: bool = False
    extra: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.threads < 1 or self.budget < 1:
            raise UsageError("threads and budget must be positive")


def parse_algebra(text: str) -> GentlePresentation:
    """``lambda:r,n,m``, ``A<n>``, ``kronecker``, inline JSON or a JSON file path."""
    t = text.strip()
    low = t.lower()
    try:
        if low.startswith("lambda:"):
            r, n, m = (int(x) for x in low[7:].split(","))
            return build_lambda(r, n, m)
        if low == "kronecker":
            return kronecker()
        if low[:1] == "a" and low[1:].isdigit():
            return linear_a(int(low[1:]))
        if t.startswith("{"):
            return from_json(json.loads(t))
        if Path(t).is_file():
            return from_json(json.loads(Path(t).read_text()))
    except (AlgebraError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad algebra {text!r}: {exc}") from None
    raise UsageError(f"unrecognized algebra {text!r}")


def algebra_from_args(args) -> GentlePresentation:
    """``--family`` with ``--r/--n/--m`` takes precedence over ``--algebra``."""
    if args.family is None:
        return parse_algebra(args.algebra or "lambda:1,2,1")
    fam = args.family.lower()
    spec: dict = {"family": fam}
    needed = {"lambda": ("r", "n", "m"), "a": ("n",), "kronecker": ()}.get(fam)
    if needed is None:
        raise UsageError(f"unknown family {args.family!r}")
    for k in needed:
        if getattr(args, k) is None:
            raise UsageError(f"--family {fam} needs --{k}")
        spec[k] = getattr(args, k)
    try:
        return from_json(spec)
    except (AlgebraError, ValueError) as exc:
        raise UsageError(f"bad algebra: {exc}") from None


def parse_string_label(alg: GentlePresentation, text: str) -> HomotopyString:
    """``letters@degree``, e.g. ``a,cb~@-1`` or ``e(0)@0``."""
    body, _, deg = text.rpartition("@")
    if not body:
        body, deg = text, "0"
    try:
        return HomotopyString.parse(alg, body, int(deg))
    except (StringError, AlgebraError, ValueError) as exc:
        raise UsageError(f"bad string {text!r}: {exc}") from None


def _json_obj(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON {text!r}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("expected a JSON object")
    return data


def _vec(v) -> list:
    return [int(x) for x in v]


def _profile_json(C) -> dict:
    return {str(d): list(v) for d, v in profile_key(cohomology_profile(C))}


# -- commands ----------------------------------------------------------------------

def cmd_enumerate_strings(cfg: RunConfig, args) -> tuple[dict, object]:
    strings = enumerate_homotopy_strings(cfg.algebra, args.max_letters)
    items = []
    for h in strings:
        entry = {"string": str(h), "first_degree": h.shift, "letters": h.num_letters,
                 "cohomology": _profile_json(h.realize(cfg.field))}
        if cfg.dot:
            entry["dot"] = h.to_dot()
        items.append(entry)
    return {"count": len(items), "strings": items}, args.max_letters


def cmd_hom_scan(cfg: RunConfig, args) -> tuple[dict, object]:
    r = hom_bound_scan(cfg.algebra, args.max_letters, cfg.field)
    wit = None
    if r.witness_strings is not None:
        wit = [f"{s}@{d}" for s, d in r.witness_strings]
    return {"max_dim": r.max_dim, "witness": wit, "pairs": r.pairs, "computed": r.computed}, args.max_letters


def cmd_cone_census(cfg: RunConfig, args) -> tuple[dict, object]:
    A = parse_string_label(cfg.algebra, args.source).realize(cfg.field)
    B = parse_string_label(cfg.algebra, args.target).realize(cfg.field)
    r = cone_census(A, B, cfg.field, cfg.budget, args.samples, cfg.seed, args.mode)
    classes = [{"summands": c.labels, "maps": c.count, "nonzero_maps": c.nonzero_count,
                "example": list(c.example)} for c in r.classes]
    return {"hom_dim": r.hom_dim, "maps_checked": r.maps_checked, "exhaustive": r.exhaustive,
            "mode": r.mode, "classes": classes,
            "nonzero_classes": len(r.nonzero_classes())}, cfg.budget


def _fiber_json(res) -> dict:
    out = []
    for m in res.members:
        entry = {"label": m.label, "terms": {str(d): [str(v) for v in vs] for d, vs in m.complex.terms.items()},
                 "cohomology": _profile_json(m.complex)}
        out.append(entry)
    return {"count": len(out), "method": res.method, "members": out}


def _run_queries(cfg: RunConfig, fn, queries: list) -> list:
    if cfg.threads == 1 or len(queries) <= 1:
        return [fn(q) for q in queries]
    with ThreadPoolExecutor(cfg.threads) as pool:
        return list(pool.map(fn, queries))


def cmd_h_fiber(cfg: RunConfig, args) -> tuple[dict, object]:
    queries = [FiberQuery(cfg.algebra, "heart", _json_obj(p), cfg.field, args.letter_bound)
               for p in args.profile]
    results = _run_queries(cfg, h_fiber, queries)
    return {"fibers": [dict(profile=p, **_fiber_json(r)) for p, r in zip(args.profile, results)]}, \
        [r.bound for r in results]


def cmd_c_fiber(cfg: RunConfig, args) -> tuple[dict, object]:
    queries = []
    for p in args.profile:
        prof = {int(d): [cfg.algebra.parse_vertex(str(v)) for v in vs] for d, vs in _json_obj(p).items()}
        queries.append(FiberQuery(cfg.algebra, "coheart", prof, cfg.field))
    results = _run_queries(cfg, c_fiber, queries)
    return {"fibers": [dict(profile=p, **_fiber_json(r)) for p, r in zip(args.profile, results)]}, \
        [r.bound for r in results]


def cmd_abelian_fiber(cfg: RunConfig, args) -> tuple[dict, object]:
    c = [int(x) for x in args.dimvec.split(",")]
    if len(c) != len(cfg.algebra.vertices):
        raise UsageError(f"dimension vector needs {len(cfg.algebra.vertices)} entries")
    members = abelian_fiber(cfg.algebra, c, cfg.field, cfg.budget)
    return {"count": len(members), "members": [m.label for m in members]}, sum(c)


def cmd_uniqueness(cfg: RunConfig, args) -> tuple[dict, object]:
    r = uniqueness_check(cfg.algebra, args.max_letters, cfg.field)
    return {"ok": r.ok, "checked": r.checked, "collisions": [list(c) for c in r.collisions]}, args.max_letters


def cmd_table(cfg: RunConfig, args) -> tuple[dict, object]:
    from .zoo import table_cells
    cells = table_cells(quick=not args.full)
    if args.markdown:
        lines = ["| row | column | expected | computed | evidence |", "|---|---|---|---|---|"]
        lines += [f"| {c.row} | {c.column} | {c.expected} | {c.computed} | {c.evidence} |" for c in cells]
        sys.stderr.write("\n".join(lines) + "\n")
    return {"cells": [c.to_json() for c in cells]}, "full" if args.full else "quick"


def cmd_decompose(cfg: RunConfig, args) -> tuple[dict, object]:
    if args.complex:
        C = loads(Path(args.complex).read_text(), cfg.algebra)
        if C.field != cfg.field:
            C = C.with_field(cfg.field)
    elif args.string:
        C = direct_sum(*[parse_string_label(cfg.algebra, s).realize(cfg.field) for s in args.string])
    else:
        raise UsageError("decompose needs --complex or --string")
    rep = decompose(C, cfg.budget, identify=validate_gentle(cfg.algebra).ok)
    out = rep.to_json()
    out["recomposes"] = rep.recompose_identity()
    return out, cfg.budget


COMMANDS = {
    "enumerate-strings": cmd_enumerate_strings,
    "hom-scan": cmd_hom_scan,
    "cone-census": cmd_cone_census,
    "h-fiber": cmd_h_fiber,
    "c-fiber": cmd_c_fiber,
    "abelian-fiber": cmd_abelian_fiber,
    "uniqueness": cmd_uniqueness,
    "table": cmd_table,
    "decompose": cmd_decompose,
}


# -- reports -----------------------------------------------------------------------

def load_schema() -> dict:
    return json.loads(resources.files("gentle_discrete").joinpath("schemas/report.schema.json").read_text())


def determinism_hash(report: dict) -> str:
    body = {k: v for k, v in report.items() if k not in ("timing", "determinism_hash")}
    return hashlib.sha256(json.dumps(body, sort_keys=True, default=str).encode()).hexdigest()


def make_report(command: str, query: dict, bound, result, seconds: float, status: str = "ok") -> dict:
    rep = {"tool": "gentle-discrete", "version": __version__, "conventions": CONVENTIONS,
           "command": command, "query": query, "bound": bound, "status": status,
           "result": result, "timing": {"seconds": round(seconds, 6)}}
    rep["determinism_hash"] = determinism_hash(rep)
    jsonschema.validate(rep, load_schema())
    return rep


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gentle-discrete", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", help="lambda:r,n,m | A<n> | kronecker | inline JSON | JSON file "
                                          "(default lambda:1,2,1)")
    common.add_argument("--family", help="lambda | A | kronecker (with --r, --n, --m)")
    common.add_argument("--r", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--field", default="F2", help="F<p> or Q")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, default=int(os.environ.get(THREADS_ENV, "1")))
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--dot", action="store_true", help="include DOT diagrams of strings")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate-strings", parents=[common])
    p.add_argument("--max-letters", type=int, default=4)
    p = sub.add_parser("hom-scan", parents=[common])
    p.add_argument("--max-letters", type=int, default=4)
    p = sub.add_parser("cone-census", parents=[common])
    p.add_argument("--source", required=True, help="string label, e.g. e(0)@0")
    p.add_argument("--target", required=True)
    p.add_argument("--mode", choices=("chain", "homotopy"), default="chain")
    p.add_argument("--samples", type=int, default=64, help="sampled maps over Q")
    p = sub.add_parser("h-fiber", parents=[common])
    p.add_argument("--profile", action="append", required=True,
                   help='JSON degree -> dimension vector, e.g. {"0": [1,0,0]}; repeatable')
    p.add_argument("--letter-bound", type=int)
    p = sub.add_parser("c-fiber", parents=[common])
    p.add_argument("--profile", action="append", required=True,
                   help='JSON degree -> list of vertices, e.g. {"-1": [0], "0": [-1]}; repeatable')
    p = sub.add_parser("abelian-fiber", parents=[common])
    p.add_argument("--dimvec", required=True, help="comma separated, vertex order of the algebra")
    p = sub.add_parser("uniqueness", parents=[common])
    p.add_argument("--max-letters", type=int, default=6)
    p = sub.add_parser("table", parents=[common])
    p.add_argument("--full", action="store_true", help="use the larger letter bounds")
    p.add_argument("--markdown", action="store_true", help="also print a markdown table to stderr")
    p = sub.add_parser("decompose", parents=[common])
    p.add_argument("--complex", help="complex JSON file")
    p.add_argument("--string", action="append", help="string label; repeat for a direct sum")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    query = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()
             if k not in ("out", "threads")}
    t0 = time.perf_counter()
    try:
        alg = algebra_from_args(args)
        query["algebra"] = alg.name or args.algebra
        check = validate_gentle(alg)
        if not check.ok and args.command not in NON_GENTLE_COMMANDS:
            raise UsageError(f"algebra is not gentle ({check.violations[0]}); "
                             f"available commands: {', '.join(NON_GENTLE_COMMANDS)}")
        cfg = RunConfig(alg, Field.parse(args.field), args.out,
                        args.threads, args.seed, args.budget, args.dot)
        result, bound = COMMANDS[args.command](cfg, args)
        status, code = "ok", 0
    except (UsageError, AlgebraError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Refusal as exc:
        result, bound = {"reason": exc.reason, "detail": exc.detail}, None
        status, code = "refused", 2
    except BudgetExceeded as exc:
        result, bound = {"reason": "budget exceeded", "detail": str(exc)}, args.budget
        status, code = "refused", 2
    rep = make_report(args.command, query, bound, result, time.perf_counter() - t0, status)
    text = json.dumps(rep, indent=2, default=str)
    if args.out:
        args.out.write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
