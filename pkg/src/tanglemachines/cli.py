"""Command-line interface: ``tangle <command> FILE ...``.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 parse error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import dsl, rewrite
from .capacity import capacity
from .config import default_budget
from .factorization import common_refinement, complexity_bounds, prime_factorization, prime_factorizations
from .invariants import (
    colour_linking, distinguish, fingerprint, linking, nonunit_count, total_linking_number,
)
from .machine import validate

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from exc


def _load(path: str):
    return dsl.parse(_read(path))


def _dump(obj, args, out):
    out.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def _fmt_matrix(rows) -> str:
    return "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in rows) + "]"


# commands ----------------------------------------------------------------------

def cmd_validate(args, out) -> int:
    m = _load(args.file)
    rep = validate(m)
    if args.json:
        _dump({"ok": rep.ok, "violations": rep.violations, "warnings": rep.warnings}, args, out)
    else:
        out.write("valid\n" if rep.ok else "invalid\n")
        for v in rep.violations:
            out.write(f"  violation: {v}\n")
        for w in rep.warnings:
            out.write(f"  warning: {w}\n")
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_invariants(args, out) -> int:
    m = _load(args.file)
    rep = validate(m)
    if not rep.ok:
        out.write("invalid machine: " + "; ".join(rep.violations) + "\n")
        return EXIT_INVALID
    fp = fingerprint(m, kmax=args.kmax)
    lg_f, lg_u = linking(m, True), linking(m, False)
    data = fp.to_dict()
    data["linking_vectors"] = {r: list(lg_f.vectors[r]) for r in m.registers}
    data["linking_vectors_unframed"] = {r: list(lg_u.vectors[r]) for r in m.registers}
    data["total_linking"] = {r: total_linking_number(m, r) for r in m.registers}
    data["colour_linking"] = {r: list(v) for r, v in colour_linking(m, True).items()}
    if args.json:
        _dump(data, args, out)
        return EXIT_OK
    w = out.write
    w(f"reduced graph (open, closed): {tuple(fp.reduced_graph)}\n")
    w(f"process lengths: {list(fp.process_lengths)}\n")
    w(f"boundary colours (canonical): {list(fp.boundary_colours)}\n")
    w(f"syntactic nonunit interactions: {fp.nonunit_syntactic}\n")
    w(f"framed linking matrix: {_fmt_matrix(fp.linking_matrix_framed)}\n")
    w(f"unframed linking matrix: {_fmt_matrix(fp.linking_matrix_unframed)}\n")
    w("register  framed-vector  unframed-vector  total  colour-linking\n")
    for r in m.registers:
        w(f"{r:<9} {str(lg_f.vectors[r]):<14} {str(lg_u.vectors[r]):<16} {data['total_linking'][r]:<6} "
          f"{data['colour_linking'][r]}\n")
    w(f"colouring counts: {dict(fp.colouring_counts)}\n")
    if fp.capacity is not None:
        c = fp.capacity
        w(f"capacity: Cap_k = {list(c.values)}, lower bound {c.lower_bound:.6f}"
          + (" (truncated)" if c.truncated else "") + "\n")
    return EXIT_OK


def cmd_move(args, out) -> int:
    m = _load(args.file)
    move = rewrite.parse_move(args.kind, args.site, args.params or "")
    m2 = rewrite.apply(m, move)
    out.write(dsl.serialize(m2))
    return EXIT_OK


def cmd_sites(args, out) -> int:
    m = _load(args.file)
    kinds = args.kinds or list(rewrite.default_kinds(m))
    result = {k: [str(mv) for mv in rewrite.enumerate_sites(m, k)] for k in kinds}
    if args.json:
        _dump(result, args, out)
    else:
        for k, moves in result.items():
            out.write(f"{k}: {len(moves)}\n")
            for mv in moves[: args.limit]:
                out.write(f"  {mv}\n")
    return EXIT_OK


def cmd_walk(args, out) -> int:
    m = _load(args.file)
    walk = rewrite.random_walk(m, args.steps, seed=args.seed, allowed_kinds=args.kinds,
                               scope=args.scope, allow_false=args.allow_false, check=True)
    text = dsl.serialize(walk.machine)
    trace = {"seed": args.seed, "steps": len(walk.trace), "truncated": walk.truncated,
             "scope": args.scope, "moves": rewrite.trace_to_list(walk.trace)}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(trace, indent=2) + "\n")
    if walk.truncated:
        sys.stderr.write(f"no applicable move after {len(walk.trace)} steps\n")
    return EXIT_OK


def cmd_replay(args, out) -> int:
    m = _load(args.file)
    data = json.loads(_read(args.trace))
    moves = rewrite.trace_from_list(data["moves"] if isinstance(data, dict) else data)
    out.write(dsl.serialize(rewrite.replay(m, moves)))
    return EXIT_OK


def cmd_probe(args, out) -> int:
    m1, m2 = _load(args.file1), _load(args.file2)
    framed = True if args.framed else None
    verdict = distinguish(m1, m2, depth=args.depth, framed=framed)
    if args.json:
        _dump({"distinguished": verdict.distinguished, "invariant": verdict.invariant,
               "detail": verdict.detail}, args, out)
    else:
        out.write(("distinguished" if verdict.distinguished else "indistinguishable")
                  + (f" by {verdict.invariant}: {verdict.detail}" if verdict.distinguished else
                     " by the invariant suite") + "\n")
    return EXIT_OK


def cmd_factorize(args, out) -> int:
    m = _load(args.file)
    rep = validate(m)
    if not rep.ok:
        out.write("invalid machine: " + "; ".join(rep.violations) + "\n")
        return EXIT_INVALID
    best = prime_factorization(m, args.depth)
    allf = prime_factorizations(m, args.depth)
    here = sorted({f.blocks for f in allf if f.machine == best.machine and f.nonunit_blocks == best.nonunit_blocks})
    meet = common_refinement(*here[:1], *here[1:2]) if len(here) > 1 else None
    lo, hi = complexity_bounds(m, args.depth)
    syn, mini = nonunit_count(m, args.depth)
    data = best.to_dict()
    data.update({
        "depth": args.depth,
        "complexity_bounds": [lo, hi],
        "nonunit": {"syntactic": syn, "minimized": mini},
        "prime_factorizations": [[list(b) for b in part] for part in here],
    })
    if meet is not None:
        for part in here[2:]:
            meet = common_refinement(meet, part)
        data["common_refinement"] = [list(b) for b in meet]
    if args.json:
        _dump(data, args, out)
        return EXIT_OK
    w = out.write
    w(f"{best.nonunit_blocks} non-unit blocks (no further split found at depth {args.depth})\n")
    for i, blk in enumerate(data["blocks"], 1):
        w(f"block {i}{' (unit)' if blk['unit'] else ''}:\n")
        for desc in blk["interactions"]:
            w(f"  {desc}\n")
    w(f"complexity bounds: [{lo}, {hi}]\n")
    if len(here) > 1:
        w(f"prime factorizations at this presentation: {data['prime_factorizations']}\n")
        w(f"common refinement: {data['common_refinement']}\n")
    if best.trace:
        w("certificate: " + " ; ".join(str(mv) for mv in best.trace) + "\n")
    else:
        w("certificate: input presentation\n")
    return EXIT_OK


def cmd_capacity(args, out) -> int:
    m = _load(args.file)
    res = capacity(m, args.kmax, default_budget().capacity_vertices)
    if args.json:
        _dump(res.to_dict(), args, out)
    else:
        out.write(f"colours: {list(res.colours)}\nconfusable pairs: {[list(e) for e in res.edges]}\n")
        for k, v in enumerate(res.values, 1):
            out.write(f"Cap_{k} = {v}\n")
        out.write(f"lower bound on Cap: {res.lower_bound:.6f}" + (" (truncated by budget)" if res.truncated else "")
                  + "\n")
    return EXIT_OK


def cmd_canonicalize(args, out) -> int:
    m = _load(args.file)
    out.write(dsl.to_json(m) + "\n" if args.json else dsl.serialize(m))
    return EXIT_OK


# parser ------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tangle", description="Tangle machine toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    sp = add("validate", cmd_validate, "check the colouring law")
    sp.add_argument("file")
    sp = add("invariants", cmd_invariants, "print the invariant report")
    sp.add_argument("file")
    sp.add_argument("--kmax", type=int, default=3)
    sp = add("move", cmd_move, "apply one move and print the result")
    sp.add_argument("file")
    sp.add_argument("--kind", required=True, choices=rewrite.ALL_KINDS)
    sp.add_argument("--site", required=True, help="comma-separated site, e.g. m or v,target")
    sp.add_argument("--params", default="", help="comma-separated parameters, e.g. y,1")
    sp = add("sites", cmd_sites, "list applicable moves")
    sp.add_argument("file")
    sp.add_argument("--kinds", nargs="*", choices=rewrite.ALL_KINDS)
    sp.add_argument("--limit", type=int, default=20)
    sp = add("walk", cmd_walk, "seeded random equivalence walk")
    sp.add_argument("file")
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--kinds", nargs="*", choices=rewrite.ALL_KINDS)
    sp.add_argument("--scope", choices=("global", "component"), default="global")
    sp.add_argument("--allow-false", action="store_true", help="permit FalseJoin/FalseResolve")
    sp.add_argument("--out", help="write the walked machine here instead of stdout")
    sp.add_argument("--trace", help="write the move trace (JSON) here")
    sp = add("replay", cmd_replay, "apply a saved trace")
    sp.add_argument("file")
    sp.add_argument("trace")
    sp = add("probe", cmd_probe, "try to tell two machines apart")
    sp.add_argument("file1")
    sp.add_argument("file2")
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--framed", action="store_true", help="compare as rack machines (framed linking)")
    sp = add("factorize", cmd_factorize, "bounded prime factorization")
    sp.add_argument("file")
    sp.add_argument("--depth", type=int, default=0)
    sp = add("capacity", cmd_capacity, "zero-error capacity bounds")
    sp.add_argument("file")
    sp.add_argument("--kmax", type=int, default=3)
    sp = add("canonicalize", cmd_canonicalize, "print the canonical serialization")
    sp.add_argument("file")
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    want_json = "--json" in argv
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, out)
    except _Usage as exc:
        return _fail(out, want_json, EXIT_USAGE, {"error": "UsageError", "message": str(exc)})
    except dsl.TmdError as exc:
        return _fail(out, want_json, EXIT_PARSE, exc.to_dict())
    except (rewrite.RewriteError, ValueError) as exc:
        return _fail(out, want_json, EXIT_USAGE, {"error": type(exc).__name__, "message": str(exc)})


def _fail(out, want_json, code, obj) -> int:
    if want_json:
        out.write(json.dumps(obj) + "\n")
    else:
        pos = f"{obj['line']}:{obj['col']}: " if "line" in obj else ""
        sys.stderr.write(f"error: {pos}{obj['message']}\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
