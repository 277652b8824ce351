"""Command-line entry point.

Exit status is 0 when every check passes, 1 when a verification finds a
mismatch and 2 on bad input (with an error object on stdout).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import io
from .errors import TropCurveError
from .expression import eval_expr, generators, parse_expr, print_expr
from .extended import fmt, to_value
from .functions import cf, compare, evaluate
from .graph import canonical_model
from .morphism import (check_midpoint_identity, module_witness, pullback,
                       validate_morphism)
from .synthesis import (extension_range, decompose_into_cf, example_identities,
                        express_function_full, express_point_cf, express_subgraph_cf,
                        extension_step, ls_value)
from .trees import tree_generators, tree_pairing

EXIT_PASS, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _emit(obj, out):
    if isinstance(obj, str):
        out.write(obj + "\n")
    else:
        out.write(io.dumps(obj) + "\n")


def _digest(paths) -> str:
    h = hashlib.sha256()
    for p in paths:
        if p and os.path.isfile(p):
            h.update(Path(p).read_bytes())
        elif p:
            h.update(str(p).encode())
    return h.hexdigest()[:16]


def _report(task, inputs, checks) -> dict:
    """Aggregate ``(name, Comparison)`` pairs into one verification report."""
    details = []
    for name, cmp in checks:
        d = {"identity": name, "equal": cmp.equal, "breakpoints_checked": cmp.breakpoints_checked}
        if not cmp.equal:
            d["mismatch"] = str(cmp.mismatch)
            d["lhs"] = fmt(cmp.lhs_value)
            d["rhs"] = fmt(cmp.rhs_value)
        details.append(d)
    equal = all(d["equal"] for d in details)
    return {"task": task, "inputs_digest": _digest(inputs),
            "verdict": "pass" if equal else "fail", "equal": equal,
            "breakpoints_checked": sum(d["breakpoints_checked"] for d in details),
            "details": details}


# loading -----------------------------------------------------------------------------

def _graph(path):
    if path is None:
        raise InputError("--graph is required")
    return io.curve_from_json(io.load_json(path))


def _point(curve, text):
    if text is None:
        raise InputError("--point is required")
    if os.path.isfile(text):
        return io.point_from_json(curve, io.load_json(text))
    return io.parse_point(curve, text)


def _subgraph(curve, path):
    if path is None:
        raise InputError("--subgraph is required")
    return io.subgraph_from_json(curve, io.load_json(path))


def _l(text):
    if text is None:
        raise InputError("--l is required")
    return to_value(text)


def _function(curve, path):
    if path is None:
        raise InputError("--function is required")
    return io.function_from_json(curve, io.load_json(path))


def _morphism(args):
    src = _graph(args.source)
    tgt = _graph(args.target)
    if args.morphism is None:
        raise InputError("--morphism is required")
    return io.morphism_from_json(src, tgt, io.load_json(args.morphism))


# commands ------------------------------------------------------------------------------

def cmd_validate(args, out):
    c = _graph(args.graph)
    _emit({"valid": True, "vertices": len(c.vertices), "edges": len(c.edges),
           "genus": c.genus, "metric": c.is_metric}, out)
    return EXIT_PASS


def cmd_canon(args, out):
    cm = canonical_model(_graph(args.graph))
    _emit(io.curve_to_json(cm.curve), out)
    return EXIT_PASS


def cmd_dist(args, out):
    c = _graph(args.graph)
    q = _point(c, args.q)
    if args.subgraph:
        d = c.dist_subgraph(_subgraph(c, args.subgraph), q)
    else:
        d = c.dist(_point(c, args.p), q)
    _emit(json.dumps(fmt(d)), out)
    return EXIT_PASS
    return EXIT_PASS


def cmd_eval(args, out):
    c = _graph(args.graph)
    if args.expr is not None:
        f = eval_expr(parse_expr(_text(args.expr)), generators(c))
    else:
        f = _function(c, args.function)
    if args.point is None:
        _emit(io.function_to_json(f), out)
    else:
        _emit(json.dumps(fmt(evaluate(f, _point(c, args.point)))), out)
    return EXIT_PASS


def _text(arg: str) -> str:
    return Path(arg).read_text() if os.path.isfile(arg) else arg


def cmd_cf(args, out):
    c = _graph(args.graph)
    s = _subgraph(c, args.subgraph) if args.subgraph else c.point_subgraph(_point(c, args.point))
    _emit(io.function_to_json(cf(c, s, _l(args.l))), out)
    return EXIT_PASS


def cmd_ls(args, out):
    c = _graph(args.graph)
    _emit(json.dumps(fmt(extension_range(c, _subgraph(c, args.subgraph)))), out)
    return EXIT_PASS


def cmd_gens(args, out):
    g = generators(_graph(args.graph))
    if args.count:
        _emit(str(g.counted_size()), out)
    else:
        _emit({"symbols": g.symbols(), "counted_size": g.counted_size(),
               "bound": g.bound_size()}, out)
    return EXIT_PASS


def _finish_expr(args, out, c, expr, target, task):
    _emit(print_expr(expr, annotate=args.annotate), out)
    if not args.verify:
        return EXIT_PASS
    cmp = compare(eval_expr(expr, generators(c)), target)
    rep = _report(task, [args.graph], [("round trip", cmp)])
    _emit(rep, out)
    return EXIT_PASS if rep["equal"] else EXIT_MISMATCH


def cmd_express_point(args, out):
    c = _graph(args.graph)
    x = _point(c, args.point)
    l = _l(args.l)
    return _finish_expr(args, out, c, express_point_cf(c, x, l),
                        cf(c, c.point_subgraph(x), l), "express-point")


def cmd_express_subgraph(args, out):
    c = _graph(args.graph)
    s = _subgraph(c, args.subgraph)
    l = _l(args.l)
    return _finish_expr(args, out, c, express_subgraph_cf(c, s, l), cf(c, s, l), "express-subgraph")


def cmd_express_fn(args, out):
    c = _graph(args.graph)
    f = _function(c, args.function)
    return _finish_expr(args, out, c, express_function_full(c, f).expr, f, "express-fn")


def cmd_decompose(args, out):
    c = _graph(args.graph)
    f = _function(c, args.function)
    fac = decompose_into_cf(c, f)
    _emit({"constant": fmt(fac.constant),
           "factors": [{"subgraph": io.subgraph_to_json(s), "l": fmt(l), "exponent": k}
                       for s, l, k in fac.factors]}, out)
    if not args.verify:
        return EXIT_PASS
    rep = _report("decompose", [args.graph, args.function],
                  [("recomposition", compare(fac.recompose(c), f))])
    _emit(rep, out)
    return EXIT_PASS if rep["equal"] else EXIT_MISMATCH


def cmd_verify_identities(args, out):
    c = _graph(args.graph)
    s = _subgraph(c, args.subgraph)
    l = _l(args.l)
    lp = to_value(args.l_prime) if args.l_prime else l / 2
    other = _subgraph(c, args.other) if args.other else None
    checks = [(name, compare(a, b)) for name, a, b in example_identities(c, s, l, lp, other=other)]
    if c.is_metric or generators(c).work.edges:
        step_l = to_value(args.step) if args.step else None
        sc = canonical_model(c).to_canonical_subgraph(s)
        w = generators(c).work
        if step_l is None:
            # the largest step of the form l_S / 2^k whose neighbourhood is proper
            step_l = ls_value(w, sc)
            while w.is_whole(w.neighborhood(sc, step_l)):
                step_l /= 2
        st = extension_step(c, s, step_l)
        checks += [(f"extension: {name}", compare(a, b)) for name, a, b in st.identities]
    rep = _report("verify-identities", [args.graph, args.subgraph], checks)
    _emit(rep, out)
    return EXIT_PASS if rep["equal"] else EXIT_MISMATCH


def cmd_tree_pair(args, out):
    c = _graph(args.graph)
    p = tree_pairing(c)
    fs = tree_generators(c)
    _emit({"pairs": [list(x) for x in p.pairs],
           "paths": {f"{v}-{w}": [e for e, _ in steps] for (v, w), steps in p.paths.items()},
           "leftover": p.leftover, "leftover_edge": p.leftover_edge,
           "functions": [io.function_to_json(f) for f in fs]}, out)
    return EXIT_PASS


def cmd_morphism_check(args, out):
    m = _morphism(args)
    rep = validate_morphism(m)
    res = {"valid": True, "degree": rep.degree, "vertex_degrees": rep.vertex_degrees}
    if args.midpoints:
        checks = {e: check_midpoint_identity(m, e) for e in m.source.edges
                  if not m.source.edges[e].infinite}
        res["midpoint_identity"] = checks
        _emit(res, out)
        return EXIT_PASS if all(checks.values()) else EXIT_MISMATCH
    _emit(res, out)
    return EXIT_PASS


def cmd_pullback(args, out):
    m = _morphism(args)
    validate_morphism(m)
    _emit(io.function_to_json(pullback(m, _function(m.target, args.function))), out)
    return EXIT_PASS


def cmd_witness(args, out):
    m = _morphism(args)
    validate_morphism(m)
    cands = [io.function_from_json(m.source, io.load_json(p)) for p in args.candidate or []]
    w = module_witness(m, cands, _point(m.target, args.point))
    ok = w.function(w.x1) == w.a and w.function(w.x2) == w.b and w.b not in w.forbidden
    _emit({"a": fmt(w.a), "b": fmt(w.b), "x1": str(w.x1), "x2": str(w.x2),
           "forbidden": [fmt(x) for x in w.forbidden], "verified": ok,
           "function": io.function_to_json(w.function)}, out)
    return EXIT_PASS if ok else EXIT_MISMATCH


COMMANDS = {
    "validate": cmd_validate, "canon": cmd_canon, "dist": cmd_dist, "eval": cmd_eval,
    "cf": cmd_cf, "ls": cmd_ls, "gens": cmd_gens, "express-point": cmd_express_point,
    "express-subgraph": cmd_express_subgraph, "express-fn": cmd_express_fn,
    "decompose": cmd_decompose, "verify-identities": cmd_verify_identities,
    "tree-pair": cmd_tree_pair, "morphism-check": cmd_morphism_check,
    "pullback": cmd_pullback, "witness": cmd_witness,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tropcurve", description=__doc__.splitlines()[0])
    ap.add_argument("--suite", metavar="DIR", help="run every *.json task file in DIR")
    sub = ap.add_subparsers(dest="command")

    def add(name, *flags, help=None):
        p = sub.add_parser(name, help=help)
        for f in flags:
            if f in ("--verify", "--count", "--annotate", "--midpoints"):
                p.add_argument(f, action="store_true")
            elif f == "--candidate":
                p.add_argument(f, action="append")
            else:
                p.add_argument(f)
        return p

    add("validate", "--graph", help="check a graph file")
    add("canon", "--graph", help="print the canonical model")
    add("dist", "--graph", "--p", "--q", "--subgraph", help="distance between points or to a subgraph")
    add("eval", "--graph", "--function", "--expr", "--point", help="evaluate a function or expression")
    add("cf", "--graph", "--subgraph", "--point", "--l", help="chip-firing move as function JSON")
    add("ls", "--graph", "--subgraph", help="safe extension radius of a connected subgraph")
    add("gens", "--graph", "--count", help="the generating set")
    add("express-point", "--graph", "--point", "--l", "--verify", "--annotate")
    add("express-subgraph", "--graph", "--subgraph", "--l", "--verify", "--annotate")
    add("express-fn", "--graph", "--function", "--verify", "--annotate")
    add("decompose", "--graph", "--function", "--verify")
    add("verify-identities", "--graph", "--subgraph", "--l", "--l-prime", "--other", "--step")
    add("tree-pair", "--graph")
    add("morphism-check", "--source", "--target", "--morphism", "--midpoints")
    add("pullback", "--source", "--target", "--morphism", "--function")
    add("witness", "--source", "--target", "--morphism", "--point", "--candidate")
    return ap


def run(argv, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.suite:
        return run_suite(Path(args.suite), out)
    if not args.command:
        ap.print_help(out)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args, out)
    except (TropCurveError, InputError, OSError, ValueError, KeyError,
            ZeroDivisionError, json.JSONDecodeError) as exc:
        _emit(io.error_json(exc), out)
        return EXIT_INPUT


def run_suite(folder: Path, out) -> int:
    """Each task file holds ``{"argv": [...]}``; paths are relative to the folder."""
    import io as _io
    results = []
    cwd = os.getcwd()
    try:
        os.chdir(folder)
        for path in sorted(Path(".").glob("*.json")):
            task = io.load_json(path)
            if not isinstance(task, dict) or "argv" not in task:
                continue
            buf = _io.StringIO()
            code = run(task["argv"], buf)
            want = task.get("expect_exit", 0)
            results.append({"task": path.stem, "exit": code,
                            "verdict": "pass" if code == want else "fail"})
    finally:
        os.chdir(cwd)
    results.sort(key=lambda r: r["task"])
    ok = all(r["verdict"] == "pass" for r in results)
    _emit({"verdict": "pass" if ok else "fail", "tasks": results}, out)
    return EXIT_PASS if ok else EXIT_MISMATCH


def main(argv: Optional[list] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
