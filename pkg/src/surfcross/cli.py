"""Command-line interface.

Exit codes: 0 success, 1 claim failure or infeasible instance, 2 invalid
input, 3 inconclusive (budget or time ran out).
"""
from __future__ import annotations

import argparse
import json
import sys

from .embedder import Unknown, min_genus
from .families import FAMILIES, FamilySpec
from .gadgets import to_simple
from .graph import GraphError, Surface, decode, encode
from .solver import Infeasible, crossing_number, crossing_sequence

OK, FAILED, INVALID, INCONCLUSIVE = 0, 1, 2, 3


class _Invalid(Exception):
    pass


def _read_graph(path: str):
    try:
        with open(path) as fh:
            return decode(fh.read())
    except OSError as exc:
        raise _Invalid(f"cannot read {path}: {exc.strerror}") from exc
    except (GraphError, ValueError, KeyError, TypeError) as exc:
        raise _Invalid(f"{path}: {exc}") from exc


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise _Invalid(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise _Invalid(f"{path}: malformed JSON: {exc}") from exc


def _emit(obj, out=None):
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args):
    try:
        g = FamilySpec(args.family, n=args.n, k=args.k, a=args.a).build()
    except ValueError as exc:
        raise _Invalid(str(exc)) from exc
    text = encode(g)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return OK


def _cmd_genus(args):
    g = _read_graph(args.file)
    res = min_genus(g, orientable=not args.nonorientable, budget=args.budget)
    if isinstance(res, Unknown):
        _emit({"status": "unknown", "reason": res.reason})
        return INCONCLUSIVE
    _emit({"status": "ok", "genus": res.genus, "orientable": not args.nonorientable,
           "certificate": res.certificate.to_dict()})
    return OK


def _cmd_cross(args):
    g = _read_graph(args.file)
    try:
        surface = Surface(not args.nonorientable, args.genus)
    except ValueError as exc:
        raise _Invalid(str(exc)) from exc
    res = crossing_number(g, surface, max_k=args.max_k, threads=args.threads,
                          deterministic=args.deterministic)
    if isinstance(res, Infeasible):
        _emit({"status": "infeasible", "reason": res.reason})
        return FAILED
    if isinstance(res, Unknown):
        _emit({"status": "unknown", "reason": res.reason, "lower_bound": res.bound})
        return INCONCLUSIVE
    cert = res.certificate.to_dict()
    if args.cert:
        _emit(cert, args.cert)
    _emit({"status": "ok", "surface": str(surface), "crossings": res.crossings,
           "evaluated": res.stats.get("evaluated")})
    return OK


def _cmd_sequence(args):
    g = _read_graph(args.file)
    res = crossing_sequence(g, orientable=not args.nonorientable)
    if isinstance(res, Infeasible):
        _emit({"status": "infeasible", "reason": res.reason})
        return FAILED
    if isinstance(res, Unknown):
        _emit({"status": "unknown", "reason": res.reason})
        return INCONCLUSIVE
    _emit({"status": "ok", "orientable": not args.nonorientable, "sequence": res.values})
    return OK


def _cmd_expand(args):
    g = _read_graph(args.file)
    try:
        out = to_simple(g, g_max=args.gmax, bound=args.bound, n=args.override_n)
    except (GraphError, ValueError) as exc:
        raise _Invalid(str(exc)) from exc
    text = encode(out)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return OK


def _cmd_verify(args):
    from .verify import verify_certificate
    cert = _read_json(args.cert)
    verdict = verify_certificate(cert)
    _emit({"accepted": verdict.accepted, "reason": verdict.reason,
           "euler_genus": verdict.euler_genus})
    return OK if verdict else FAILED


def _cmd_render(args):
    from .render import render_certificate
    cert = _read_json(args.cert)
    try:
        render_certificate(cert, args.output)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return FAILED
    return OK


def _cmd_suite(args):
    from .suite import run_paper_suite
    doc = run_paper_suite(args.tier, report=args.report, deterministic=args.deterministic,
                          threads=args.threads, only=args.only)
    for e in doc["claims"]:
        print(f"{e['status']:>22}  {e['id']}: computed {json.dumps(e['computed'])}, "
              f"expected {json.dumps(e['paper'])}")
    for w in doc["warnings"]:
        print(f"warning: {w} is inconclusive", file=sys.stderr)
    return OK if doc["ok"] else FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="surfcross", description="Crossing numbers on surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("gen", help="write a family member as a graph document")
    q.add_argument("family", choices=FAMILIES)
    q.add_argument("--n", type=int)
    q.add_argument("--k", type=int, default=0)
    q.add_argument("--a", type=int)
    q.add_argument("-o", "--output")
    q.set_defaults(func=_cmd_gen)

    q = sub.add_parser("genus", help="minimum genus with a certificate")
    q.add_argument("file")
    q.add_argument("--nonorientable", action="store_true")
    q.add_argument("--budget", type=int, default=None)
    q.set_defaults(func=_cmd_genus)

    q = sub.add_parser("cross", help="crossing number on one surface")
    q.add_argument("file")
    q.add_argument("--genus", type=int, required=True)
    q.add_argument("--nonorientable", action="store_true")
    q.add_argument("--max-k", type=int, default=None)
    q.add_argument("--threads", type=int, default=1)
    q.add_argument("--deterministic", action="store_true")
    q.add_argument("--cert")
    q.set_defaults(func=_cmd_cross)

    q = sub.add_parser("sequence", help="crossing sequence down to the minimum genus")
    q.add_argument("file")
    q.add_argument("--nonorientable", action="store_true")
    q.set_defaults(func=_cmd_sequence)

    q = sub.add_parser("expand", help="replace thick edges and rigid vertices by gadgets")
    q.add_argument("file")
    q.add_argument("--gmax", type=int, required=True)
    q.add_argument("--override-n", type=int, default=None)
    q.add_argument("--bound", type=int, default=None)
    q.add_argument("-o", "--output")
    q.set_defaults(func=_cmd_expand)

    q = sub.add_parser("verify", help="check a drawing certificate")
    q.add_argument("cert")
    q.set_defaults(func=_cmd_verify)

    q = sub.add_parser("render", help="draw a certificate as SVG")
    q.add_argument("cert")
    q.add_argument("-o", "--output", required=True)
    q.set_defaults(func=_cmd_render)

    q = sub.add_parser("paper-suite", help="run the claim matrix")
    q.add_argument("--tier", choices=("quick", "full"), default="quick")
    q.add_argument("--report")
    q.add_argument("--deterministic", action="store_true")
    q.add_argument("--threads", type=int, default=1)
    q.add_argument("--only", nargs="*", help="restrict to these claim ids")
    q.set_defaults(func=_cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INVALID if exc.code else OK
    try:
        return args.func(args)
    except _Invalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
