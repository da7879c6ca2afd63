"""Command-line front end.

    nestflip check INSTANCE
    nestflip realize INSTANCE
    nestflip transform INSTANCE [--method auto|nested|connected] [--oracle]
    nestflip distance INSTANCE [--mode exact|greedy] [--oracle]
    nestflip enumerate INSTANCE [--limit N]

``INSTANCE`` is a path or ``-`` for stdin. Data goes to stdout (records by
default, JSON with ``--format json`` or ``NESTFLIP_FORMAT=json``); errors
go to stderr as a JSON object. Exit codes: 0 success, 1 negative verdict,
2 input error, 3 size cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import errors
from .connected import transform_connected
from .distance import EXACT_CAP, exact_distance, enumerate_members, psi
from .formats import (
    FlipDocument, graph_json, parse_instance, serialize_flips, serialize_graph,
)
from .fragments import build_fragment_tree, check_membership, is_correct_flip
from .multigraph import FlipSequence, delta
from .nested import transform_nested
from .realize import is_realizable, realize

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_TOO_LARGE = 0, 1, 2, 3

_INPUT_ERRORS = (errors.ParseError, errors.NotLaminar, errors.UnknownVertex, errors.EmptySet,
                 errors.InvalidGraph, errors.DegreeMismatch, errors.SizeMismatch)
_NEGATIVE = (errors.NotRealizable, errors.NotMember)


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def record(self, obj: dict, text: str | None = None) -> None:
        if self.fmt == "json":
            self.stream.write(json.dumps(obj) + "\n")
        else:
            if text is None:
                text = "".join(f"{k}: {json.dumps(v)}\n" for k, v in obj.items())
            self.stream.write(text)
        self.stream.flush()

    def separator(self) -> None:
        if self.fmt != "json":
            self.stream.write("---\n")


def _load(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_instance(text)


def _need_graphs(inst, both: bool = True):
    if inst.graph_g is None or (both and inst.graph_h is None):
        raise errors.ParseError("instance needs graph_g" + (" and graph_h" if both else ""))


def cmd_check(args, out: Output) -> int:
    inst = _load(args.instance)
    tree = build_fragment_tree(inst.collection)
    verdict = is_realizable(inst.degrees, tree)
    report = {"realizable": verdict.ok, "reason": verdict.reason}
    ok = verdict.ok
    for key in ("graph_g", "graph_h"):
        g = getattr(inst, key)
        if g is not None:
            member = check_membership(g, inst.degrees, tree)
            report[f"{key}_member"] = member
            ok = ok and member
    out.record(report)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_realize(args, out: Output) -> int:
    inst = _load(args.instance)
    g = realize(inst.degrees, inst.collection)
    out.record(graph_json(g), serialize_graph(g))
    return EXIT_OK


def _verify(flips: FlipSequence, g, h, s, tree) -> bool:
    cur = g
    for f in flips:
        if not is_correct_flip(cur, tree, f):
            return False
        cur = cur.apply(f)
        if not check_membership(cur, s, tree):
            return False
    return cur == h


def cmd_transform(args, out: Output) -> int:
    inst = _load(args.instance)
    _need_graphs(inst)
    tree = build_fragment_tree(inst.collection)
    g, h, s = inst.graph_g, inst.graph_h, inst.degrees
    for graph in (g, h):
        if not check_membership(graph, s, tree):
            raise errors.NotMember("graph is not a member of the constrained family")
    method = args.method
    if method == "auto":
        method = "connected" if not inst.collection.nontrivial() else "nested"
    if method == "connected":
        if inst.collection.nontrivial():
            raise errors.ParseError("connected method ignores fragments; use nested")
        flips = transform_connected(g, h).flips
    else:
        flips = transform_nested(g, h, s, tree)
    d = delta(g, h)
    verified = _verify(flips, g, h, s, tree)
    extra = {"method": method}
    if args.oracle:
        extra["exact"] = exact_distance(g, h, s, tree)
    doc = FlipDocument(flips, d, tree.height, (2 * tree.height + 1) * d, verified, extra)
    if out.fmt == "json":
        out.record({"delta": doc.delta, "height": doc.height, "bound": doc.bound,
                    "length": doc.length, "verified": verified, **extra,
                    "flips": [f.as_list() for f in flips]})
    else:
        out.record({}, serialize_flips(doc))
    if not verified:
        raise errors.PreconditionViolated("flip sequence failed self-verification")
    return EXIT_OK


def cmd_distance(args, out: Output) -> int:
    inst = _load(args.instance)
    _need_graphs(inst)
    tree = build_fragment_tree(inst.collection)
    g, h, s = inst.graph_g, inst.graph_h, inst.degrees
    value, part = psi(g, h, args.mode, cap=args.cap)
    report = {"delta": delta(g, h), "psi": value, "mode": args.mode, "m": part.m,
              "circuits": part.circuits}
    constrained = bool(inst.collection.nontrivial())
    if check_membership(g, s, tree) and check_membership(h, s, tree):
        flips = transform_nested(g, h, s, tree) if constrained else transform_connected(g, h).flips
        report["algorithm_length"] = len(flips)
    if args.oracle:
        report["exact_unconstrained"] = exact_distance(g, h)
        if constrained:
            report["exact_constrained"] = exact_distance(g, h, s, tree)
    out.record(report)
    return EXIT_OK


def cmd_enumerate(args, out: Output) -> int:
    inst = _load(args.instance)
    count = 0
    for g in enumerate_members(inst.degrees, inst.collection):
        if count:
            out.separator()
        out.record(graph_json(g), serialize_graph(g))
        count += 1
        if args.limit is not None and count >= args.limit:
            break
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nestflip", description="Degree-preserving flips under nested connectivity constraints.")
    p.add_argument("--format", choices=("records", "json"),
                   default=os.environ.get("NESTFLIP_FORMAT", "records"))
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("instance", help="instance document, or - for stdin")
        sp.set_defaults(func=func)
        return sp

    add("check", cmd_check, "realizability verdict (and membership of given graphs)")
    add("realize", cmd_realize, "one member of the family")
    sp = add("transform", cmd_transform, "flip sequence from graph_g to graph_h")
    sp.add_argument("--method", choices=("auto", "nested", "connected"), default="auto")
    sp.add_argument("--oracle", action="store_true", help="also report the exact distance (small inputs)")
    sp = add("distance", cmd_distance, "psi, algorithm length and optional exact distance")
    sp.add_argument("--mode", choices=("exact", "greedy"), default="exact")
    sp.add_argument("--cap", type=int, default=EXACT_CAP, help="largest |G Δ H| for exact psi")
    sp.add_argument("--oracle", action="store_true")
    sp = add("enumerate", cmd_enumerate, "stream every member")
    sp.add_argument("--limit", type=int, default=None)
    return p


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit": code}) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(args.format)
    try:
        return args.func(args, out)
    except errors.TooLarge as e:
        return _fail(type(e).__name__, str(e), EXIT_TOO_LARGE)
    except _NEGATIVE as e:
        return _fail(type(e).__name__, str(e), EXIT_NEGATIVE)
    except _INPUT_ERRORS as e:
        return _fail(type(e).__name__, str(e), EXIT_INPUT)
    except BrokenPipeError:  # pragma: no cover
        return EXIT_OK
    except OSError as e:
        return _fail("OSError", str(e), EXIT_INPUT)
    except errors.NestflipError as e:
        return _fail(type(e).__name__, str(e), EXIT_NEGATIVE)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
