"""Command-line front end: ``lpa <command> <graph-file> [options]``.

Exit codes: 0 success, 2 unreadable or malformed input, 3 input outside the
supported scope (size limits, oracle scope, omega bundles with --row-finite),
4 bad arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .decision import decide, decide_row_finite
from .errors import GraphError, LimitExceeded, LPAError, ParseError, UnsupportedGraphError
from .graph import find_cycles, format_graph, has_exit, read_graph, to_dot
from .lattice import breaking_vertices, enumerate_hsat
from .oracle import FiniteLPA, verify_direct_sum
from .quotient import decompose, quotient_graph
from .recognize import is_connected, is_directly_connected, recognize

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_UNSUPPORTED = 3
EXIT_USAGE = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _names(text: str | None) -> list[str]:
    if not text:
        return []
    return [t.strip() for t in text.split(",") if t.strip()]


def _emit(data, out) -> None:
    out.write(json.dumps(data, sort_keys=True, indent=2) + "\n")


def _analyze(g, args, out):
    kinds = {v: g.vertex_kind(v).value for v in g.vertices}
    cycles = find_cycles(g)
    hsat = enumerate_hsat(g)
    _emit({
        "vertices": list(g.vertices),
        "kinds": kinds,
        "connected": is_connected(g),
        "directly_connected": is_directly_connected(g),
        "cycles": [{"vertices": list(c), "has_exit": has_exit(g, c)} for c in cycles],
        "hereditary_saturated": [list(h) for h in hsat],
        "breaking_vertices": {",".join(h): list(breaking_vertices(g, h)) for h in hsat},
    }, out)
    if args.dot:
        Path(args.dot).write_text(to_dot(g))


def _decide(g, args, out):
    verdict = decide_row_finite(g) if args.row_finite else decide(g)
    _emit(verdict.to_json(), out)


def _decompose(g, args, out):
    tree = decompose(g)
    _emit(tree.to_json(), out)
    if args.emit_dir:
        target = Path(args.emit_dir)
        target.mkdir(parents=True, exist_ok=True)
        for k, leaf in enumerate(tree.leaves(), start=1):
            (target / f"component_{k}.graph").write_text(format_graph(leaf))
    if args.dot:
        parts = [to_dot(leaf, f"component_{k}") for k, leaf in enumerate(tree.leaves(), start=1)]
        Path(args.dot).write_text("".join(parts))


def _quotient(g, args, out):
    out.write(format_graph(quotient_graph(g, _names(args.h), _names(args.s))))


def _recognize(g, args, out):
    leaves = decompose(g).leaves()
    _emit({"components": [
        {"graph": format_graph(leaf), "algebra": recognize(leaf).to_json(), "name": str(recognize(leaf))}
        for leaf in leaves
    ]}, out)


def _oracle(g, args, out):
    algebra = FiniteLPA(g)
    if args.verify_pair is not None:
        if args.verify_pair.count(":") != 1:
            raise UsageError("--verify-pair expects X:Y, e.g. a,b:c")
        left, right = args.verify_pair.split(":")
        X, Y = _names(left), _names(right)
        for v in X + Y:
            if v not in g:
                raise UsageError(f"unknown vertex {v!r}")
        _emit(verify_direct_sum(g, X, Y, algebra).to_json(), out)
    else:
        _emit({"dimension": algebra.dimension}, out)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lpa", description="Decomposability of Leavitt path algebras of finite graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="vertex kinds, cycles and hereditary saturated sets")
    p.add_argument("graph")
    p.add_argument("--dot", metavar="PATH", help="also write the graph in DOT format")
    p.set_defaults(func=_analyze)

    p = sub.add_parser("decide", help="decomposable or not, with a witness pair")
    p.add_argument("graph")
    p.add_argument("--row-finite", action="store_true",
                   help="use the reachability/acyclicity test (graphs without omega bundles only)")
    p.set_defaults(func=_decide)

    p = sub.add_parser("decompose", help="split into indecomposable pieces")
    p.add_argument("graph")
    p.add_argument("--emit-dir", metavar="DIR", help="write each piece as component_<k>.graph")
    p.add_argument("--dot", metavar="PATH", help="write the pieces in DOT format")
    p.set_defaults(func=_decompose)

    p = sub.add_parser("quotient", help="quotient graph by an admissible pair (H, S)")
    p.add_argument("graph")
    p.add_argument("--h", required=True, metavar="V,...")
    p.add_argument("--s", default="", metavar="V,...")
    p.set_defaults(func=_quotient)

    p = sub.add_parser("recognize", help="name the algebra of every piece")
    p.add_argument("graph")
    p.set_defaults(func=_recognize)

    p = sub.add_parser("oracle", help="exact computations for finite acyclic graphs")
    p.add_argument("graph")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--dimension", action="store_true")
    mode.add_argument("--verify-pair", metavar="X:Y")
    p.set_defaults(func=_oracle)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        err.write(f"lpa: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        g = read_graph(args.graph)
        args.func(g, args, out)
    except ParseError as exc:
        err.write(f"lpa: {args.graph}: {exc}\n")
        return EXIT_PARSE
    except (LimitExceeded, UnsupportedGraphError) as exc:
        err.write(f"lpa: {exc}\n")
        return EXIT_UNSUPPORTED
    except (UsageError, GraphError, LPAError) as exc:
        err.write(f"lpa: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        err.write(f"lpa: {exc}\n")
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
