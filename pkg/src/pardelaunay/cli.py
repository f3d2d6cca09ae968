"""Command-line interface.

Exit codes: 0 success, 1 usage or invalid parameters, 2 unreadable or
malformed input, 3 points not in general position, 4 a verification failed.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import io as pio
from .analysis import DisconnectedGraphError, bound_candidates, bound_h, spanning_ratio
from .construction import GeneralPositionError, build_graph, grid_voronoi_oracle
from .geometry import DegenerateInputError, ShapeSpec
from .lemmas import LemmaReport, verify_graph
from .lowerbound import GenerationError, WorstCaseParams, generate_worst_case
from .sampling import oracle_diagnostics, random_points
from .svg import render_svg

EXIT_USAGE, EXIT_INPUT, EXIT_GENERAL_POSITION, EXIT_VERIFY = 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _shape(args, required: bool = True) -> ShapeSpec | None:
    if args.aspect is None or args.angle is None:
        if required:
            raise UsageError("--aspect and --angle are required")
        return None
    return ShapeSpec(args.aspect, args.angle)


def _load_graph(args):
    """A graph from graph JSON, or built from points plus the shape flags."""
    text = _read(args.input)
    if pio.looks_like_graph(text):
        graph = pio.parse_graph(text)
        flag_shape = _shape(args, required=False)
        if flag_shape is not None and (flag_shape.aspect, flag_shape.angle) != (graph.shape.aspect, graph.shape.angle):
            raise UsageError("shape flags disagree with the shape stored in the graph")
        return graph
    pts = pio.parse_points(text, getattr(args, "format", None))
    return build_graph(pts, _shape(args))


def cmd_bound(args) -> int:
    shape = _shape(args)
    h = bound_h(shape)
    out = pio._fmt(h) + "\n"
    out += pio.dumps({"bound": h, "candidates": bound_candidates(shape).to_dict()}) + "\n"
    _write(args.output, out)
    return 0


def cmd_build(args) -> int:
    shape = _shape(args)
    pts = pio.parse_points(_read(args.input), args.format)
    graph = build_graph(pts, shape)
    _write(args.output, pio.dumps(pio.graph_to_dict(graph)) + "\n")
    return 0


def cmd_ratio(args) -> int:
    graph = _load_graph(args)
    rep = spanning_ratio(graph)
    d = rep.to_dict(graph.shape)
    if args.summary:
        d.pop("per_pair")
    _write(args.output, pio.dumps(d) + "\n")
    return 0


def cmd_worst_case(args) -> int:
    shape = _shape(args)
    params = WorstCaseParams(shape, n=args.n, alpha=args.alpha, beta=args.beta,
                             epsilon=args.epsilon, seed=args.seed)
    pts = generate_worst_case(params)
    _write(args.output, pio.format_points(pts, args.format or "json"))
    return 0


def _instances(args, n_min: int, **kw):
    shape = _shape(args)
    for idx in range(args.instances):
        rng = np.random.default_rng([args.seed, idx])
        n = int(rng.integers(n_min, args.n_max + 1))
        yield f"seed{args.seed}-{idx}", random_points(rng, n, shape, **kw)


def cmd_verify_lemmas(args) -> int:
    if args.input is not None:
        graph = _load_graph(args)
        reports = [verify_graph(graph, args.input)]
    else:
        shape = _shape(args)
        reports = [verify_graph(build_graph(pts, shape), name)
                   for name, pts in _instances(args, min(5, args.n_max))]
    lines, bad, checked = [], 0, 0
    for rep in reports:
        rows = rep.rows if args.include_skipped else rep.checked
        lines.append(LemmaReport(rep.instance, rows).to_jsonl(pio.dumps))
        bad += len(rep.violations)
        checked += len(rep.checked)
    _write(args.output, "".join(lines))
    print(f"verify-lemmas: {checked} checks, {bad} violations", file=sys.stderr)
    return EXIT_VERIFY if bad else 0


def cmd_oracle_check(args) -> int:
    shape = _shape(args)
    if args.input is not None:
        cases = [(args.input, pio.parse_points(_read(args.input), args.format))]
    else:
        cases = list(_instances(args, min(3, args.n_max), min_sep_cells=args.min_sep_cells,
                                resolution=args.resolution))
    agree, mismatches = 0, []
    for name, pts in cases:
        graph = build_graph(pts, shape)
        oracle = grid_voronoi_oracle(pts, shape, args.resolution)
        if oracle.edges == graph.edge_set():
            agree += 1
        else:
            diag = oracle_diagnostics(graph, oracle)
            mismatches.append({"instance": name, "skipped_cells": oracle.skipped, "diagnostics": diag})
    pct = 100.0 * agree / len(cases)
    explained = all(d["feature_cells"] < 3.0 for m in mismatches for d in m["diagnostics"])
    out = {"instances": len(cases), "agree": agree, "agreement_pct": pct,
           "all_mismatches_explained": explained, "mismatches": mismatches}
    _write(args.output, pio.dumps(out) + "\n")
    print(f"oracle-check: {agree}/{len(cases)} instances agree ({pct:.1f}%), "
          f"{len(mismatches)} mismatches, explained: {explained}", file=sys.stderr)
    return 0 if pct >= args.min_agreement and explained else EXIT_VERIFY


def cmd_export_svg(args) -> int:
    graph = _load_graph(args)
    n = graph.n_original
    if args.pair is not None and not all(0 <= p < n for p in args.pair):
        raise UsageError(f"--pair indices must lie in [0, {n})")
    ratio = spanning_ratio(graph).max_ratio if n >= 2 else None
    svg = render_svg(graph, tuple(args.pair) if args.pair else None, args.witnesses,
                     ratio, bound_h(graph.shape))
    _write(args.output, svg)
    return 0


def _positive_int(s: str) -> int:
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _finite(s: str) -> float:
    v = float(s)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be finite")
    return v


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pardelaunay", description="Parallelogram Delaunay graphs and their spanning ratio.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_, inp="-", shape=True):
        sp = sub.add_parser(name, help=help_)
        if shape:
            sp.add_argument("--aspect", type=_finite, help="long side over short side, >= 1")
            sp.add_argument("--angle", type=_finite, help="theta0 in radians, in (0, pi/2]")
        if inp is not False:
            sp.add_argument("--input", default=inp, help="input path, '-' for stdin")
        sp.add_argument("--output", default="-", help="output path, '-' for stdout")
        sp.set_defaults(func=func)
        return sp

    add("bound", cmd_bound, "print the worst-case spanning ratio and its candidates", inp=False)

    sp = add("build", cmd_build, "build the graph of a point set")
    sp.add_argument("--format", choices=["json", "csv"], help="input format (sniffed if omitted)")

    sp = add("ratio", cmd_ratio, "measure the exact spanning ratio")
    sp.add_argument("--format", choices=["json", "csv"])
    sp.add_argument("--summary", action="store_true", help="omit the per-pair table")

    sp = add("worst-case", cmd_worst_case, "generate a two-column worst-case family", inp=False)
    sp.add_argument("--n", type=_positive_int, default=200)
    sp.add_argument("--alpha", type=_finite, default=1.0)
    sp.add_argument("--beta", type=_finite, default=None, help="defaults to alpha times the maximiser")
    sp.add_argument("--epsilon", type=_finite, default=None, help="defaults to 1e-6 * alpha")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=["json", "csv"], default="json")

    sp = add("verify-lemmas", cmd_verify_lemmas, "check the lemma inequalities", inp=None)
    sp.add_argument("--format", choices=["json", "csv"])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--instances", type=_positive_int, default=100)
    sp.add_argument("--n-max", type=_positive_int, default=25)
    sp.add_argument("--include-skipped", action="store_true")

    sp = add("oracle-check", cmd_oracle_check, "compare against the raster Voronoi oracle", inp=None)
    sp.add_argument("--format", choices=["json", "csv"])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--instances", type=_positive_int, default=50)
    sp.add_argument("--n-max", type=_positive_int, default=10)
    sp.add_argument("--resolution", type=_positive_int, default=1024)
    sp.add_argument("--min-sep-cells", type=_finite, default=10.0)
    sp.add_argument("--min-agreement", type=_finite, default=99.0)

    sp = add("export-svg", cmd_export_svg, "render the graph as SVG")
    sp.add_argument("--format", choices=["json", "csv"])
    sp.add_argument("--pair", type=int, nargs=2, metavar=("A", "B"), help="draw segment ab")
    sp.add_argument("--witnesses", action="store_true", help="draw witness parallelograms")
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pardelaunay: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (pio.InputFormatError, OSError, UnicodeDecodeError) as exc:
        print(f"pardelaunay: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GeneralPositionError, DegenerateInputError) as exc:
        print(f"pardelaunay: {exc}", file=sys.stderr)
        return EXIT_GENERAL_POSITION
    except (DisconnectedGraphError, GenerationError) as exc:
        print(f"pardelaunay: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ValueError as exc:
        print(f"pardelaunay: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
