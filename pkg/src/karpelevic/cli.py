"""Command-line interface.

Verbs: arcs, realize, enumerate, verify, region, augment, probe.

Exact rationals cross the command line as "p/q" strings; decimals are
rejected everywhere except --tol.  Vertices are 1-based on the command
line (matching the DOT output); the Python API underneath is 0-based.
Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from karpelevic.algebra import StochMatrix, rat, rat_str
from karpelevic.boundary import (
    ContinuationError,
    RootFindingError,
    boundary_svg,
    region_boundary,
    trace_csv,
    traces_json_payload,
)
from karpelevic.digraph import WeightedDigraph, to_dot
from karpelevic.farey import ArcParams, ArcType, arc_params, arcs_of_order
from karpelevic.realize import (
    Composition,
    build_sparsest,
    conjecture_probe,
    enumerate_sparsest,
    type0,
    type1,
    type2_base,
    type2_augment,
    verify_realization,
)

__all__ = ["main"]


def _parse_composition(text: str, bound: int) -> Composition:
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValueError(f"composition must be comma-separated integers, got {text!r}")
    return Composition(parts, bound)


def _arc_from_flags(args) -> ArcParams:
    tag = ArcType(args.type)
    if tag is ArcType.TYPE_0:
        return arc_params(tag, n=args.n)
    if tag is ArcType.TYPE_I:
        if args.n is None or args.q is None:
            raise ValueError("Type I needs --n and --q")
        return arc_params(tag, n=args.n, q=args.q)
    if tag is ArcType.TYPE_II:
        if args.q is None or args.d is None or args.z is None:
            raise ValueError("Type II needs --q, --d and --z")
        return arc_params(tag, q=args.q, d=args.d, z=args.z)
    if args.q is None or args.d is None or args.y is None:
        raise ValueError("Type III needs --q, --d and --y")
    return arc_params(tag, q=args.q, d=args.d, y=args.y)


def _load_matrix(spec: str) -> StochMatrix:
    if spec == "-":
        return StochMatrix.from_json(json.load(sys.stdin))
    return StochMatrix.from_json(json.loads(Path(spec).read_text()))


def _emit_matrix(m: StochMatrix, emit: str) -> None:
    if emit in ("json", "both"):
        print(json.dumps(m.to_json()))
    if emit in ("dot", "both"):
        print(to_dot(WeightedDigraph.from_matrix(m)), end="")


def _arc_label(arc: ArcParams) -> str:
    ends = [(Fraction(arc.p, arc.q), f"{arc.p}/{arc.q}"), (Fraction(arc.r, arc.s), f"{arc.r}/{arc.s}")]
    ends.sort(key=lambda e: e[0])
    return f"{ends[0][1]}-{ends[1][1]}"


# -- verbs ---------------------------------------------------------------


def cmd_arcs(args) -> int:
    arcs = arcs_of_order(args.n)
    if args.json:
        print(json.dumps([a.to_json() for a in arcs]))
        return 0
    for arc in arcs:
        extra = ""
        if arc.z is not None:
            extra = f" z={arc.z}"
        if arc.y is not None:
            extra = f" y={arc.y}"
        print(
            f"{_arc_label(arc)}  Type{arc.type_tag.value}  q={arc.q} s={arc.s} "
            f"d={arc.d}{extra} deg={arc.reduced_degree}"
        )
    return 0


def cmd_realize(args) -> int:
    tag = ArcType(args.type)
    alpha = rat(args.alpha)
    if tag is ArcType.TYPE_0:
        if args.n is None:
            raise ValueError("Type 0 needs --n")
        matrix = type0(args.n, alpha)
    elif tag is ArcType.TYPE_I:
        if args.n is None or args.q is None:
            raise ValueError("Type I needs --n and --q")
        if args.alphas:
            weights = [rat(x) for x in args.alphas.split(",")]
            product = Fraction(1)
            for w in weights:
                product *= w
            if product != alpha:
                raise ValueError(
                    f"--alphas multiply to {rat_str(product)}, not --alpha {rat_str(alpha)}"
                )
        else:
            weights = [alpha] + [Fraction(1)] * (args.n - args.q)
        matrix = type1(args.n, args.q, weights)
    else:
        arc = _arc_from_flags(args)
        if args.composition is None:
            raise ValueError(f"Type {tag.value} needs --composition")
        comp = _parse_composition(args.composition, arc.q)
        matrix = build_sparsest(arc, alpha, comp)
    _emit_matrix(matrix, args.emit)
    return 0


def cmd_enumerate(args) -> int:
    arc = _arc_from_flags(args)
    comps = enumerate_sparsest(arc)
    if args.alpha is not None:
        alpha = rat(args.alpha)
        payload = [
            {"composition": list(c.parts), "matrix": build_sparsest(arc, alpha, c).to_json()}
            for c in comps
        ]
        print(json.dumps(payload))
        return 0
    if args.json:
        print(json.dumps([list(c.parts) for c in comps]))
        return 0
    print(f"{len(comps)} sparsest class(es) for {_arc_label(arc)} Type{arc.type_tag.value}:")
    for c in comps:
        print(f"  {c}")
    return 0


def cmd_verify(args) -> int:
    matrix = _load_matrix(args.matrix)
    arc = ArcParams.from_json(json.loads(args.arc))
    result = verify_realization(matrix, arc, rat(args.alpha))
    status = "OK" if result else "FAIL"
    print(f"{status} ({result.describe()})")
    return 0 if result else 1


def cmd_region(args) -> int:
    traces = region_boundary(args.n, args.samples)
    if args.svg:
        Path(args.svg).write_text(boundary_svg(traces))
    if args.csv_dir:
        directory = Path(args.csv_dir)
        directory.mkdir(parents=True, exist_ok=True)
        for i, trace in enumerate(traces):
            (directory / f"arc_{i:03d}.csv").write_text(trace_csv(trace))
    if args.json:
        print(json.dumps({"n": args.n, "arcs": traces_json_payload(traces)}))
    else:
        worst = max(t.residual_bound for t in traces)
        print(
            f"traced {len(traces)} arcs of the order-{args.n} boundary "
            f"({args.samples} samples each, residual bound {worst:.2e})"
        )
        if args.svg:
            print(f"svg written to {args.svg}")
    return 0


def cmd_augment(args) -> int:
    if args.q is None or args.d is None or args.z is None or args.composition is None:
        raise ValueError("augment needs --q, --d, --z and --composition")
    comp = _parse_composition(args.composition, args.q)
    real = type2_base(args.q, args.d, args.z, comp)
    for spec in args.add or []:
        try:
            src, dst = (int(x) for x in spec.split(","))
        except ValueError:
            raise ValueError(f"--add expects 'src,dst' (1-based), got {spec!r}")
        real = type2_augment(real, (src - 1, dst - 1))
    params = {}
    for assignment in args.param or []:
        if "=" not in assignment:
            raise ValueError(f"--param expects name=p/q, got {assignment!r}")
        name, value = assignment.split("=", 1)
        params[name] = rat(value)
    free = real.free_parameters()
    if args.alpha is None:
        print(f"connectors: {[tuple((a + 1, b + 1) for a, b in c) for c in real.connectors]}")
        print(f"free parameters: {free}")
        return 0
    matrix = real.instantiate(rat(args.alpha), params)
    _emit_matrix(matrix, args.emit)
    return 0


def cmd_probe(args) -> int:
    matrix = _load_matrix(args.matrix)
    arc = ArcParams.from_json(json.loads(args.arc))
    report = conjecture_probe(matrix, arc, rat(args.alpha))
    print(f"{report.outcome}: {report.detail}")
    if report.spec is not None:
        blocks = [sorted(v + 1 for v in block) for block in report.spec.blocks]
        weights = {v + 1: rat_str(w) for v, w in sorted(report.spec.weights.items())}
        print(f"blocks (1-based): {blocks}")
        print(f"step weights: {weights}")
    return 0


# -- parser --------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="karpelevic",
        description="Boundary arcs of the Karpelevic region and their stochastic realizations.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_arcs = sub.add_parser("arcs", help="classify the boundary arcs of one order")
    p_arcs.add_argument("n", type=int)
    p_arcs.add_argument("--json", action="store_true")
    p_arcs.set_defaults(func=cmd_arcs)

    def add_type_flags(p, with_alpha: bool):
        p.add_argument("type", choices=["0", "I", "II", "III"])
        p.add_argument("--n", type=int)
        p.add_argument("--q", type=int)
        p.add_argument("--d", type=int)
        p.add_argument("--z", type=int)
        p.add_argument("--y", type=int)
        if with_alpha:
            p.add_argument("--alpha", required=True, help='exact rational "p/q"')

    p_realize = sub.add_parser("realize", help="construct a realization matrix")
    add_type_flags(p_realize, with_alpha=True)
    p_realize.add_argument("--composition", help="comma-separated parts (Type II/III)")
    p_realize.add_argument("--alphas", help="comma-separated weights (Type I)")
    p_realize.add_argument("--emit", choices=["json", "dot", "both"], default="json")
    p_realize.set_defaults(func=cmd_realize)

    p_enum = sub.add_parser("enumerate", help="list sparsest realization classes")
    p_enum.add_argument("--type", required=True, choices=["0", "I", "II", "III"])
    p_enum.add_argument("--n", type=int)
    p_enum.add_argument("--q", type=int)
    p_enum.add_argument("--d", type=int)
    p_enum.add_argument("--z", type=int)
    p_enum.add_argument("--y", type=int)
    p_enum.add_argument("--alpha", help="also emit the matrices at this parameter")
    p_enum.add_argument("--json", action="store_true")
    p_enum.set_defaults(func=cmd_enumerate)

    p_verify = sub.add_parser("verify", help="verify a matrix against an arc polynomial")
    p_verify.add_argument("--matrix", required=True, help="matrix JSON path, or - for stdin")
    p_verify.add_argument("--arc", required=True, help="arc parameters as JSON")
    p_verify.add_argument("--alpha", required=True)
    p_verify.set_defaults(func=cmd_verify)

    p_region = sub.add_parser("region", help="trace the full boundary of one order")
    p_region.add_argument("n", type=int)
    p_region.add_argument("--samples", type=int, default=512)
    p_region.add_argument("--svg", help="write an SVG figure to this path")
    p_region.add_argument("--csv-dir", help="write per-arc CSV traces into this directory")
    p_region.add_argument("--json", action="store_true")
    p_region.set_defaults(func=cmd_region)

    p_aug = sub.add_parser("augment", help="add connector edges to a Type II digraph")
    p_aug.add_argument("--q", type=int, required=True)
    p_aug.add_argument("--d", type=int, required=True)
    p_aug.add_argument("--z", type=int, required=True)
    p_aug.add_argument("--composition", required=True)
    p_aug.add_argument("--add", action="append", help="connector 'src,dst' (1-based); repeatable")
    p_aug.add_argument("--alpha", help="instantiate at this parameter")
    p_aug.add_argument("--param", action="append", help="free weight, e.g. alpha_2=9/10")
    p_aug.add_argument("--emit", choices=["json", "dot", "both"], default="json")
    p_aug.set_defaults(func=cmd_augment)

    p_probe = sub.add_parser("probe", help="search a Type III realization for family form")
    p_probe.add_argument("--matrix", required=True)
    p_probe.add_argument("--arc", required=True)
    p_probe.add_argument("--alpha", required=True)
    p_probe.set_defaults(func=cmd_probe)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, ContinuationError, RootFindingError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
