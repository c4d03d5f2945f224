"""Command line front end: solve, check, classify, gen, bench."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

from ..core import SteinerError, validate_solution
from ..dispatch import DEFAULT_LIMITS, ROUTE_NAMES, Limits, Unsupported, classify, solve
from ..subgraph import S114, TWO_K13, TWO_K13_P3, TWO_P4_P3, Path as PathPattern
from .generate import (
    CyclePathUnion,
    Fan,
    GenSpec,
    HSubgraphFree,
    Planted2DS2,
    PlantedCover,
    TreeDepth3,
    generate,
)
from .sfp import parse_certificate, parse_instance, write_certificate, write_instance

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE, EXIT_UNSUPPORTED = 0, 1, 2, 3

PATTERNS = {
    "p9": PathPattern(9),
    "s114": S114,
    "2k13": TWO_K13,
    "2k13+p3": TWO_K13_P3,
    "2p4+p3": TWO_P4_P3,
}


def _kind(args):
    if args.kind == "planted-cover":
        return PlantedCover(args.k)
    if args.kind == "planted-2ds2":
        return Planted2DS2()
    if args.kind == "fan":
        return Fan()
    if args.kind == "cycle-path":
        return CyclePathUnion()
    if args.kind == "h-free":
        return HSubgraphFree(PATTERNS[args.pattern])
    return TreeDepth3()


def _read(path: str) -> str:
    return Path(path).read_text()


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.file))
    limits = Limits(vc=args.guard_vc, oracle_edges=args.guard_edges)
    try:
        res, route = solve(inst, limits, route=args.route)
    except Unsupported as err:
        print(f"UNSUPPORTED {err}")
        return EXIT_UNSUPPORTED
    print(f"route {route}")
    if not res.feasible:
        print("INFEASIBLE")
        return EXIT_INFEASIBLE
    print(f"value {res.value}")
    if args.emit_certificate:
        sys.stdout.write(write_certificate(res.certificate))
    return EXIT_OK


def cmd_check(args) -> int:
    inst = parse_instance(_read(args.file))
    cert = parse_certificate(_read(args.certificate))
    try:
        ok = validate_solution(inst, cert)
    except ValueError as err:
        print(f"invalid: {err}")
        return EXIT_ERROR
    if not ok:
        print("invalid: not a forest connecting every pair")
        return EXIT_ERROR
    print(f"valid size {cert.size}")
    return EXIT_OK


def cmd_classify(args) -> int:
    inst = parse_instance(_read(args.file))
    report = classify(inst.graph, Limits(vc=args.guard_vc))
    print(json.dumps(report.summary(base=1), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = GenSpec(_kind(args), args.n, args.edge_prob, args.pairs, args.seed)
    text = write_instance(generate(spec).instance)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    return EXIT_OK


def _suite(name: str, seed: int, count: int):
    for i in range(count):
        s = (seed * 1_000_003 + i) % 2**64
        if name == "small":
            kinds = [HSubgraphFree(PATTERNS["p9"]), Planted2DS2(), Fan(), CyclePathUnion()]
            spec = GenSpec(kinds[i % len(kinds)], 8 + i % 5, 0.3, 3, s)
        else:
            spec = GenSpec(PlantedCover(3 + i % 4), 20 + 5 * (i % 5), 0.3, 3, s)
        yield f"{name}-{i}", generate(spec).instance


def cmd_bench(args) -> int:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["instance", "route", "value", "wall_time"])
    for label, inst in _suite(args.suite, args.seed, args.count):
        t0 = time.perf_counter()
        try:
            res, route = solve(inst, DEFAULT_LIMITS)
            value = res.value if res.feasible else "INFEASIBLE"
        except Unsupported:
            route, value = "none", "UNSUPPORTED"
        w.writerow([label, route, value, f"{time.perf_counter() - t0:.6f}"])
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="steinerforest", description="Exact Steiner forest on structured graph classes.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an SFP instance")
    s.add_argument("file")
    s.add_argument("--route", default="auto", choices=["auto", *ROUTE_NAMES])
    s.add_argument("--guard-vc", type=int, default=DEFAULT_LIMITS.vc)
    s.add_argument("--guard-edges", type=int, default=DEFAULT_LIMITS.oracle_edges)
    s.add_argument("--emit-certificate", action="store_true")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="validate a certificate file against an instance")
    c.add_argument("file")
    c.add_argument("certificate")
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("classify", help="report class memberships with witnesses")
    k.add_argument("file")
    k.add_argument("--guard-vc", type=int, default=DEFAULT_LIMITS.vc)
    k.set_defaults(func=cmd_classify)

    g = sub.add_parser("gen", help="generate an instance with planted structure")
    g.add_argument("--kind", required=True,
                   choices=["planted-cover", "planted-2ds2", "fan", "cycle-path", "h-free", "tree-depth3"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--k", type=int, default=3, help="cover size for planted-cover")
    g.add_argument("--pattern", choices=sorted(PATTERNS), default="p9", help="forbidden pattern for h-free")
    g.add_argument("--edge-prob", type=float, default=0.3)
    g.add_argument("--pairs", type=int, default=3)
    g.add_argument("-o", "--output", default="-")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="solve a generated suite and print CSV timings")
    b.add_argument("--suite", choices=["small", "planted"], default="small")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--count", type=int, default=20)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SteinerError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
