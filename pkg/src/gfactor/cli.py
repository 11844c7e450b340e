"""Command-line interface: solve, verify, gen, bench.

Exit codes: 0 solve/verify passed, 1 malformed input, 2 infeasible instance,
3 certificate verification failed (an implementation bug when reached through
``solve --verify``).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .certificates import check_cover_slackness, check_factor_slackness
from .io_cli import (GeneratorConfig, GraphFormatError, generate,
                     parse_certificate, parse_instance, parse_solution,
                     serialize_certificate, serialize_instance,
                     serialize_solution)
from .multigraph import EdgeSubset, StructuralError, validate_cover, validate_factor
from .solvers import SolveConfig, solve

EXIT_OK = 0
EXIT_FORMAT = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFY = 3

PROBLEMS = ("max-weight-factor", "min-weight-cover", "max-card-factor",
            "min-card-cover", "min-weight-1-cover")
FACTOR_LIKE = {"max-weight-factor", "max-card-factor"}


def _read(path: str) -> str:
    with open(path, "r", encoding="ascii") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def _parse_eps(text: str) -> Fraction:
    return Fraction(text)


def cmd_solve(args: argparse.Namespace) -> int:
    try:
        g = parse_instance(_read(args.input))
    except GraphFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    config = SolveConfig(problem=args.problem, eps=_parse_eps(args.eps),
                         algorithm=args.algo)
    try:
        sol = solve(g, config)
    except StructuralError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    if not sol.ok:
        print(f"infeasible: {args.problem} has no solution on this instance")
        return EXIT_INFEASIBLE
    print(f"problem {sol.problem}")
    print(f"algorithm {sol.algorithm}")
    print(f"objective {sol.value}")
    print(f"edges {len(sol.edges)}")
    if args.stats:
        for key in sorted(sol.stats):
            print(f"stat {key} {sol.stats[key]}")
    if args.output_solution:
        _write(args.output_solution,
               serialize_solution(sol.problem, sol.edges, sol.value))
    if args.output_cert:
        if sol.certificate is None:
            print("note: this solver emits no dual certificate", file=sys.stderr)
        else:
            _write(args.output_cert,
                   serialize_certificate(sol.certificate, sol.bound_report))
    if args.verify and sol.bound_report is not None:
        if not sol.bound_report.passed:
            for failure in sol.bound_report.failures[:5]:
                print(f"verify-fail {failure}", file=sys.stderr)
            return EXIT_VERIFY
        print("verify pass")
        print(f"bound {sol.bound_report.bound_statement()}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        g = parse_instance(_read(args.input))
        problem, edges, value = parse_solution(_read(args.solution))
        cert, _ = parse_certificate(_read(args.certificate))
    except GraphFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    try:
        subset = EdgeSubset(g, edges)
    except StructuralError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    if len(cert.y) != g.n:
        print("error: certificate covers a different vertex count", file=sys.stderr)
        return EXIT_FORMAT
    factor_side = problem in FACTOR_LIKE
    feasible = validate_factor(g, subset) if factor_side else validate_cover(g, subset)
    if not feasible:
        print("verify-fail solution is not feasible", file=sys.stderr)
        return EXIT_VERIFY
    if subset.weight() != value:
        print("verify-fail recorded objective differs from the edge set",
              file=sys.stderr)
        return EXIT_VERIFY
    checker = check_factor_slackness if factor_side else check_cover_slackness
    report = checker(g, subset, cert, cert.delta1_units, cert.delta2_units)
    if not report.passed:
        for failure in report.failures[:5]:
            print(f"verify-fail {failure}", file=sys.stderr)
        return EXIT_VERIFY
    print("verify pass")
    print(f"bound {report.bound_statement()}")
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    g = generate(GeneratorConfig(
        n=args.n, m=args.m, max_weight=args.max_weight, f_max=args.f_max,
        seed=args.seed, loop_prob=args.loop_prob,
        parallel_prob=args.parallel_prob, cover_feasible=args.cover_feasible))
    text = serialize_instance(g)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    from . import bench

    sizes = []
    for spec in args.sizes.split(";"):
        n_text, m_text = spec.split(",")
        sizes.append((int(n_text), int(m_text)))
    points = bench.run_scaling_experiment(sizes=tuple(sizes), eps=args.eps,
                                          max_weight=args.max_weight,
                                          seed=args.seed, repeats=args.repeats)
    for p in points:
        print(f"n={p.n} m={p.m} iterations={p.iterations} "
              f"sec/iter={p.seconds_per_iteration:.6f}")
    for n, m, ratio in bench.doubling_ratios(points):
        print(f"doubling n={n} m={m} ratio={ratio:.3f}")
    bench.write_csv(points, args.output_csv)
    bench.write_figure(points, args.output_figure)
    print(f"wrote {args.output_csv} and {args.output_figure}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gfactor",
        description="Approximate f-factors and f-edge covers with dual certificates")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an instance file")
    p_solve.add_argument("--problem", choices=PROBLEMS, default="max-weight-factor")
    p_solve.add_argument("--eps", default="1/4", help="accuracy, e.g. 1/4 or 0.25")
    p_solve.add_argument("--algo", default="auto",
                         choices=("auto", "small-weight", "scaling", "linear"))
    p_solve.add_argument("--input", required=True)
    p_solve.add_argument("--output-solution")
    p_solve.add_argument("--output-cert")
    p_solve.add_argument("--verify", action="store_true",
                         help="check the certificate before exiting")
    p_solve.add_argument("--stats", action="store_true")
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", help="check a solution + certificate pair")
    p_verify.add_argument("--input", required=True)
    p_verify.add_argument("--solution", required=True)
    p_verify.add_argument("--certificate", required=True)
    p_verify.set_defaults(func=cmd_verify)

    p_gen = sub.add_parser("gen", help="generate a random instance")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--m", type=int, required=True)
    p_gen.add_argument("--max-weight", type=int, default=8)
    p_gen.add_argument("--f-max", type=int, default=3)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--loop-prob", type=float, default=0.08)
    p_gen.add_argument("--parallel-prob", type=float, default=0.15)
    p_gen.add_argument("--cover-feasible", action="store_true")
    p_gen.add_argument("--output")
    p_gen.set_defaults(func=cmd_gen)

    p_bench = sub.add_parser("bench", help="runtime-shape experiment with figure")
    p_bench.add_argument("--sizes", default="1000,10000;1000,20000;1000,40000")
    p_bench.add_argument("--eps", default="1/2")
    p_bench.add_argument("--max-weight", type=int, default=2)
    p_bench.add_argument("--seed", type=int, default=7)
    p_bench.add_argument("--repeats", type=int, default=2)
    p_bench.add_argument("--output-csv", default="bench.csv")
    p_bench.add_argument("--output-figure", default="bench.png")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
