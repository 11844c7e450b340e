"""Runtime-shape benchmark: per-iteration wall time as the edge count doubles.

Backs the ``gfactor bench`` subcommand, which writes a delimited timing table
and a log-log figure next to it, and the acceptance check that per-iteration
time grows at most ~2.5x per doubling of m.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .edmonds import IterationState, run_iteration
from .io_cli import GeneratorConfig, generate
from .multigraph import MultiGraphInstance


@dataclass
class BenchPoint:
    n: int
    m: int
    iterations: int
    total_seconds: float
    seconds_per_iteration: float


def time_solve_iterations(g: MultiGraphInstance, eps, repeats: int = 2) -> BenchPoint:
    """Time the uniform-grid iteration loop; the best of ``repeats`` runs."""
    from .solvers import _uniform_driver  # local import avoids a cycle
    import math

    delta_inv = math.ceil(1 / eps)
    best = None
    iterations = 1
    for _ in range(repeats):
        start = time.perf_counter()
        state = _uniform_driver(g, delta_inv, debug=False)
        elapsed = time.perf_counter() - start
        iterations = max(state.stats["iterations"], 1)
        if best is None or elapsed < best:
            best = elapsed
    return BenchPoint(g.n, g.m, iterations, best, best / iterations)


def run_scaling_experiment(sizes=((1000, 10000), (1000, 20000), (1000, 40000),
                                  (10000, 10000), (10000, 20000), (10000, 40000)),
                           eps="1/2", max_weight: int = 2, seed: int = 7,
                           repeats: int = 2) -> list[BenchPoint]:
    from fractions import Fraction
    points = []
    for n, m in sizes:
        g = generate(GeneratorConfig(n=n, m=m, max_weight=max_weight,
                                     f_max=2, seed=seed + n + m))
        points.append(time_solve_iterations(g, Fraction(eps), repeats))
    return points


def doubling_ratios(points: list[BenchPoint]) -> list[tuple[int, int, float]]:
    """(n, m, ratio) for each consecutive doubling of m at fixed n."""
    by_n: dict[int, list[BenchPoint]] = {}
    for p in points:
        by_n.setdefault(p.n, []).append(p)
    out = []
    for n, pts in sorted(by_n.items()):
        pts.sort(key=lambda p: p.m)
        for prev, cur in zip(pts, pts[1:]):
            if cur.m == 2 * prev.m:
                out.append((n, cur.m,
                            cur.seconds_per_iteration / prev.seconds_per_iteration))
    return out


def write_csv(points: list[BenchPoint], path: str) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "m", "iterations", "total_seconds",
                         "seconds_per_iteration"])
        for p in points:
            writer.writerow([p.n, p.m, p.iterations,
                             f"{p.total_seconds:.6f}",
                             f"{p.seconds_per_iteration:.6f}"])


def write_figure(points: list[BenchPoint], path: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    by_n: dict[int, list[BenchPoint]] = {}
    for p in points:
        by_n.setdefault(p.n, []).append(p)
    for n, pts in sorted(by_n.items()):
        pts.sort(key=lambda p: p.m)
        ax.plot([p.m for p in pts], [p.seconds_per_iteration for p in pts],
                marker="o", label=f"n = {n}")
    if points:
        anchor = min(points, key=lambda p: p.m)
        ms = sorted({p.m for p in points})
        ax.plot(ms, [anchor.seconds_per_iteration * m / anchor.m for m in ms],
                linestyle="--", color="gray", label="linear reference")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("edges m")
    ax.set_ylabel("seconds per iteration")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
