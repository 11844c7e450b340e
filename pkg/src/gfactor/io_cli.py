"""Instance and certificate file formats plus the seeded instance generator.

Both formats are line-oriented ASCII with LF endings so certificates diff
cleanly.  Instance files::

    p gfactor <n> <m>
    v <id> <f>          (n lines)
    e <u> <v> <w>       (m lines; order defines edge ids)

Certificate files carry y-values in half-delta units, nested blossom records,
and a key-value footer with delta, eps, the algorithm, and the bound report.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .certificates import BlossomRecord, BoundReport, DualCertificate
from .multigraph import MultiGraphInstance


class GraphFormatError(Exception):
    """Malformed input file; carries the offending 1-based line number."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _fraction(text: str) -> Fraction:
    if "/" in text:
        p, q = text.split("/", 1)
        return Fraction(int(p), int(q))
    return Fraction(text)


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# -- instance files ---------------------------------------------------------


def serialize_instance(g: MultiGraphInstance) -> str:
    lines = [f"p gfactor {g.n} {g.m}"]
    lines.extend(f"v {v} {g.f[v]}" for v in range(g.n))
    lines.extend(f"e {u} {v} {w}" for u, v, w in g.edges)
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> MultiGraphInstance:
    n = m = None
    f: dict[int, int] = {}
    edges: list[tuple[int, int, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise GraphFormatError(line_no, "duplicate problem line")
            if len(parts) != 4 or parts[1] != "gfactor":
                raise GraphFormatError(line_no, "expected 'p gfactor <n> <m>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphFormatError(line_no, "non-integer sizes") from None
        elif parts[0] == "v":
            if n is None:
                raise GraphFormatError(line_no, "vertex line before problem line")
            try:
                vid, fv = int(parts[1]), int(parts[2])
            except (IndexError, ValueError):
                raise GraphFormatError(line_no, "expected 'v <id> <f>'") from None
            if not (0 <= vid < n) or fv < 0:
                raise GraphFormatError(line_no, f"bad vertex record {line!r}")
            if vid in f:
                raise GraphFormatError(line_no, f"duplicate vertex {vid}")
            f[vid] = fv
        elif parts[0] == "e":
            if n is None:
                raise GraphFormatError(line_no, "edge line before problem line")
            try:
                u, v, w = int(parts[1]), int(parts[2]), int(parts[3])
            except (IndexError, ValueError):
                raise GraphFormatError(line_no, "expected 'e <u> <v> <w>'") from None
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(line_no, "endpoint out of range")
            if w < 1:
                raise GraphFormatError(line_no, "weights must be positive integers")
            edges.append((u, v, w))
        else:
            raise GraphFormatError(line_no, f"unknown record {parts[0]!r}")
    if n is None:
        raise GraphFormatError(1, "missing problem line")
    if len(edges) != m:
        raise GraphFormatError(1, f"expected {m} edges, found {len(edges)}")
    if len(f) != n:
        raise GraphFormatError(1, f"expected {n} vertex lines, found {len(f)}")
    return MultiGraphInstance(n, edges, [f[v] for v in range(n)])


# -- solution files -----------------------------------------------------------


def serialize_solution(problem: str, edges: list[int], value: int) -> str:
    lines = [f"s gfactor {problem} {len(edges)} {value}"]
    lines.extend(f"f {eid}" for eid in sorted(edges))
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> tuple[str, list[int], int]:
    problem = None
    value = 0
    count = None
    edges: list[int] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if len(parts) != 5 or parts[1] != "gfactor":
                raise GraphFormatError(line_no, "expected 's gfactor <problem> <k> <value>'")
            problem, count, value = parts[2], int(parts[3]), int(parts[4])
        elif parts[0] == "f":
            try:
                edges.append(int(parts[1]))
            except (IndexError, ValueError):
                raise GraphFormatError(line_no, "expected 'f <edge-id>'") from None
        else:
            raise GraphFormatError(line_no, f"unknown record {parts[0]!r}")
    if problem is None:
        raise GraphFormatError(1, "missing solution header")
    if count != len(edges):
        raise GraphFormatError(1, f"expected {count} edges, found {len(edges)}")
    return problem, edges, value


# -- certificate files --------------------------------------------------------


def serialize_certificate(cert: DualCertificate,
                          report: BoundReport | None = None) -> str:
    lines = ["c gfactor certificate"]
    for v, yv in enumerate(cert.y):
        lines.append(f"y {v} {yv}")
    for rec in cert.blossoms:
        parent = "-" if rec.parent is None else str(rec.parent)
        eta = "-" if rec.base_edge is None else str(rec.base_edge)
        verts = ",".join(str(v) for v in rec.vertices)
        if rec.z % 2:
            raise ValueError(f"blossom {rec.id} has odd z in half-delta units")
        lines.append(f"B {rec.id} parent={parent} beta={rec.base_vertex} "
                     f"eta={eta} z={rec.z // 2} verts={verts}")
    lines.append(f"delta {format_fraction(cert.delta)}")
    lines.append(f"eps {format_fraction(cert.eps)}")
    lines.append(f"algorithm {cert.algorithm}")
    lines.append(f"units_per_weight {cert.units_per_weight}")
    lines.append(f"delta1_units {cert.delta1_units}")
    lines.append(f"delta2_units {cert.delta2_units}")
    if report is not None:
        for key, val in report.kv_block().items():
            lines.append(f"bound {key} {val}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> tuple[DualCertificate, dict[str, str]]:
    y: dict[int, int] = {}
    blossoms: list[BlossomRecord] = []
    meta: dict[str, str] = {}
    bound: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "c":
                continue
            if parts[0] == "y":
                y[int(parts[1])] = int(parts[2])
            elif parts[0] == "B":
                fields = dict(p.split("=", 1) for p in parts[2:])
                parent = None if fields["parent"] == "-" else int(fields["parent"])
                eta = None if fields["eta"] == "-" else int(fields["eta"])
                verts = tuple(int(x) for x in fields["verts"].split(",") if x)
                blossoms.append(BlossomRecord(
                    id=int(parts[1]), parent=parent, base_vertex=int(fields["beta"]),
                    base_edge=eta, z=2 * int(fields["z"]), vertices=verts))
            elif parts[0] == "bound":
                bound[parts[1]] = " ".join(parts[2:])
            elif parts[0] in ("delta", "eps", "algorithm", "units_per_weight",
                              "delta1_units", "delta2_units"):
                meta[parts[0]] = parts[1]
            else:
                raise ValueError(f"unknown record {parts[0]!r}")
        except (IndexError, KeyError, ValueError) as exc:
            raise GraphFormatError(line_no, str(exc)) from None
    required = ("delta", "eps", "algorithm", "units_per_weight",
                "delta1_units", "delta2_units")
    for key in required:
        if key not in meta:
            raise GraphFormatError(1, f"certificate missing {key!r}")
    n = (max(y) + 1) if y else 0
    if sorted(y) != list(range(n)):
        raise GraphFormatError(1, "certificate y-values must cover 0..n-1")
    cert = DualCertificate(
        y=[y[v] for v in range(n)], blossoms=blossoms,
        units_per_weight=int(meta["units_per_weight"]),
        delta=_fraction(meta["delta"]), eps=_fraction(meta["eps"]),
        algorithm=meta["algorithm"], delta1_units=int(meta["delta1_units"]),
        delta2_units=int(meta["delta2_units"]))
    return cert, bound


# -- generator ---------------------------------------------------------------


@dataclass
class GeneratorConfig:
    n: int
    m: int
    max_weight: int = 8
    f_max: int = 3
    seed: int = 0
    loop_prob: float = 0.08
    parallel_prob: float = 0.15
    cover_feasible: bool = False


def generate(config: GeneratorConfig) -> MultiGraphInstance:
    """Deterministic random multigraph; loops and parallel edges included.

    With ``cover_feasible`` the demand of each vertex is capped by its degree
    so an edge cover exists.
    """
    rng = random.Random(config.seed)
    n, m = config.n, config.m
    edges: list[tuple[int, int, int]] = []
    for _ in range(m):
        w = rng.randint(1, config.max_weight)
        roll = rng.random()
        if roll < config.loop_prob or n == 1:
            v = rng.randrange(n)
            edges.append((v, v, w))
        elif roll < config.loop_prob + config.parallel_prob and edges:
            u, v, _ = edges[rng.randrange(len(edges))]
            edges.append((u, v, w))
        else:
            u = rng.randrange(n)
            v = rng.randrange(n)
            edges.append((u, v, w))
    deg = [0] * n
    for u, v, _ in edges:
        deg[u] += 1
        deg[v] += 1
    f = []
    for v in range(n):
        cap = min(config.f_max, deg[v]) if config.cover_feasible else config.f_max
        f.append(rng.randint(0, cap) if cap > 0 else 0)
    return MultiGraphInstance(n, edges, f)
