"""Dual state, aggregated duals, and independent slackness verifiers.

All dual arithmetic is exact integer arithmetic in *half-delta units*: a
solve fixes ``units_per_weight`` (an integer) so that one original weight
unit equals that many units and delta/2 equals one unit at the finest scale.
Verifiers never touch floating point.

The verifiers work off a detached :class:`DualCertificate` snapshot (explicit
vertex sets, base edges, and z values) rather than the solver's live
structures, so a certificate can be checked with nothing but the instance,
the edge subset, and the snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .blossoms import BlossomFamily
from .multigraph import EdgeSubset, MultiGraphInstance, StructuralError


@dataclass
class BlossomRecord:
    id: int
    parent: int | None
    base_vertex: int
    base_edge: int | None
    z: int                      # half-delta units, even
    vertices: tuple[int, ...]


@dataclass
class DualCertificate:
    """Detached snapshot of (y, z, blossom family) plus unit bookkeeping."""

    y: list[int]                        # per-vertex, half-delta units
    blossoms: list[BlossomRecord]
    units_per_weight: int               # units in one original weight unit
    delta: Fraction                     # final delta, in original weight units
    eps: Fraction
    algorithm: str
    delta1_units: int                   # claimed domination slack
    delta2_units: int                   # claimed tightness slack

    def delta_units(self) -> int:
        d = self.delta * self.units_per_weight
        if d.denominator != 1:
            raise StructuralError("delta is not a whole number of units")
        return int(d)

    def weight_units(self, g: MultiGraphInstance, eid: int) -> int:
        return g.weight(eid) * self.units_per_weight

    def to_fraction(self, units: int) -> Fraction:
        return Fraction(units, self.units_per_weight)


def snapshot_duals(family: BlossomFamily, y: list[int], units_per_weight: int,
                   delta: Fraction, eps: Fraction, algorithm: str,
                   delta1_units: int, delta2_units: int) -> DualCertificate:
    records = []
    for nd in sorted(family.live_blossoms(), key=lambda nd: nd.id):
        records.append(BlossomRecord(
            id=nd.id, parent=nd.parent, base_vertex=nd.base_vertex,
            base_edge=nd.base_edge, z=nd.z, vertices=tuple(sorted(nd.vertices))))
    return DualCertificate(
        y=list(y), blossoms=records, units_per_weight=units_per_weight,
        delta=delta, eps=eps, algorithm=algorithm,
        delta1_units=delta1_units, delta2_units=delta2_units)


# -- aggregated duals ------------------------------------------------------


def _blossom_term(rec: BlossomRecord, g: MultiGraphInstance, F: EdgeSubset,
                  eid: int, cover: bool) -> bool:
    """Does blossom ``rec`` contribute z to edge ``eid``'s aggregate?

    Factor aggregate sums over ``gamma(B) u I(B)``; the cover aggregate over
    ``gamma(B) u (delta(B) \\ I_C(B))``.  Both reduce to: the edge is inside
    B, or it crosses the boundary and its membership/base-edge parity points
    the right way.
    """
    u, v = g.endpoints(eid)
    verts = frozenset(rec.vertices)
    inside_u, inside_v = u in verts, v in verts
    if inside_u and inside_v:
        return True
    if not inside_u and not inside_v:
        return False
    in_iset = (eid in F) != (eid == rec.base_edge)
    return not in_iset if cover else in_iset


def yz_factor(eid: int, cert: DualCertificate, F: EdgeSubset,
              g: MultiGraphInstance | None = None) -> int:
    """``y(u) + y(v)`` plus z of blossoms whose gamma(B) u I(B) holds the edge.

    Units: half-delta.  A loop counts its vertex's y twice.
    """
    g = g if g is not None else F.g
    u, v = g.endpoints(eid)
    total = cert.y[u] + cert.y[v]
    for rec in cert.blossoms:
        if rec.z and _blossom_term(rec, g, F, eid, cover=False):
            total += rec.z
    return total


def yz_cover(eid: int, cert: DualCertificate, C: EdgeSubset,
             g: MultiGraphInstance | None = None) -> int:
    """Cover-side aggregate; equals ``yz_factor`` on the complementary factor."""
    g = g if g is not None else C.g
    u, v = g.endpoints(eid)
    total = cert.y[u] + cert.y[v]
    for rec in cert.blossoms:
        if rec.z and _blossom_term(rec, g, C, eid, cover=True):
            total += rec.z
    return total


def yz_edge_units(g: MultiGraphInstance, family: BlossomFamily, F: EdgeSubset,
                  y: list[int], eid: int) -> int:
    """Live-structure factor aggregate used on the solver's hot path.

    Walks the two endpoint ancestor chains instead of scanning every blossom;
    must agree with :func:`yz_factor` on a snapshot (tests cross-check).
    """
    u, v = g.endpoints(eid)
    total = y[u] + y[v]
    in_f = eid in F
    for nd in family.ancestor_chain(u):
        if nd.z == 0:
            continue
        if v in nd.vertices:
            total += nd.z
        elif in_f != (eid == nd.base_edge):
            total += nd.z
    if u != v:
        for nd in family.ancestor_chain(v):
            if nd.z == 0 or u in nd.vertices:
                continue  # shared ancestors were counted from u's chain
            if in_f != (eid == nd.base_edge):
                total += nd.z
    return total


# -- blossom maturity equalities ------------------------------------------


def _iset_of_record(rec: BlossomRecord, g: MultiGraphInstance, F: EdgeSubset) -> set[int]:
    verts = frozenset(rec.vertices)
    out: set[int] = set()
    for w in verts:
        for eid, other, side in g.adjacency[w]:
            if other in verts:
                continue
            if eid in F:
                out.add(eid)
    if rec.base_edge is not None:
        out.symmetric_difference_update((rec.base_edge,))
    return out


def factor_maturity_equality(rec: BlossomRecord, g: MultiGraphInstance,
                             F: EdgeSubset) -> bool:
    """``|F n (gamma(B) u I(B))| == floor((f(B) + |I(B)|) / 2)``."""
    verts = frozenset(rec.vertices)
    iset = _iset_of_record(rec, g, F)
    count = sum(1 for eid in iset if eid in F)
    for eid in range(g.m):
        if F.member[eid]:
            u, v = g.endpoints(eid)
            if u in verts and v in verts:
                count += 1
    f_b = sum(g.f[v] for v in verts)
    return count == (f_b + len(iset)) // 2


def cover_maturity_equality(rec: BlossomRecord, g: MultiGraphInstance,
                            C: EdgeSubset) -> bool:
    """``|C n (gamma(B) u (delta(B) \\ I_C(B)))| == ceil((f(B) - |I_C(B)|) / 2)``."""
    verts = frozenset(rec.vertices)
    iset = _iset_of_record(rec, g, C)
    count = 0
    for eid in range(g.m):
        if not C.member[eid]:
            continue
        u, v = g.endpoints(eid)
        if u in verts and v in verts:
            count += 1
        elif (u in verts) != (v in verts) and eid not in iset:
            count += 1
    f_b = sum(g.f[v] for v in verts)
    return count == -((len(iset) - f_b) // 2)  # ceil((f_b - |I|) / 2)


# -- bound reports ---------------------------------------------------------


@dataclass
class BoundReport:
    kind: str                           # "factor" or "cover"
    passed: bool
    failures: list[str]
    delta1_units: int
    delta2_units: int
    units_per_weight: int
    primal_value: int                   # original weight units
    solution_size: int
    opt_size_surrogate: int
    effective_delta1_units: int         # smallest uniform domination slack
    slack_total_units: int              # sum of per-edge tightness slack
    certified_gap_units: int
    stats: dict = field(default_factory=dict)

    def certified_gap(self) -> Fraction:
        return Fraction(self.certified_gap_units, self.units_per_weight)

    def bound_statement(self) -> str:
        gap = self.certified_gap()
        if self.kind == "factor":
            return (f"w(F) >= w(F*) - delta1*|F*| - sum_slack"
                    f" >= w(F*) - {gap} (|F*| <= {self.opt_size_surrogate})")
        return (f"w(C) <= w(C*) + delta1*|C*| + sum_slack"
                f" <= w(C*) + {gap} (|C*| <= {self.opt_size_surrogate})")

    def kv_block(self) -> dict[str, str]:
        out = {
            "kind": self.kind,
            "passed": "1" if self.passed else "0",
            "delta1_units": str(self.delta1_units),
            "delta2_units": str(self.delta2_units),
            "units_per_weight": str(self.units_per_weight),
            "primal_value": str(self.primal_value),
            "solution_size": str(self.solution_size),
            "opt_size_surrogate": str(self.opt_size_surrogate),
            "effective_delta1_units": str(self.effective_delta1_units),
            "slack_total_units": str(self.slack_total_units),
            "certified_gap_units": str(self.certified_gap_units),
        }
        for i, msg in enumerate(self.failures):
            out[f"failure_{i}"] = msg
        return out


def check_factor_slackness(g: MultiGraphInstance, F: EdgeSubset,
                           cert: DualCertificate, delta1_units: int,
                           delta2_units: int) -> BoundReport:
    """Verify relaxed complementary slackness for a factor.

    Clauses: domination ``yz(e) >= w(e) - delta1`` off the factor, tightness
    ``yz(e) <= w(e) + delta2`` on it, the per-blossom maturity equality, and
    ``y(v) = 0`` on every unsaturated vertex.  On success the report carries
    the certified optimality gap ``delta1_eff * |F*|_bound + sum_slack``.
    """
    failures: list[str] = []
    spw = cert.units_per_weight
    eff_delta1 = 0
    slack_total = 0
    for eid in range(g.m):
        w_units = g.weight(eid) * spw
        agg = yz_factor(eid, cert, F, g)
        if F.member[eid]:
            slack = agg - w_units
            if slack > delta2_units:
                failures.append(f"tightness edge {eid}: yz={agg} > w+delta2={w_units + delta2_units}")
            if slack > 0:
                slack_total += slack
        else:
            deficit = w_units - agg
            if deficit > delta1_units:
                failures.append(f"domination edge {eid}: yz={agg} < w-delta1={w_units - delta1_units}")
            if deficit > eff_delta1:
                eff_delta1 = deficit
    for rec in cert.blossoms:
        if not factor_maturity_equality(rec, g, F):
            failures.append(f"maturity equality fails for blossom {rec.id}")
    for v in range(g.n):
        if F.deg_f[v] < g.f[v] and cert.y[v] != 0:
            failures.append(f"unsaturated vertex {v} has y={cert.y[v]} != 0")
        if cert.y[v] < 0:
            failures.append(f"vertex {v} has negative y={cert.y[v]}")
    for rec in cert.blossoms:
        if rec.z < 0:
            failures.append(f"blossom {rec.id} has negative z={rec.z}")
    surrogate = min(g.m, g.total_demand() // 2)
    return BoundReport(
        kind="factor", passed=not failures, failures=failures,
        delta1_units=delta1_units, delta2_units=delta2_units,
        units_per_weight=spw, primal_value=F.weight(), solution_size=len(F),
        opt_size_surrogate=surrogate, effective_delta1_units=eff_delta1,
        slack_total_units=slack_total,
        certified_gap_units=eff_delta1 * surrogate + slack_total)


def check_cover_slackness(g: MultiGraphInstance, C: EdgeSubset,
                          cert: DualCertificate, delta1_units: int,
                          delta2_units: int) -> BoundReport:
    """Cover-side mirror: ``yz <= w + delta1`` off the cover, ``yz >= w -
    delta2`` on it, the ceiling maturity equality, and ``y = 0`` on every
    oversaturated vertex."""
    failures: list[str] = []
    spw = cert.units_per_weight
    eff_delta1 = 0
    slack_total = 0
    for eid in range(g.m):
        w_units = g.weight(eid) * spw
        agg = yz_cover(eid, cert, C, g)
        if C.member[eid]:
            slack = w_units - agg
            if slack > delta2_units:
                failures.append(f"tightness edge {eid}: yz={agg} < w-delta2={w_units - delta2_units}")
            if slack > 0:
                slack_total += slack
        else:
            excess = agg - w_units
            if excess > delta1_units:
                failures.append(f"domination edge {eid}: yz={agg} > w+delta1={w_units + delta1_units}")
            if excess > eff_delta1:
                eff_delta1 = excess
    for rec in cert.blossoms:
        if not cover_maturity_equality(rec, g, C):
            failures.append(f"maturity equality fails for blossom {rec.id}")
    for v in range(g.n):
        if C.deg_f[v] > g.f[v] and cert.y[v] != 0:
            failures.append(f"oversaturated vertex {v} has y={cert.y[v]} != 0")
        if cert.y[v] < 0:
            failures.append(f"vertex {v} has negative y={cert.y[v]}")
    surrogate = min(g.m, g.total_demand())
    return BoundReport(
        kind="cover", passed=not failures, failures=failures,
        delta1_units=delta1_units, delta2_units=delta2_units,
        units_per_weight=spw, primal_value=C.weight(), solution_size=len(C),
        opt_size_surrogate=surrogate, effective_delta1_units=eff_delta1,
        slack_total_units=slack_total,
        certified_gap_units=eff_delta1 * surrogate + slack_total)


# -- in-flight invariant checks (debug mode and tests) ---------------------


def check_invariant_uniform(g: MultiGraphInstance, F: EdgeSubset,
                            family: BlossomFamily, y: list[int],
                            delta_units: int, units_per_weight: int) -> list[str]:
    """Mid-run relaxed slackness at a uniform grid: granularity, domination
    with slack delta, tightness with no slack (both also required on blossom
    structural edges), maturity equalities, and uniform-minimal unsaturated
    y-values."""
    failures: list[str] = []
    half = delta_units // 2
    if delta_units % 2:
        return [f"delta_units={delta_units} is odd"]
    for v in range(g.n):
        if y[v] % half:
            failures.append(f"granularity: y({v})={y[v]} not multiple of {half}")
        if y[v] < 0:
            failures.append(f"y({v})={y[v]} negative")
    for nd in family.live_blossoms():
        if nd.z % delta_units:
            failures.append(f"granularity: z({nd.id})={nd.z} not multiple of {delta_units}")
        if nd.z < 0:
            failures.append(f"z({nd.id})={nd.z} negative")
    for eid in range(g.m):
        w_units = g.weight(eid) * units_per_weight
        agg = yz_edge_units(g, family, F, y, eid)
        structural = eid in family.structural_edges
        if structural or not F.member[eid]:
            if agg < w_units - delta_units:
                failures.append(f"domination: edge {eid} yz={agg} < {w_units - delta_units}")
        if structural or F.member[eid]:
            if agg > w_units:
                failures.append(f"tightness: edge {eid} yz={agg} > {w_units}")
    cert = snapshot_duals(family, y, units_per_weight, Fraction(1), Fraction(1),
                          "debug", 0, 0)
    for rec in cert.blossoms:
        if not factor_maturity_equality(rec, g, F):
            failures.append(f"maturity equality fails for blossom {rec.id}")
    unsat = [y[v] for v in range(g.n) if F.deg_f[v] < g.f[v]]
    if unsat:
        if len(set(unsat)) != 1:
            failures.append("unsaturated y-values are not all equal")
        floor = unsat[0]
        if any(y[v] < floor for v in range(g.n)):
            failures.append("some y-value is below the unsaturated level")
    return failures


def check_invariant_scaled(g: MultiGraphInstance, F: EdgeSubset,
                           family: BlossomFamily, y: list[int],
                           delta_i_units: int, w_eff_units: list[int],
                           first_event_scale: list[int | None],
                           scale_index: int, delta0_units: int,
                           active: list[bool] | None = None) -> list[str]:
    """Scaled relaxed slackness: tightness threshold per edge is
    ``w_i(e) + 2*delta_j - 2*delta_i`` with ``j`` the edge's first matched (or
    first contracted) scale.  Edges outside their active weight window (the
    weight-independent driver) are exempt from the domination/tightness
    clauses."""
    failures: list[str] = []
    half = delta_i_units // 2
    if delta_i_units % 2:
        return [f"delta_units={delta_i_units} is odd"]
    for v in range(g.n):
        if y[v] % half:
            failures.append(f"granularity: y({v})={y[v]} not multiple of {half}")
    for nd in family.live_blossoms():
        if nd.z % delta_i_units:
            failures.append(f"granularity: z({nd.id})={nd.z} not multiple of {delta_i_units}")
        if nd.z < 0:
            failures.append(f"z({nd.id})={nd.z} negative")
    for eid in range(g.m):
        if active is not None and not active[eid]:
            continue
        agg = yz_edge_units(g, family, F, y, eid)
        w_i = w_eff_units[eid]
        structural = eid in family.structural_edges
        if structural or not F.member[eid]:
            if agg < w_i - delta_i_units:
                failures.append(f"domination: edge {eid} yz={agg} < {w_i - delta_i_units}")
        if structural or F.member[eid]:
            j = first_event_scale[eid]
            if j is None:
                j = scale_index
            delta_j_units = delta0_units >> j
            bound = w_i + 2 * delta_j_units - 2 * delta_i_units
            if agg > bound:
                failures.append(f"tightness: edge {eid} yz={agg} > {bound} (j={j})")
    unsat = [y[v] for v in range(g.n) if F.deg_f[v] < g.f[v]]
    if unsat:
        if len(set(unsat)) != 1:
            failures.append("unsaturated y-values are not all equal")
        floor = unsat[0]
        if any(y[v] < floor for v in range(g.n)):
            failures.append("some y-value is below the unsaturated level")
    return failures


def assert_search_parity(g: MultiGraphInstance, y: list[int], vertices: set[int],
                         delta_units: int) -> None:
    """Vertices reachable by the eligible search share one y-parity as
    multiples of delta/2; asserted before every dual adjustment."""
    half = delta_units // 2
    parities = {(y[v] // half) % 2 for v in vertices if y[v] % half == 0}
    bad = [v for v in vertices if y[v] % half]
    if bad:
        raise StructuralError(f"granularity broken inside search set at {bad[:3]}")
    if len(parities) > 1:
        raise StructuralError("search-set y-values have mixed parity")
