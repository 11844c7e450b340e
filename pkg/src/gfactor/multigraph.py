"""Multigraph instances with explicit edge identities, demands, and edge subsets.

Vertices are ``0..n-1``.  Edges are identified by their position in the input
edge list; parallel edges keep distinct ids and a loop ``(v, v)`` appears twice
in ``v``'s adjacency (once per half-edge) and contributes 2 to its degree.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence


class StructuralError(Exception):
    """An input or internal state violates a structural precondition.

    Distinct from a checker returning ``False``: a ``False`` means "this is a
    well-formed object that fails the predicate", a StructuralError means the
    question itself is malformed (edge id out of range, broken invariant).
    """


def _as_demand_list(n: int, f) -> list[int]:
    if isinstance(f, int):
        values = [f] * n
    elif isinstance(f, Mapping):
        values = [int(f.get(v, 0)) for v in range(n)]
    else:
        values = [int(x) for x in f]
        if len(values) != n:
            raise StructuralError(f"demand vector has length {len(values)}, expected {n}")
    for v, fv in enumerate(values):
        if fv < 0:
            raise StructuralError(f"negative demand f({v}) = {fv}")
    return values


class MultiGraphInstance:
    """Immutable multigraph with integer weights and per-vertex demands.

    ``adjacency[v]`` lists ``(edge_id, other_endpoint, side)`` triples in input
    order; ``side`` is 0 at the edge's first endpoint and 1 at its second, so
    the two half-edges of a loop are distinguishable.
    """

    __slots__ = ("n", "m", "edges", "f", "adjacency", "deg", "max_weight")

    def __init__(self, n: int, edges: Sequence[tuple[int, int, int]], f) -> None:
        self.n = int(n)
        if self.n < 0:
            raise StructuralError("vertex count must be nonnegative")
        edge_list: list[tuple[int, int, int]] = []
        for eid, (u, v, w) in enumerate(edges):
            u, v, w = int(u), int(v), int(w)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise StructuralError(f"edge {eid} endpoint out of range: ({u}, {v})")
            if w < 1:
                raise StructuralError(f"edge {eid} has nonpositive weight {w}")
            edge_list.append((u, v, w))
        self.edges = edge_list
        self.m = len(edge_list)
        self.f = _as_demand_list(self.n, f)
        self.max_weight = max((w for _, _, w in edge_list), default=1)
        adjacency: list[list[tuple[int, int, int]]] = [[] for _ in range(self.n)]
        deg = [0] * self.n
        for eid, (u, v, _) in enumerate(edge_list):
            adjacency[u].append((eid, v, 0))
            adjacency[v].append((eid, u, 1))
            deg[u] += 1
            deg[v] += 1
        self.adjacency = adjacency
        self.deg = deg

    def endpoints(self, eid: int) -> tuple[int, int]:
        self.check_edge_id(eid)
        u, v, _ = self.edges[eid]
        return u, v

    def weight(self, eid: int) -> int:
        self.check_edge_id(eid)
        return self.edges[eid][2]

    def is_loop(self, eid: int) -> bool:
        u, v = self.endpoints(eid)
        return u == v

    def check_edge_id(self, eid: int) -> None:
        if not (0 <= eid < self.m):
            raise StructuralError(f"edge id {eid} out of range [0, {self.m})")

    def total_demand(self) -> int:
        return sum(self.f)

    def total_weight(self) -> int:
        return sum(w for _, _, w in self.edges)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"MultiGraphInstance(n={self.n}, m={self.m}, W={self.max_weight})"


class EdgeSubset:
    """A 0/1 edge membership vector with cached per-vertex matched degrees.

    A loop in the subset counts twice toward its vertex's degree.  The cache
    is updated incrementally on every toggle; ``assert_degrees_consistent``
    recomputes from scratch for debug runs.
    """

    __slots__ = ("g", "member", "deg_f", "size")

    def __init__(self, g: MultiGraphInstance, members: Iterable[int] = ()) -> None:
        self.g = g
        self.member = bytearray(g.m)
        self.deg_f = [0] * g.n
        self.size = 0
        for eid in members:
            self.add(eid)

    def __contains__(self, eid: int) -> bool:
        self.g.check_edge_id(eid)
        return bool(self.member[eid])

    def __len__(self) -> int:
        return self.size

    def add(self, eid: int) -> None:
        if not self.member[eid]:
            self.toggle(eid)

    def discard(self, eid: int) -> None:
        if self.member[eid]:
            self.toggle(eid)

    def toggle(self, eid: int) -> None:
        self.g.check_edge_id(eid)
        u, v, _ = self.g.edges[eid]
        if self.member[eid]:
            self.member[eid] = 0
            self.deg_f[u] -= 1
            self.deg_f[v] -= 1
            self.size -= 1
        else:
            self.member[eid] = 1
            self.deg_f[u] += 1
            self.deg_f[v] += 1
            self.size += 1

    def degree(self, v: int) -> int:
        return self.deg_f[v]

    def edge_ids(self) -> list[int]:
        return [eid for eid in range(self.g.m) if self.member[eid]]

    def weight(self) -> int:
        return sum(self.g.edges[eid][2] for eid in range(self.g.m) if self.member[eid])

    def copy(self) -> EdgeSubset:
        dup = EdgeSubset(self.g)
        dup.member[:] = self.member
        dup.deg_f[:] = self.deg_f
        dup.size = self.size
        return dup

    def assert_degrees_consistent(self) -> None:
        fresh = [0] * self.g.n
        for eid in range(self.g.m):
            if self.member[eid]:
                u, v, _ = self.g.edges[eid]
                fresh[u] += 1
                fresh[v] += 1
        if fresh != self.deg_f:
            raise StructuralError("EdgeSubset degree cache out of sync")


class DeficiencyView:
    """Per-vertex ``f(v) - deg_F(v)``; negative values are cover surplus."""

    __slots__ = ("g", "F")

    def __init__(self, g: MultiGraphInstance, F: EdgeSubset) -> None:
        if F.g is not g:
            raise StructuralError("edge subset belongs to a different instance")
        self.g = g
        self.F = F

    def deficiency(self, v: int) -> int:
        return self.g.f[v] - self.F.deg_f[v]

    def surplus(self, v: int) -> int:
        return -self.deficiency(v)

    def unsaturated(self) -> list[int]:
        return [v for v in range(self.g.n) if self.deficiency(v) > 0]

    def oversaturated(self) -> list[int]:
        return [v for v in range(self.g.n) if self.deficiency(v) < 0]

    def total_deficiency(self) -> int:
        return sum(d for v in range(self.g.n) if (d := self.deficiency(v)) > 0)

    def total_surplus(self) -> int:
        return sum(-d for v in range(self.g.n) if (d := self.deficiency(v)) < 0)


def _check_subset(g: MultiGraphInstance, F: EdgeSubset) -> None:
    if F.g is not g:
        raise StructuralError("edge subset belongs to a different instance")


def validate_factor(g: MultiGraphInstance, F: EdgeSubset) -> bool:
    """True iff ``deg_F(v) <= f(v)`` for every vertex."""
    _check_subset(g, F)
    return all(F.deg_f[v] <= g.f[v] for v in range(g.n))


def validate_cover(g: MultiGraphInstance, F: EdgeSubset) -> bool:
    """True iff ``deg_F(v) >= f(v)`` for every vertex."""
    _check_subset(g, F)
    return all(F.deg_f[v] >= g.f[v] for v in range(g.n))


def complement(g: MultiGraphInstance, F: EdgeSubset) -> EdgeSubset:
    """Return ``E \\ F``.  An f-factor's complement is a (deg - f)-edge cover."""
    _check_subset(g, F)
    out = EdgeSubset(g)
    for eid in range(g.m):
        if not F.member[eid]:
            out.add(eid)
    return out


def complement_demands(g: MultiGraphInstance) -> list[int]:
    """The demand vector ``deg(v) - f(v)`` pairing factors with covers."""
    comp = [g.deg[v] - g.f[v] for v in range(g.n)]
    for v, c in enumerate(comp):
        if c < 0:
            raise StructuralError(f"deg({v}) = {g.deg[v]} < f({v}) = {g.f[v]}; no cover exists")
    return comp
