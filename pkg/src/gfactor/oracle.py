"""Brute-force ground truth for small instances.

Exact optima come from enumerating all 2^m edge subsets (vectorized in
blocks), deliberately ignorant of any matching theory, so they can referee
the solvers.  The augmenting-walk enumerator implements the contracted-walk
requirements literally: terminal vertices, terminal edges, and alternation.
"""

from __future__ import annotations

import numpy as np

from .blossoms import BlossomFamily
from .multigraph import EdgeSubset, MultiGraphInstance, StructuralError

ENUMERATION_LIMIT = 24
_BLOCK_BITS = 16


def _subset_blocks(m: int):
    """Yield (offset, bits) with bits a (block, m) 0/1 matrix of subsets."""
    block = 1 << min(m, _BLOCK_BITS)
    ids = np.arange(block, dtype=np.uint32)
    low = ((ids[:, None] >> np.arange(min(m, _BLOCK_BITS), dtype=np.uint32)) & 1).astype(np.int8)
    if m <= _BLOCK_BITS:
        yield 0, low
        return
    for high in range(1 << (m - _BLOCK_BITS)):
        high_bits = np.array([(high >> b) & 1 for b in range(m - _BLOCK_BITS)],
                             dtype=np.int8)
        bits = np.concatenate([low, np.broadcast_to(high_bits, (block, m - _BLOCK_BITS))],
                              axis=1)
        yield high << _BLOCK_BITS, bits


def _incidence(g: MultiGraphInstance) -> np.ndarray:
    inc = np.zeros((g.m, g.n), dtype=np.int8)
    for eid, (u, v, _) in enumerate(g.edges):
        inc[eid, u] += 1
        inc[eid, v] += 1  # a loop lands here twice
    return inc


def _lex_key(mask: int, m: int) -> tuple[int, ...]:
    return tuple(e for e in range(m) if mask >> e & 1)


def exact_max_weight_factor(g: MultiGraphInstance) -> tuple[int, list[int]]:
    """Max-weight subset with ``deg <= f`` everywhere, by full enumeration.

    Ties break to the lexicographically smallest edge-id set.  Guarded to
    ``m <= 24``.
    """
    if g.m > ENUMERATION_LIMIT:
        raise StructuralError(f"oracle limited to m <= {ENUMERATION_LIMIT}, got {g.m}")
    if g.m == 0:
        return 0, []
    inc = _incidence(g)
    w = np.array([e[2] for e in g.edges], dtype=np.int64)
    f = np.array(g.f, dtype=np.int64)
    best_val = 0
    best_masks: list[int] = [0]
    for offset, bits in _subset_blocks(g.m):
        degs = bits.astype(np.int64) @ inc
        ok = np.all(degs <= f, axis=1)
        if not ok.any():
            continue
        vals = bits.astype(np.int64) @ w
        vals = np.where(ok, vals, -1)
        top = int(vals.max())
        if top > best_val:
            best_val = top
            best_masks = [offset + int(i) for i in np.flatnonzero(vals == top)]
        elif top == best_val:
            best_masks.extend(offset + int(i) for i in np.flatnonzero(vals == top))
    witness_mask = min(best_masks, key=lambda mask: _lex_key(mask, g.m))
    return best_val, list(_lex_key(witness_mask, g.m))


def exact_min_weight_cover(g: MultiGraphInstance) -> tuple[int, list[int]] | None:
    """Min-weight subset with ``deg >= f`` everywhere, or None if infeasible."""
    if g.m > ENUMERATION_LIMIT:
        raise StructuralError(f"oracle limited to m <= {ENUMERATION_LIMIT}, got {g.m}")
    if any(g.deg[v] < g.f[v] for v in range(g.n)):
        return None
    if g.m == 0:
        return 0, []
    inc = _incidence(g)
    w = np.array([e[2] for e in g.edges], dtype=np.int64)
    f = np.array(g.f, dtype=np.int64)
    big = int(w.sum()) + 1
    best_val = big
    best_masks: list[int] = []
    for offset, bits in _subset_blocks(g.m):
        degs = bits.astype(np.int64) @ inc
        ok = np.all(degs >= f, axis=1)
        if not ok.any():
            continue
        vals = bits.astype(np.int64) @ w
        vals = np.where(ok, vals, big)
        low = int(vals.min())
        if low < best_val:
            best_val = low
            best_masks = [offset + int(i) for i in np.flatnonzero(vals == low)]
        elif low == best_val:
            best_masks.extend(offset + int(i) for i in np.flatnonzero(vals == low))
    if not best_masks:
        return None
    witness_mask = min(best_masks, key=lambda mask: _lex_key(mask, g.m))
    return best_val, list(_lex_key(witness_mask, g.m))


def exact_max_cardinality_factor(g: MultiGraphInstance) -> int:
    unit = MultiGraphInstance(g.n, [(u, v, 1) for u, v, _ in g.edges], g.f)
    val, _ = exact_max_weight_factor(unit)
    return val


def exact_min_cardinality_cover(g: MultiGraphInstance) -> int | None:
    unit = MultiGraphInstance(g.n, [(u, v, 1) for u, v, _ in g.edges], g.f)
    res = exact_min_weight_cover(unit)
    return None if res is None else res[0]


# -- contracted-graph augmenting walks -------------------------------------


class _View:
    """Shared node-level view of the contracted eligible graph."""

    def __init__(self, g: MultiGraphInstance, F: EdgeSubset,
                 family: BlossomFamily | None, eligible) -> None:
        self.g = g
        self.F = F
        self.family = family
        if callable(eligible):
            self.eligible = [bool(eligible(e)) for e in range(g.m)]
        elif eligible is None:
            self.eligible = [True] * g.m
        else:
            self.eligible = list(eligible)

    def node_of(self, v: int) -> int:
        return self.family.root_of(v) if self.family is not None else v

    def is_singleton(self, nid: int) -> bool:
        return self.family is None or self.family.is_vertex(nid)

    def eta(self, nid: int) -> int | None:
        if self.family is None or self.family.is_vertex(nid):
            return None
        return self.family.node(nid).base_edge

    def heavy(self, nid: int) -> bool:
        if self.family is None or self.family.is_vertex(nid):
            return False
        return self.family.node(nid).heavy

    def deficiency(self, nid: int) -> int:
        if self.is_singleton(nid):
            return self.g.f[nid] - self.F.deg_f[nid]
        beta = self.family.base_vertex_of(nid)
        return self.g.f[beta] - self.F.deg_f[beta]

    def node_vertices(self, nid: int):
        if self.is_singleton(nid):
            return (nid,)
        return self.family.vertices_of(nid)

    def incident(self, nid: int):
        """(eid, other_node) for eligible contracted edges at node nid.

        Loops at singleton nodes appear once (other_node == nid); edges with
        both endpoints inside a nontrivial node are invisible.
        """
        out = []
        seen_loops = set()
        for v in self.node_vertices(nid):
            for eid, other, side in self.g.adjacency[v]:
                if not self.eligible[eid]:
                    continue
                other_node = self.node_of(other)
                if other_node == nid:
                    if self.is_singleton(nid) and self.g.is_loop(eid) and eid not in seen_loops:
                        seen_loops.add(eid)
                        out.append((eid, nid))
                    continue
                out.append((eid, other_node))
        return out

    def alternates(self, nid: int, e_in: int, e_out: int) -> bool:
        """Interior alternation at a node: type flip for singletons, base-edge
        membership for blossoms."""
        if self.is_singleton(nid):
            return (e_in in self.F) != (e_out in self.F)
        eta = self.eta(nid)
        if eta is None:
            return False
        return (e_in == eta) != (e_out == eta)

    def open_start_ok(self, nid: int, first_edge: int) -> bool:
        if self.deficiency(nid) < 1:
            return False
        if self.is_singleton(nid):
            return first_edge not in self.F
        return not self.heavy(nid)

    def open_end_ok(self, nid: int, last_edge: int) -> bool:
        return self.open_start_ok(nid, last_edge)


def enumerate_augmenting_walks(g: MultiGraphInstance, F: EdgeSubset,
                               family: BlossomFamily | None, eligible,
                               max_len: int) -> list[tuple[int, ...]]:
    """All augmenting walks (edge-id tuples) of length <= max_len in the
    contracted eligible graph, checked against the three walk requirements."""
    view = _View(g, F, family, eligible)
    nodes = sorted({view.node_of(v) for v in range(g.n)})
    walks: list[tuple[int, ...]] = []

    def extend(start: int, nid: int, path: list[int], last_edge: int) -> None:
        # can the walk legally end here?
        if nid == start:
            if (view.is_singleton(nid) and view.deficiency(nid) >= 2
                    and path[0] not in F and last_edge not in F):
                walks.append(tuple(path))
        elif view.open_end_ok(nid, last_edge):
            walks.append(tuple(path))
        if len(path) >= max_len:
            return
        used = set(path)
        for eid, other in view.incident(nid):
            if eid in used:
                continue
            if not view.alternates(nid, last_edge, eid):
                continue
            path.append(eid)
            extend(start, other, path, eid)
            path.pop()

    for start in nodes:
        if view.deficiency(start) < 1:
            continue
        for eid, other in view.incident(start):
            if not view.open_start_ok(start, eid):
                continue
            extend(start, other, [eid], eid)
    return walks


def has_augmenting_walk(g: MultiGraphInstance, F: EdgeSubset,
                        family: BlossomFamily | None, eligible) -> bool:
    """Existence check via memoized search over (start, node, used-edge-mask,
    entry-context) states; exponential only in the eligible edge count."""
    view = _View(g, F, family, eligible)
    elig_ids = [e for e in range(g.m) if view.eligible[e]]
    if not elig_ids:
        return False
    bit = {e: 1 << i for i, e in enumerate(elig_ids)}
    nodes = sorted({view.node_of(v) for v in range(g.n)})
    starts = [nid for nid in nodes if view.deficiency(nid) >= 1]

    for start in starts:
        seen: set[tuple[int, int, bool]] = set()
        stack: list[tuple[int, int, int]] = []  # (node, mask, last_edge)
        for eid, other in view.incident(start):
            if view.open_start_ok(start, eid):
                stack.append((other, bit[eid], eid))
        while stack:
            nid, mask, last = stack.pop()
            if nid == start:
                if (view.is_singleton(nid) and view.deficiency(nid) >= 2
                        and last not in F):
                    # first edge already validated unmatched at start
                    return True
            elif view.open_end_ok(nid, last):
                return True
            key = (nid, mask, last in F if view.is_singleton(nid)
                   else last == view.eta(nid))
            if key in seen:
                continue
            seen.add(key)
            for eid, other in view.incident(nid):
                if mask & bit[eid]:
                    continue
                if not view.alternates(nid, last, eid):
                    continue
                stack.append((other, mask | bit[eid], eid))
    return False
