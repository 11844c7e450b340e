"""Batch augmenting-walk search by modified depth-first search.

One invocation finds a maximal set of edge-disjoint augmenting walks in the
eligible contracted graph, contracting new blossoms as it goes, with every
half-edge scanned at most once.  Four moves drive the search: augmentation,
DFS extension, blossom formation, and DFS retraction.

Walks are applied to the edge subset as they are found (the deficiency and
base-edge bookkeeping of later searches depends on it) and returned expanded
to plain graph walks.  Eligibility is a frozen per-edge predicate for the
whole invocation; rematched edges are excluded afterward by their
``augmented`` state rather than by re-evaluating the predicate.

Two cursors per vertex (one over matched, one over unmatched incident
half-edges) realize the "re-scan after relabeling" rule without ever scanning
a half-edge twice: an inner singleton consumes only the matched cursor, an
outer singleton only the unmatched one, and a vertex absorbed into an outer
blossom drains both from wherever they stand.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .blossoms import (BlossomFamily, candidate_walks, crossing_walks,
                       is_mature_factor, walk_is_alternating)
from .multigraph import EdgeSubset, MultiGraphInstance, StructuralError

OUTER = 0
INNER = 1


@dataclass
class ExpandedWalk:
    edges: list[int]
    vertices: list[int]
    closed: bool


@dataclass
class WalkResult:
    walks: list[ExpandedWalk]
    new_blossoms: list[int]
    exhausted_roots: list[int]
    edge_scans: int
    guard_skips: int = 0
    trace: list[tuple] | None = None


def classify_inner_outer(family: BlossomFamily, nid: int, tau: int | None,
                         F: EdgeSubset) -> int:
    """Root -> outer; singleton with matched parent edge -> outer; blossom
    entered over its base edge -> outer; otherwise inner."""
    if tau is None:
        return OUTER
    if family.is_vertex(nid):
        return OUTER if tau in F else INNER
    return OUTER if tau == family.node(nid).base_edge else INNER


def eligible_for(family: BlossomFamily, nid: int, label: int, eid: int,
                 F: EdgeSubset) -> bool:
    """May the search leave node ``nid`` over ``eid``?  (Global eligibility of
    the edge is the caller's business.)"""
    if family.is_vertex(nid):
        return (eid not in F) if label == OUTER else (eid in F)
    eta = family.node(nid).base_edge
    if label == OUTER:
        return eid != eta
    return eta is not None and eid == eta


class _Incarnation:
    __slots__ = ("node", "label", "tau", "parent", "in_tree", "eta_tried", "member_ptr")

    def __init__(self, node: int, label: int, tau: int | None,
                 parent: _Incarnation | None) -> None:
        self.node = node
        self.label = label
        self.tau = tau
        self.parent = parent
        self.in_tree = True
        self.eta_tried = False
        self.member_ptr = 0


class _Search:
    def __init__(self, g: MultiGraphInstance, F: EdgeSubset, family: BlossomFamily,
                 eligible: list[bool], collect_trace: bool = False,
                 debug: bool = False) -> None:
        self.g = g
        self.F = F
        self.fam = family
        self.eligible = eligible
        self.debug = debug
        self.trace: list[tuple] | None = [] if collect_trace else None
        self.explored = bytearray(2 * g.m)
        self.augmented = bytearray(g.m)
        self.scans = 0
        self.guard_skips = 0
        # static per-type adjacency (state changes go through `augmented`)
        self.adj_by_type: list[list[list[tuple[int, int, int]]]] = [
            [[] for _ in range(g.n)], [[] for _ in range(g.n)]]
        for v in range(g.n):
            for eid, other, side in g.adjacency[v]:
                self.adj_by_type[1 if F.member[eid] else 0][v].append((eid, other, side))
        self.cursor = [[0] * g.n, [0] * g.n]
        self.blossom_in_tree: set[int] = set()
        self.exhausted_root_nodes: set[int] = set()
        # active-tree state
        self.active: list[_Incarnation] = []
        self.node_incs: dict[int, list[_Incarnation]] = {}
        self.root_inc: _Incarnation | None = None
        self.walks: list[ExpandedWalk] = []
        self.new_blossoms: list[int] = []
        self.exhausted_roots: list[int] = []

    # -- bookkeeping helpers ------------------------------------------------

    def _note(self, *event) -> None:
        if self.trace is not None:
            self.trace.append(event)

    def deficiency_node(self, nid: int) -> int:
        beta = self.fam.base_vertex_of(nid)
        return self.g.f[beta] - self.F.deg_f[beta]

    def _unsaturated_node(self, nid: int) -> bool:
        return self.deficiency_node(nid) > 0

    def _half(self, eid: int, side: int) -> int:
        return 2 * eid + side

    # -- cursor scanning ------------------------------------------------

    def _peek(self, v: int, kind: int) -> tuple[int, int, int] | None:
        lst = self.adj_by_type[kind][v]
        cur = self.cursor[kind]
        while cur[v] < len(lst):
            eid, other, side = lst[cur[v]]
            if self.augmented[eid] or self.explored[self._half(eid, side)]:
                cur[v] += 1
                continue
            return lst[cur[v]]
        return None

    def _consume(self, v: int, kind: int) -> tuple[int, int, int]:
        item = self.adj_by_type[kind][v][self.cursor[kind][v]]
        self.cursor[kind][v] += 1
        eid, other, side = item
        self.explored[self._half(eid, side)] = 1
        self.scans += 1
        if self.scans > 2 * self.g.m:
            raise StructuralError("edge-scan budget 2m exceeded")
        return item

    def _next_scan(self, inc: _Incarnation) -> tuple[int, int, int, int] | None:
        """Next (eid, from_vertex, other_vertex, side) eligible-for the tip."""
        fam = self.fam
        nid = inc.node
        if fam.is_vertex(nid):
            kind = 0 if inc.label == OUTER else 1
            item = self._peek(nid, kind)
            if item is None:
                return None
            eid, other, side = self._consume(nid, kind)
            return eid, nid, other, side
        node = fam.node(nid)
        if inc.label == INNER:
            eta = node.base_edge
            if eta is None or inc.eta_tried:
                return None
            inc.eta_tried = True
            if self.augmented[eta]:
                return None
            u, v = self.g.endpoints(eta)
            from_v = u if u == node.base_vertex else v
            other = v if from_v == u else u
            side = 0 if from_v == u else 1
            half = self._half(eta, side)
            if self.explored[half]:
                return None
            self.explored[half] = 1
            self.scans += 1
            return eta, from_v, other, side
        # outer blossom: drain both cursors of every member, skipping eta
        members = sorted(node.vertices)
        while inc.member_ptr < len(members):
            v = members[inc.member_ptr]
            progressed = True
            while progressed:
                progressed = False
                for kind in (0, 1):
                    item = self._peek(v, kind)
                    if item is None:
                        continue
                    eid, other, side = item
                    if eid == node.base_edge:
                        self.cursor[kind][v] += 1  # skip, never scan eta outward
                        progressed = True
                        continue
                    self._consume(v, kind)
                    return eid, v, other, side
            inc.member_ptr += 1
        return None

    # -- tree management --------------------------------------------------

    def _push(self, node: int, label: int, tau: int | None,
              parent: _Incarnation | None) -> _Incarnation:
        inc = _Incarnation(node, label, tau, parent)
        self.active.append(inc)
        self.node_incs.setdefault(node, []).append(inc)
        if not self.fam.is_vertex(node):
            self.blossom_in_tree.add(node)
        return inc

    def _teardown_tree(self) -> None:
        self.active.clear()
        self.node_incs.clear()
        self.root_inc = None

    def _active_tree_has(self, nid: int) -> bool:
        return bool(self.node_incs.get(nid))

    def _live_incs(self, nid: int) -> list[_Incarnation]:
        return [inc for inc in self.node_incs.get(nid, []) if inc.in_tree]

    def _path_between(self, a: _Incarnation, b: _Incarnation
                      ) -> tuple[_Incarnation, list[_Incarnation], list[_Incarnation]]:
        """Tree path endpoints -> (lca, branch from lca to a, branch to b)."""
        seen = {}
        cur = a
        while cur is not None:
            seen[id(cur)] = cur
            cur = cur.parent
        cur = b
        while cur is not None and id(cur) not in seen:
            cur = cur.parent
        if cur is None:
            raise StructuralError("incarnations in different trees")
        lca = cur
        branch_a: list[_Incarnation] = []
        node = a
        while node is not lca:
            branch_a.append(node)
            node = node.parent
        branch_a.reverse()
        branch_b: list[_Incarnation] = []
        node = b
        while node is not lca:
            branch_b.append(node)
            node = node.parent
        branch_b.reverse()
        return lca, branch_a, branch_b

    # -- main loop ----------------------------------------------------------

    def run(self) -> WalkResult:
        g = self.g
        while True:
            candidates = []
            for v in range(g.n):
                if g.f[v] - self.F.deg_f[v] <= 0:
                    continue
                nid = self.fam.root_of(v)
                if self.fam.base_vertex_of(nid) != v:
                    self.fam.flags.append(f"unsaturated non-base vertex {v} in node {nid}")
                    continue
                if nid in self.exhausted_root_nodes:
                    continue
                if not self.fam.is_vertex(nid):
                    nd = self.fam.node(nid)
                    if nd.heavy:
                        self.fam.flags.append(f"unsaturated heavy blossom {nid} cannot root")
                        continue
                candidates.append((v, nid))
            if not candidates:
                break
            _, root = min(candidates)
            self._grow_tree(root)
        return WalkResult(self.walks, self.new_blossoms, self.exhausted_roots,
                          self.scans, self.guard_skips, self.trace)

    def _grow_tree(self, root: int) -> None:
        self.root_inc = self._push(root, OUTER, None, None)
        augmented = False
        while self.active:
            tip = self.active[-1]
            scan = self._next_scan(tip)
            if scan is None:
                # retraction: off the active walk, but still in the tree
                self._note("retract", tip.node)
                self.active.pop()
                continue
            eid, from_v, other_v, side = scan
            if not self.eligible[eid]:
                continue
            if self._handle_edge(tip, eid, from_v, other_v):
                augmented = True
                break
        if not augmented:
            self.exhausted_root_nodes.add(self.fam.root_of(
                self.fam.base_vertex_of(root)))
            self.exhausted_roots.append(root)
            self._note("exhaust", root)
        self._teardown_tree()

    def _handle_edge(self, tip: _Incarnation, eid: int, from_v: int,
                     other_v: int) -> bool:
        """Dispatch one scanned eligible edge; True iff a walk was applied."""
        fam = self.fam
        nu = fam.root_of(from_v)
        nv = fam.root_of(other_v)
        if nu != tip.node:
            raise StructuralError("scan origin left the tip node")
        if nv == nu and not fam.is_vertex(nv):
            return False  # edge inside a contracted blossom
        self._note("scan", eid)

        is_tree_edge_active = any(inc.tau == eid for inc in self.active)

        # augmentation, open walk: unmatched edge (any type for a light
        # blossom) into an unsaturated terminal outside the active tree
        if not self._active_tree_has(nv) and self._unsaturated_node(nv):
            terminal_ok = (eid not in self.F) if fam.is_vertex(nv) else (not fam.node(nv).heavy)
            if terminal_ok:
                self._augment_open(tip, eid, nv)
                return True

        # augmentation, closed walk back to the root singleton
        root = self.root_inc
        if (nv == root.node and fam.is_vertex(root.node)
                and self.deficiency_node(root.node) >= 2
                and eid not in self.F and not is_tree_edge_active):
            self._augment_closed(tip, eid)
            return True

        # blossom formation: the edge is also usable from some incarnation of
        # the target node inside the active tree
        if self._active_tree_has(nv) and not is_tree_edge_active:
            target = None
            for inc in reversed(self._live_incs(nv)):
                if eligible_for(fam, nv, inc.label, eid, self.F):
                    target = inc
                    break
            if target is not None:
                outcome = self._form_blossom(tip, target, eid)
                if outcome != "skip":
                    return outcome == "augment"
                # a skipped formation still leaves the edge usable as a plain
                # extension (walks may revisit singletons)

        # DFS extension
        if fam.is_vertex(nv) or nv not in self.blossom_in_tree:
            label = classify_inner_outer(fam, nv, eid, self.F)
            self._push(nv, label, eid, tip)
            self._note("extend", eid)
        return False

    # -- augmentation -------------------------------------------------------

    def _walk_incs(self, upto: _Incarnation) -> list[_Incarnation]:
        path = []
        cur = upto
        while cur is not None:
            path.append(cur)
            cur = cur.parent
        path.reverse()
        return path

    def _augment_open(self, tip: _Incarnation, eid: int, terminal: int) -> None:
        incs = self._walk_incs(tip)
        nodes = [inc.node for inc in incs] + [terminal]
        edges = [inc.tau for inc in incs[1:]] + [eid]
        self._apply_walk(nodes, edges, closed=False)

    def _augment_closed(self, tip: _Incarnation, eid: int) -> None:
        incs = self._walk_incs(tip)
        nodes = [inc.node for inc in incs] + [incs[0].node]
        edges = [inc.tau for inc in incs[1:]] + [eid]
        self._apply_walk(nodes, edges, closed=True)

    # -- blossom formation ----------------------------------------------------

    def _form_blossom(self, tip: _Incarnation, target: _Incarnation, eid: int) -> str:
        """Contract the tree cycle closed by ``eid``, or pull an augmenting
        walk out of it when a cycle node still has deficiency.  Returns
        "augment", "blossom", or "skip"."""
        fam = self.fam
        lca, branch_tip, branch_target = self._path_between(tip, target)
        cycle_incs = [lca] + branch_tip + list(reversed(branch_target))
        cycle_edges = ([inc.tau for inc in branch_tip] + [eid]
                       + [inc.tau for inc in reversed(branch_target)])
        node_ids = [inc.node for inc in cycle_incs]
        if (len(set(node_ids)) != len(node_ids)
                or len(set(cycle_edges)) != len(cycle_edges)
                or any(not inc.in_tree for inc in cycle_incs)):
            self.guard_skips += 1
            self._note("guard-dup", eid)
            return "skip"
        # a cycle node with leftover deficiency means an augmenting walk, not
        # a blossom: contracted blossoms must be mature
        for idx in range(len(cycle_incs) - 1, 0, -1):
            nid = node_ids[idx]
            if self._unsaturated_node(nid):
                if not fam.is_vertex(nid) and fam.node(nid).heavy:
                    fam.flags.append(f"unsaturated heavy blossom {nid} on a cycle")
                    continue
                if self._augment_through_cycle(lca, cycle_incs, cycle_edges, idx):
                    return "augment"
                return "skip"
        if self._unsaturated_node(lca.node):
            if fam.is_vertex(lca.node) and self.deficiency_node(lca.node) >= 2:
                return "augment" if self._augment_cycle_only(
                    cycle_incs, cycle_edges) else "skip"
            if lca is not self.root_inc and fam.is_vertex(lca.node):
                return "augment" if self._augment_prefix_plus_cycle(
                    lca, cycle_incs, cycle_edges) else "skip"
            # an unsaturated root (or deficiency-one root blossom) seeds a
            # mature unsaturated blossom with no base edge
        # stale incarnations of member nodes elsewhere on the active walk would
        # leave the walk crossing the new blossom twice; skip those
        member_set = set(node_ids)
        for nid in member_set:
            for inc in self.node_incs.get(nid, []):
                if inc not in cycle_incs and inc in self.active:
                    self.guard_skips += 1
                    self._note("guard-stale", eid)
                    return "skip"
        base_edge = None if lca.tau is None else lca.tau
        if not fam.is_vertex(lca.node):
            base_edge = fam.node(lca.node).base_edge
        bid = fam.contract(node_ids, cycle_edges, base_edge, self.F, validate=True)
        if self.debug and not is_mature_factor(fam, bid, self.F):
            raise StructuralError(f"contracted an immature blossom {bid}")
        self.new_blossoms.append(bid)
        self._note("blossom", eid, bid)
        # splice: the new node replaces the walk suffix from the lca, and any
        # branch hanging off an absorbed incarnation now hangs off the blossom
        new_inc = _Incarnation(bid, OUTER, lca.tau, lca.parent)
        absorbed = set()
        for nid in member_set:
            for inc in self.node_incs.get(nid, []):
                inc.in_tree = False
                absorbed.add(id(inc))
        for incs in self.node_incs.values():
            for inc in incs:
                if inc.parent is not None and id(inc.parent) in absorbed:
                    inc.parent = new_inc
        while self.active and self.active[-1] is not lca:
            self.active.pop()
        if self.active:
            self.active.pop()
        self.active.append(new_inc)
        self.node_incs.setdefault(bid, []).append(new_inc)
        self.blossom_in_tree.add(bid)
        if lca is self.root_inc:
            self.root_inc = new_inc
        return False

    def _cycle_route_to(self, cycle_incs: list[_Incarnation],
                        cycle_edges: list[int], idx: int, arrive_via_next: bool
                        ) -> tuple[list[int], list[int]]:
        """Nodes and edges from cycle position 0 to position idx, going
        forward (arriving via edge idx-1) or backward (via edge idx)."""
        l = len(cycle_incs)
        if not arrive_via_next:
            nodes = [inc.node for inc in cycle_incs[:idx + 1]]
            edges = cycle_edges[:idx]
        else:
            nodes = ([cycle_incs[0].node]
                     + [cycle_incs[j].node for j in range(l - 1, idx - 1, -1)])
            edges = [cycle_edges[j] for j in range(l - 1, idx - 1, -1)]
        return nodes, edges

    def _augment_through_cycle(self, lca: _Incarnation,
                               cycle_incs: list[_Incarnation],
                               cycle_edges: list[int], idx: int) -> bool:
        """Open walk: root ... lca, then around the cycle to the unsaturated
        node at position idx, arriving away from its tree edge."""
        target = cycle_incs[idx]
        prev_edge = cycle_edges[idx - 1]
        arrive_via_next = (prev_edge == target.tau)
        route_nodes, route_edges = self._cycle_route_to(
            cycle_incs, cycle_edges, idx, arrive_via_next)
        prefix = self._walk_incs(lca)
        nodes = [inc.node for inc in prefix] + route_nodes[1:]
        edges = [inc.tau for inc in prefix[1:]] + route_edges
        return self._apply_guard_walk(nodes, edges)

    def _augment_cycle_only(self, cycle_incs: list[_Incarnation],
                            cycle_edges: list[int]) -> bool:
        """Closed walk around the whole cycle at an unsaturated lca singleton
        with deficiency at least two."""
        nodes = [inc.node for inc in cycle_incs] + [cycle_incs[0].node]
        self._apply_walk(nodes, list(cycle_edges), closed=True)
        return True

    def _augment_prefix_plus_cycle(self, lca: _Incarnation,
                                   cycle_incs: list[_Incarnation],
                                   cycle_edges: list[int]) -> bool:
        """Open walk root ... lca followed by the full cycle back to the lca
        (deficiency-one singleton in the middle of the tree)."""
        prefix = self._walk_incs(lca)
        nodes = ([inc.node for inc in prefix]
                 + [inc.node for inc in cycle_incs[1:]] + [lca.node])
        edges = [inc.tau for inc in prefix[1:]] + list(cycle_edges)
        return self._apply_guard_walk(nodes, edges)

    def _apply_guard_walk(self, nodes: list[int], edges: list[int]) -> bool:
        """Validate and apply a walk derived from an immature cycle: edges
        distinct, blossom nodes visited once, and a start that doubles as the
        end needs enough deficiency to absorb both rematches."""
        fam = self.fam
        if len(set(edges)) != len(edges):
            self.guard_skips += 1
            return False
        counts: dict[int, int] = {}
        for nid in nodes:
            counts[nid] = counts.get(nid, 0) + 1
        if any(c > 1 for nid, c in counts.items() if not fam.is_vertex(nid)):
            self.guard_skips += 1
            return False
        closed = nodes[0] == nodes[-1]
        if closed and (not fam.is_vertex(nodes[0])
                       or self.deficiency_node(nodes[0]) < 2):
            self.guard_skips += 1
            return False
        self._apply_walk(nodes, edges, closed=closed)
        return True

    # -- expansion and application -------------------------------------------

    def _apply_walk(self, nodes: list[int], edges: list[int], closed: bool) -> None:
        expanded = expand_contracted_walk(self.g, self.fam, self.F, nodes, edges, closed)
        before_def = None
        if self.debug:
            before_def = sum(max(self.g.f[v] - self.F.deg_f[v], 0)
                             for v in range(self.g.n))
            isets_before = {nd.id: _iset_live(self.fam, nd.id, self.F)
                            for nd in self.fam.live_blossoms()}
        rematch_walk(self.g, self.fam, self.F, expanded)
        for eid in expanded.edges:
            self.augmented[eid] = 1
        self.walks.append(expanded)
        self._note("augment", tuple(expanded.edges))
        if self.debug:
            after_def = sum(max(self.g.f[v] - self.F.deg_f[v], 0)
                            for v in range(self.g.n))
            if after_def != before_def - 2:
                raise StructuralError(
                    f"augmentation changed total deficiency by {after_def - before_def}")
            for nd in self.fam.live_blossoms():
                if _iset_live(self.fam, nd.id, self.F) != isets_before[nd.id]:
                    raise StructuralError(f"I-set of blossom {nd.id} changed")
                if not is_mature_factor(self.fam, nd.id, self.F):
                    raise StructuralError(f"blossom {nd.id} immature after augmentation")


def _iset_live(fam: BlossomFamily, bid: int, F: EdgeSubset) -> frozenset[int]:
    from .blossoms import i_set
    return frozenset(i_set(fam, bid, F))


# -- contracted-walk expansion ----------------------------------------------


def expand_contracted_walk(g: MultiGraphInstance, fam: BlossomFamily,
                           F: EdgeSubset, nodes: list[int], edges: list[int],
                           closed: bool) -> ExpandedWalk:
    """Replace every blossom on a contracted walk by an inner alternating
    walk of the parity its two incident walk edges demand."""
    if len(nodes) != len(edges) + 1:
        raise StructuralError("contracted walk shape mismatch")
    full_edges: list[int] = []
    full_verts: list[int] = []

    def endpoint_in(eid: int, nid: int) -> int:
        u, v = g.endpoints(eid)
        verts = fam.vertices_of(nid)
        if u in verts:
            return u
        if v in verts:
            return v
        raise StructuralError(f"edge {eid} not incident to node {nid}")

    for pos, nid in enumerate(nodes):
        entry = edges[pos - 1] if pos > 0 else None
        exit_e = edges[pos] if pos < len(edges) else None
        if fam.is_vertex(nid):
            vtx = nid
            if pos == 0:
                full_verts.append(vtx)
            if entry is not None and exit_e is not None:
                if (entry in F) == (exit_e in F):
                    raise StructuralError("walk alternation fails at a singleton")
            if entry is None and exit_e is not None and exit_e in F:
                raise StructuralError("walk leaves an unsaturated singleton on a matched edge")
            if exit_e is None and entry is not None and entry in F:
                raise StructuralError("walk ends at a singleton on a matched edge")
            if exit_e is not None:
                full_edges.append(exit_e)
                full_verts.append(endpoint_other_side(g, exit_e, vtx))
            continue
        nd = fam.node(nid)
        if entry is None:
            # unsaturated terminal start: inner walk base -> exit, first edge
            # unmatched so rematching raises the base degree
            exit_v = endpoint_in(exit_e, nid)
            w_edges = w_verts = None
            for cand in candidate_walks(fam, nid, exit_v, F):
                if cand.edges and ((cand.edges[0] in F)
                                   or (cand.edges[-1] in F) == (exit_e in F)):
                    continue
                if not cand.edges and (exit_e in F):
                    continue
                w_edges, w_verts = cand.edges, cand.verts
                break
            if w_edges is None:
                raise StructuralError("no valid walk out of the starting blossom")
            full_verts.extend(w_verts)
            full_edges.extend(w_edges)
            full_edges.append(exit_e)
            full_verts.append(endpoint_other_side(g, exit_e, exit_v))
        elif exit_e is None:
            entry_v = full_verts[-1]
            inner = _terminal_blossom_walk(fam, nid, entry_v, entry, F)
            full_edges.extend(inner[0])
            full_verts.extend(inner[1][1:])
        else:
            entry_v = full_verts[-1]
            exit_v = endpoint_in(exit_e, nid)
            inner = _interior_blossom_walk(fam, nid, entry_v, exit_v, entry, exit_e, F)
            full_edges.extend(inner[0])
            full_verts.extend(inner[1][1:])
            full_edges.append(exit_e)
            full_verts.append(endpoint_other_side(g, exit_e, exit_v))
    if len(set(full_edges)) != len(full_edges):
        raise StructuralError("expanded walk repeats an edge")
    return ExpandedWalk(full_edges, full_verts, closed)


def endpoint_other_side(g: MultiGraphInstance, eid: int, v: int) -> int:
    u, w = g.endpoints(eid)
    if u == w:
        return v
    return w if v == u else u


def _terminal_blossom_walk(fam: BlossomFamily, nid: int, entry_v: int,
                           entry_e: int, F: EdgeSubset) -> tuple[list[int], list[int]]:
    """Walk from the entry vertex to the base, last edge unmatched, first edge
    alternating with the entry edge."""
    for cand in candidate_walks(fam, nid, entry_v, F):
        edges, verts = cand.edges[::-1], cand.verts[::-1]
        if edges:
            if (edges[0] in F) == (entry_e in F) or (edges[-1] in F):
                continue
        elif entry_e in F:
            continue  # the entry edge itself must lower the base deficiency
        return edges, verts
    raise StructuralError("no valid terminal walk into blossom")


def _interior_blossom_walk(fam: BlossomFamily, nid: int, entry_v: int, exit_v: int,
                           entry_e: int, exit_e: int, F: EdgeSubset
                           ) -> tuple[list[int], list[int]]:
    for cand in crossing_walks(fam, nid, entry_v, exit_v, entry_e, exit_e, F):
        return cand.edges, cand.verts
    raise StructuralError("no valid interior crossing of blossom")


# -- rematching --------------------------------------------------------------


def rematch_walk(g: MultiGraphInstance, fam: BlossomFamily, F: EdgeSubset,
                 walk: ExpandedWalk) -> None:
    """Toggle the walk's edges and restore base edges, base vertices, cycle
    orientation, and the light/heavy classification of every touched blossom.

    The new base edge of a crossed blossom is forced: the walk's boundary
    edges at the blossom are the old base edge plus the new one.
    """
    walk_set = set(walk.edges)
    for eid in walk.edges:
        F.toggle(eid)
    for nd in fam.depth_order():
        boundary = set()
        for eid in walk_set:
            u, v = g.endpoints(eid)
            inside_u, inside_v = u in nd.vertices, v in nd.vertices
            if inside_u != inside_v:
                boundary.add(eid)
        if not boundary:
            continue
        old_eta = nd.base_edge
        new_eta_set = boundary.symmetric_difference(
            {old_eta} if old_eta is not None else set())
        if len(new_eta_set) != 1:
            raise StructuralError(
                f"walk crosses blossom {nd.id} boundary {len(boundary)} times")
        new_eta = next(iter(new_eta_set))
        nd.base_edge = new_eta
        u, v = g.endpoints(new_eta)
        nd.base_vertex = u if u in nd.vertices else v
        _rebase(fam, nd)
    for nd in fam.depth_order():
        _refresh_heavy(fam, nd, F)


def _rebase(fam: BlossomFamily, nd) -> None:
    """Rotate the cycle so the child holding the base vertex sits first."""
    for idx, c in enumerate(nd.children):
        if nd.base_vertex in fam.vertices_of(c):
            if idx:
                nd.children = nd.children[idx:] + nd.children[:idx]
                nd.cycle = nd.cycle[idx:] + nd.cycle[:idx]
            return
    raise StructuralError("base vertex fell outside its blossom")


def _refresh_heavy(fam: BlossomFamily, nd, F: EdgeSubset) -> None:
    base_child = nd.children[0]
    if fam.is_vertex(base_child):
        t0, t1 = nd.cycle[0] in F, nd.cycle[-1] in F
        if t0 != t1:
            raise StructuralError(f"blossom {nd.id} base edges disagree after rematch")
        nd.heavy = t0
    else:
        nd.heavy = fam.node(base_child).heavy


# -- public entry -------------------------------------------------------------


def find_augmenting_walks(g: MultiGraphInstance, F: EdgeSubset,
                          family: BlossomFamily, eligible,
                          collect_trace: bool = False,
                          debug: bool = False) -> WalkResult:
    """Find and apply a maximal set of edge-disjoint augmenting walks.

    ``eligible`` is a per-edge boolean list or predicate, frozen for the
    invocation.  Input blossoms must be mature.  Returns the applied walks
    (expanded to graph walks), newly contracted blossoms, exhausted roots,
    and the scan counter (hard-capped at 2m).
    """
    if callable(eligible):
        eligible = [bool(eligible(e)) for e in range(g.m)]
    elif eligible is None:
        eligible = [True] * g.m
    else:
        eligible = list(eligible)
    if debug:
        for nd in family.root_blossoms():
            if not is_mature_factor(family, nd.id, F):
                raise StructuralError(f"input blossom {nd.id} immature")
    search = _Search(g, F, family, eligible, collect_trace, debug)
    return search.run()
