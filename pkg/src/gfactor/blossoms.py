"""Nested blossoms for degree-constrained matching.

A blossom is a closed walk over child blossoms/singletons with a base vertex
and an optional base edge; the family is laminar.  Node ids below ``g.n`` are
singleton vertices, ids from ``g.n`` upward are nontrivial blossoms.  Only the
topmost live blossom containing a vertex is "contracted" from the search's
point of view; ``root_of`` resolves that node.

Alternating-walk extraction follows the recursive even/odd walk construction:
for every vertex ``v`` of a blossom ``B`` there is an alternating walk of
either parity from the base to ``v`` inside ``B``'s own edges, whose first
edge alternates with the base edge when one exists.
"""

from __future__ import annotations

from .multigraph import EdgeSubset, MultiGraphInstance, StructuralError

MATCHED = True
UNMATCHED = False


class BlossomNode:
    __slots__ = (
        "id", "children", "cycle", "base_vertex", "base_edge",
        "heavy", "z", "parent", "alive", "vertices",
    )

    def __init__(self, bid: int, children: list[int], cycle: list[int],
                 base_vertex: int, base_edge: int | None, heavy: bool,
                 vertices: frozenset[int]) -> None:
        self.id = bid
        self.children = children
        self.cycle = cycle
        self.base_vertex = base_vertex
        self.base_edge = base_edge
        self.heavy = heavy
        self.z = 0                     # half-delta units, kept even
        self.parent: int | None = None
        self.alive = True
        self.vertices = vertices

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (f"BlossomNode({self.id}, verts={sorted(self.vertices)}, "
                f"beta={self.base_vertex}, eta={self.base_edge}, "
                f"heavy={self.heavy}, z={self.z})")


class BlossomFamily:
    """Laminar family of live blossoms over a fixed instance.

    ``root_of(v)`` walks parent pointers from the singleton upward, memoized
    per dissolution generation: contractions only ever add a node above the
    current top, so caches stay valid until a dissolution invalidates them.
    """

    def __init__(self, g: MultiGraphInstance) -> None:
        self.g = g
        self.nodes: dict[int, BlossomNode] = {}
        self._next_id = g.n
        self._vertex_top: list[int | None] = [None] * g.n
        self._cache_gen = [0] * g.n
        self._gen = 1
        self._vertex_parent: list[int | None] = [None] * g.n
        self.structural_edges: set[int] = set()
        self.flags: list[str] = []

    # -- queries ---------------------------------------------------------

    def is_vertex(self, nid: int) -> bool:
        return nid < self.g.n

    def node(self, bid: int) -> BlossomNode:
        try:
            nd = self.nodes[bid]
        except KeyError:
            raise StructuralError(f"unknown blossom id {bid}") from None
        return nd

    def parent_of(self, nid: int) -> int | None:
        if nid < self.g.n:
            return self._vertex_parent[nid]
        return self.nodes[nid].parent

    def root_of(self, v: int) -> int:
        """Topmost live node containing vertex ``v`` (``v`` itself if none)."""
        if not (0 <= v < self.g.n):
            raise StructuralError(f"vertex {v} out of range")
        if self._cache_gen[v] == self._gen and self._vertex_top[v] is not None:
            start: int | None = self._vertex_top[v]
        else:
            start = v
        cur = start
        while True:
            parent = self._vertex_parent[cur] if cur < self.g.n else self.nodes[cur].parent
            if parent is None:
                break
            cur = parent
        self._vertex_top[v] = cur
        self._cache_gen[v] = self._gen
        return cur

    def vertices_of(self, nid: int) -> frozenset[int]:
        if nid < self.g.n:
            return frozenset((nid,))
        return self.nodes[nid].vertices

    def base_vertex_of(self, nid: int) -> int:
        return nid if nid < self.g.n else self.nodes[nid].base_vertex

    def base_edge_of(self, nid: int) -> int | None:
        return None if nid < self.g.n else self.nodes[nid].base_edge

    def is_heavy(self, nid: int) -> bool:
        return False if nid < self.g.n else self.nodes[nid].heavy

    def live_blossoms(self) -> list[BlossomNode]:
        return [nd for nd in self.nodes.values() if nd.alive]

    def root_blossoms(self) -> list[BlossomNode]:
        return [nd for nd in self.nodes.values() if nd.alive and nd.parent is None]

    def ancestor_chain(self, v: int) -> list[BlossomNode]:
        """Live blossoms containing vertex ``v``, innermost first."""
        chain = []
        cur = self._vertex_parent[v]
        while cur is not None:
            nd = self.nodes[cur]
            chain.append(nd)
            cur = nd.parent
        return chain

    def depth_order(self) -> list[BlossomNode]:
        """Live blossoms sorted deepest-first (children before parents)."""
        depth: dict[int, int] = {}

        def d(nid: int) -> int:
            if nid in depth:
                return depth[nid]
            p = self.nodes[nid].parent
            depth[nid] = 0 if p is None else d(p) + 1
            return depth[nid]

        live = self.live_blossoms()
        for nd in live:
            d(nd.id)
        return sorted(live, key=lambda nd: -depth[nd.id])

    # -- structure edits -------------------------------------------------

    def contract(self, children: list[int], cycle: list[int], base_edge: int | None,
                 F: EdgeSubset, validate: bool = True) -> int:
        """Contract a closed walk over root nodes into a new root blossom.

        ``children[0]`` carries the base; for a singleton base child the
        caller picks ``base_edge`` (possibly ``None``), for a nontrivial base
        child the base edge is inherited.  A single child with a loop forms a
        one-node blossom (the loop is its whole closed walk).
        """
        if len(children) < 1 or len(cycle) != len(children):
            raise StructuralError("blossom needs children and one cycle edge per child")
        if len(children) == 1:
            u, v = self.g.endpoints(cycle[0])
            cv = self.vertices_of(children[0])
            if not (u in cv and v in cv):
                raise StructuralError("one-child blossom needs a closed walk inside the child")
        verts: set[int] = set()
        for c in children:
            cv = self.vertices_of(c)
            if verts & cv:
                raise StructuralError("blossom children overlap")
            verts |= cv
        base_child = children[0]
        if self.is_vertex(base_child):
            base_vertex = base_child
            e0_type = cycle[0] in F
            el_type = cycle[-1] in F
            if e0_type != el_type:
                raise StructuralError("base child's two cycle edges differ in type")
            heavy = e0_type
        else:
            nd0 = self.nodes[base_child]
            base_vertex = nd0.base_vertex
            base_edge = nd0.base_edge
            heavy = nd0.heavy
        bid = self._next_id
        self._next_id += 1
        node = BlossomNode(bid, list(children), list(cycle), base_vertex,
                           base_edge, heavy, frozenset(verts))
        if validate:
            self._validate_structure(node, F)
        self.nodes[bid] = node
        for c in children:
            if self.is_vertex(c):
                self._vertex_parent[c] = bid
            else:
                child = self.nodes[c]
                if not child.alive or child.parent is not None:
                    raise StructuralError("children of a new blossom must be live roots")
                child.parent = bid
        self.structural_edges.update(cycle)
        return bid

    def dissolve_root(self, bid: int) -> None:
        nd = self.node(bid)
        if not nd.alive or nd.parent is not None:
            raise StructuralError(f"blossom {bid} is not a live root")
        if nd.z != 0:
            raise StructuralError(f"cannot dissolve blossom {bid} with z={nd.z} > 0")
        nd.alive = False
        for c in nd.children:
            if self.is_vertex(c):
                self._vertex_parent[c] = None
            else:
                self.nodes[c].parent = None
        for e in nd.cycle:
            # keep edges that also appear in a surviving blossom's cycle
            if not any(e in other.cycle for other in self.nodes.values()
                       if other.alive and other.id != bid):
                self.structural_edges.discard(e)
        self._gen += 1

    # -- validation ------------------------------------------------------

    def _validate_structure(self, node: BlossomNode, F: EdgeSubset) -> None:
        g = self.g
        l = len(node.children)
        sets = [self.vertices_of(c) for c in node.children]
        for i, eid in enumerate(node.cycle):
            u, v = g.endpoints(eid)
            a, b = sets[i], sets[(i + 1) % l]
            if not ((u in a and v in b) or (v in a and u in b)):
                raise StructuralError(f"cycle edge {eid} does not connect children {i},{(i + 1) % l}")
        for i in range(1, l):
            c = node.children[i]
            prev_e, next_e = node.cycle[i - 1], node.cycle[i]
            if self.is_vertex(c):
                if (prev_e in F) == (next_e in F):
                    raise StructuralError(f"alternation fails at singleton child {c}")
            else:
                eta = self.nodes[c].base_edge
                if eta is None or eta not in (prev_e, next_e):
                    raise StructuralError(f"interior blossom child {c} lacks a cycle base edge")
        if node.base_edge is not None:
            eid = node.base_edge
            u, v = g.endpoints(eid)
            if node.base_vertex not in (u, v):
                raise StructuralError("base edge not incident to base vertex")
            if u in node.vertices and v in node.vertices:
                raise StructuralError("base edge must leave the blossom")
            if self.is_vertex(node.children[0]):
                if (eid in F) == node.heavy:
                    raise StructuralError("base edge type must oppose the base cycle edges")

    def validate_all(self, F: EdgeSubset) -> None:
        for nd in self.live_blossoms():
            self._validate_structure(nd, F)
        self.assert_laminar()

    def assert_laminar(self) -> None:
        live = self.live_blossoms()
        for i, a in enumerate(live):
            for b in live[i + 1:]:
                inter = a.vertices & b.vertices
                if inter and not (a.vertices <= b.vertices or b.vertices <= a.vertices):
                    raise StructuralError(f"blossoms {a.id} and {b.id} violate laminarity")


# -- derived sets and maturity -------------------------------------------


def i_set(family: BlossomFamily, bid: int, F: EdgeSubset) -> set[int]:
    """``I(B) = delta_F(B) xor eta(B)``: the incident set carrying z."""
    verts = family.vertices_of(bid)
    g = family.g
    out: set[int] = set()
    for v in verts:
        for eid, other, _ in g.adjacency[v]:
            if other in verts:
                continue  # interior edges and loops never cross the boundary
            if eid in F:
                out.add(eid)
    eta = family.base_edge_of(bid)
    if eta is not None:
        out.symmetric_difference_update((eta,))
    return out


def boundary_edges(family: BlossomFamily, bid: int) -> set[int]:
    verts = family.vertices_of(bid)
    g = family.g
    out: set[int] = set()
    for v in verts:
        for eid, other, _ in g.adjacency[v]:
            if other not in verts:
                out.add(eid)
    return out


def is_mature_factor(family: BlossomFamily, bid: int, F: EdgeSubset) -> bool:
    """Saturated interior, base deficiency 0/1, with the light/eta conditions."""
    g = family.g
    nd = family.node(bid)
    beta = nd.base_vertex
    for v in nd.vertices:
        if v != beta and F.deg_f[v] != g.f[v]:
            return False
    defic = g.f[beta] - F.deg_f[beta]
    if defic not in (0, 1):
        return False
    if defic == 1:
        return (not nd.heavy) and nd.base_edge is None
    return nd.base_edge is not None


def is_mature_cover(family: BlossomFamily, bid: int, C: EdgeSubset) -> bool:
    """Cover-side mirror: base surplus 0/1, heavy when surplus is 1."""
    g = family.g
    nd = family.node(bid)
    beta = nd.base_vertex
    for v in nd.vertices:
        if v != beta and C.deg_f[v] != g.f[v]:
            return False
    surplus = C.deg_f[beta] - g.f[beta]
    if surplus not in (0, 1):
        return False
    if surplus == 1:
        return nd.heavy and nd.base_edge is None
    return nd.base_edge is not None


# -- alternating walks inside a blossom ----------------------------------


class _Walk:
    __slots__ = ("edges", "verts")

    def __init__(self, edges: list[int], verts: list[int]) -> None:
        self.edges = edges
        self.verts = verts

    def reversed(self) -> _Walk:
        return _Walk(self.edges[::-1], self.verts[::-1])


def alternating_walk(family: BlossomFamily, bid: int, v: int, parity: int,
                     F: EdgeSubset) -> list[int]:
    """Edge ids of an alternating walk from the base of ``bid`` to ``v``.

    ``parity`` is the requested length mod 2.  The walk stays inside the
    blossom's own edges, alternates matched/unmatched at every interior
    vertex, and its first edge opposes the base edge's type when a base edge
    exists (for base-edge-free blossoms the first edge is unmatched on light
    blossoms and matched on heavy ones).
    """
    for walk in candidate_walks(family, bid, v, F):
        if len(walk.edges) % 2 == parity:
            return walk.edges
    raise StructuralError(f"no parity-{parity} walk to {v} in blossom {bid}")


def alternating_walk_with_vertices(family: BlossomFamily, bid: int, v: int,
                                   parity: int, F: EdgeSubset) -> tuple[list[int], list[int]]:
    for walk in candidate_walks(family, bid, v, F):
        if len(walk.edges) % 2 == parity:
            return walk.edges, walk.verts
    raise StructuralError(f"no parity-{parity} walk to {v} in blossom {bid}")


def _child_containing(family: BlossomFamily, nd: BlossomNode, v: int) -> int:
    for idx, c in enumerate(nd.children):
        if v in family.vertices_of(c):
            return idx
    raise StructuralError(f"vertex {v} not in blossom {nd.id}")


def _edge_end_in(family: BlossomFamily, eid: int, child: int) -> int:
    u, v = family.g.endpoints(eid)
    cv = family.vertices_of(child)
    if u in cv:
        return u
    if v in cv:
        return v
    raise StructuralError(f"edge {eid} not incident to child {child}")


def candidate_walks(family: BlossomFamily, bid: int, target: int,
                    F: EdgeSubset) -> list[_Walk]:
    """Every alternating base-to-target walk the recursive construction can
    produce (both parities and, where the structure leaves freedom, both
    first-edge types).  Consumers pick by parity and junction types."""
    if family.is_vertex(bid):
        if bid != target:
            raise StructuralError(f"vertex {target} is not the singleton {bid}")
        return [_Walk([], [bid])]
    nd = family.node(bid)
    k = _child_containing(family, nd, target)
    l = len(nd.children)
    out: list[_Walk] = []
    seen: set[tuple[int, ...]] = set()

    def add(walk: _Walk) -> None:
        if walk.verts[0] != nd.base_vertex or walk.verts[-1] != target:
            return
        key = tuple(walk.edges)
        if key not in seen:
            seen.add(key)
            out.append(walk)

    if k == 0:
        if family.is_vertex(nd.children[0]):
            add(_Walk([], [nd.children[0]]))
            # both ways around the whole cycle give the odd walks
            for route in (list(range(l - 1, -1, -1)), list(range(l))):
                for walk in _route_variants(family, nd, route, F):
                    add(walk)
        else:
            for walk in candidate_walks(family, nd.children[0], target, F):
                add(walk)
        return out

    routes = [list(range(k)), list(range(l - 1, k - 1, -1))]
    child = nd.children[k]
    if family.is_vertex(child):
        for route in routes:
            for walk in _route_variants(family, nd, route, F):
                add(walk)
        return out
    eta = family.node(child).base_edge
    for route in routes:
        arrival = nd.cycle[route[-1]]
        if eta != arrival:
            continue  # a blossom can only be entered over its base edge
        for prefix in _route_variants(family, nd, route, F):
            for inner in candidate_walks(family, child, target, F):
                if inner.edges and (inner.edges[0] in F) == (arrival in F):
                    continue
                add(_Walk(prefix.edges + inner.edges,
                          prefix.verts + inner.verts[1:]))
    return out


def _route_variants(family: BlossomFamily, nd: BlossomNode, route: list[int],
                    F: EdgeSubset) -> list[_Walk]:
    """Expand a sequence of cycle-edge indices into graph walks.

    Each walk starts at the blossom base and ends just inside the child the
    last route edge reaches.  Interior children are crossed with the unique
    parity their two junctions allow; the first child's crossing is free, so
    up to two variants come back.
    """
    l = len(nd.children)
    children_seq = [0]
    for idx in route:
        cur = children_seq[-1]
        children_seq.append((idx + 1) % l if cur == idx else idx)
    variants = [_Walk([], [nd.base_vertex])]
    prev_edge: int | None = None
    for pos, idx in enumerate(route):
        eid = nd.cycle[idx]
        cur_child = nd.children[children_seq[pos]]
        nxt_child = nd.children[children_seq[pos + 1]]
        entry_next = _edge_end_in(family, eid, nxt_child)
        grown: list[_Walk] = []
        for var in variants:
            exit_v = _edge_end_in(family, eid, cur_child)
            crossings = crossing_walks(family, cur_child, var.verts[-1], exit_v,
                                       prev_edge, eid, F)
            if pos > 0 and len(crossings) > 1:
                crossings = crossings[:1]  # interior junctions pin the choice
            for inner in crossings:
                grown.append(_Walk(var.edges + inner.edges + [eid],
                                   var.verts + inner.verts[1:] + [entry_next]))
        variants = grown
        if not variants:
            return []
        prev_edge = eid
    return variants


def crossing_walks(family: BlossomFamily, child: int, entry_v: int, exit_v: int,
                   entry_edge: int | None, exit_edge: int,
                   F: EdgeSubset) -> list[_Walk]:
    """Walks inside ``child`` from ``entry_v`` to ``exit_v`` that alternate
    with the surrounding edges (``entry_edge`` of ``None`` means the walk
    begins here and only the exit junction constrains it)."""
    if family.is_vertex(child):
        if entry_v != exit_v:
            return []
        if entry_edge is not None and (entry_edge in F) == (exit_edge in F):
            return []
        return [_Walk([], [entry_v])]
    nd = family.node(child)
    eta = nd.base_edge
    results: list[_Walk] = []
    if entry_edge is None or eta == entry_edge:
        if entry_v != nd.base_vertex:
            return []
        for walk in candidate_walks(family, child, exit_v, F):
            if walk.edges:
                if entry_edge is not None and (walk.edges[0] in F) == (entry_edge in F):
                    continue
                if (walk.edges[-1] in F) == (exit_edge in F):
                    continue
            elif entry_edge is not None and (entry_edge in F) == (exit_edge in F):
                continue
            results.append(walk)
    elif eta == exit_edge:
        if exit_v != nd.base_vertex:
            return []
        for walk in candidate_walks(family, child, entry_v, F):
            rev = walk.reversed()
            if rev.edges:
                if (rev.edges[0] in F) == (entry_edge in F):
                    continue
                if (rev.edges[-1] in F) == (exit_edge in F):
                    continue
            elif (entry_edge in F) == (exit_edge in F):
                continue
            results.append(rev)
    return results


# -- walk checking helpers (used by tests and debug assertions) ----------


def walk_is_alternating(g: MultiGraphInstance, edges: list[int], verts: list[int],
                        F: EdgeSubset) -> bool:
    if len(verts) != len(edges) + 1:
        return False
    for i, eid in enumerate(edges):
        u, v = g.endpoints(eid)
        if {u, v} != {verts[i], verts[i + 1]} and not (u == v == verts[i] == verts[i + 1]):
            return False
        if i > 0 and (edges[i - 1] in F) == (eid in F):
            return False
    return len(set(edges)) == len(edges)
