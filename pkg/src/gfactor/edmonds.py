"""One round of dual-guided search: augment, adjust duals, dissolve blossoms.

All quantities live on an exact integer grid of half-delta units fixed per
solve.  Eligibility is an exact equality test against the aggregated dual, so
it is precomputed per iteration and frozen while the walk search runs
(augmented edges are excluded by state, not by re-evaluation).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .blossoms import BlossomFamily
from .certificates import (assert_search_parity, check_invariant_scaled,
                           check_invariant_uniform, yz_edge_units)
from .multigraph import EdgeSubset, MultiGraphInstance, StructuralError
from .walks import (OUTER, INNER, WalkResult, classify_inner_outer,
                    eligible_for, find_augmenting_walks)


def debug_asserts_enabled() -> bool:
    return os.environ.get("GFACTOR_DEBUG_ASSERT", "") not in ("", "0")


@dataclass
class IterationState:
    g: MultiGraphInstance
    F: EdgeSubset
    family: BlossomFamily
    y: list[int]                        # half-delta units
    delta_units: int                    # current grid step (even)
    units_per_weight: int
    w_eff_units: list[int]              # rounded weights at the current scale
    scaled: bool = False
    scale_index: int = 0
    delta0_units: int = 0
    first_event_scale: list | None = None
    active: list | None = None          # weight-window mask, linear driver
    debug: bool = False
    stats: dict = field(default_factory=lambda: {
        "iterations": 0, "augmentations": 0, "contractions": 0,
        "dissolutions": 0, "edge_scans": 0, "find_aw_invocations": 0,
        "guard_skips": 0, "y_mass_removed": 0})
    hooks: object | None = None

    def unsaturated(self) -> list[int]:
        return [v for v in range(self.g.n)
                if self.F.deg_f[v] < self.g.f[v]]

    def unsaturated_y(self) -> int | None:
        levels = {self.y[v] for v in self.unsaturated()}
        if not levels:
            return None
        if len(levels) != 1:
            raise StructuralError(f"unsaturated y-values diverged: {sorted(levels)}")
        return levels.pop()


@dataclass
class SearchSetS:
    outer_nodes: set[int]
    inner_nodes: set[int]
    v_out: set[int]
    v_in: set[int]


@dataclass
class IterationReport:
    done: bool
    augmentations: int = 0
    contractions: int = 0
    dissolutions: int = 0
    outer_count: int = 0
    inner_count: int = 0


# -- eligibility -------------------------------------------------------------


def is_eligible_uniform(eid: int, state: IterationState) -> bool:
    """Blossom structural edges always; otherwise an exact equality:
    unmatched at w - delta, matched at w."""
    if eid in state.family.structural_edges:
        return True
    agg = yz_edge_units(state.g, state.family, state.F, state.y, eid)
    w = state.w_eff_units[eid]
    if state.F.member[eid]:
        return agg == w
    return agg == w - state.delta_units


def is_eligible_scaled(eid: int, state: IterationState) -> bool:
    """Matched edges are eligible at any nonnegative multiple of the grid step
    above the rounded weight; unmatched edges only at exactly one step below."""
    if eid in state.family.structural_edges:
        return True
    agg = yz_edge_units(state.g, state.family, state.F, state.y, eid)
    w = state.w_eff_units[eid]
    if state.F.member[eid]:
        diff = agg - w
        return diff >= 0 and diff % state.delta_units == 0
    return agg == w - state.delta_units


def eligible_mask(state: IterationState) -> list[bool]:
    test = is_eligible_scaled if state.scaled else is_eligible_uniform
    mask = [test(e, state) for e in range(state.g.m)]
    if state.active is not None:
        mask = [m and a for m, a in zip(mask, state.active)]
    return mask


# -- reachability and labels ---------------------------------------------------


def compute_search_set(state: IterationState, mask: list[bool] | None = None) -> SearchSetS:
    """Nodes reachable from unsaturated roots by eligible alternating walks,
    labeled inner/outer.  Runs on a state already free of augmenting walks,
    so a label conflict or an open augmentation is a structural failure."""
    g, F, fam = state.g, state.F, state.family
    if mask is None:
        mask = eligible_mask(state)
    labels: dict[int, int] = {}
    queue: list[int] = []
    for v in range(g.n):
        if g.f[v] - F.deg_f[v] <= 0:
            continue
        nid = fam.root_of(v)
        if fam.base_vertex_of(nid) != v:
            continue
        if not fam.is_vertex(nid) and fam.node(nid).heavy:
            continue
        if nid not in labels:
            labels[nid] = OUTER
            queue.append(nid)
    while queue:
        nid = queue.pop()
        label = labels[nid]
        for eid, from_v, other_v in _node_edges(state, nid):
            if not mask[eid]:
                continue
            if not eligible_for(fam, nid, label, eid, F):
                continue
            mid = fam.root_of(other_v)
            if mid == nid:
                continue
            child_label = classify_inner_outer(fam, mid, eid, F)
            prev = labels.get(mid)
            if prev is None:
                beta = fam.base_vertex_of(mid)
                if g.f[beta] - F.deg_f[beta] > 0:
                    # reaching an unsaturated terminal here means the
                    # augmentation step missed a walk
                    terminal = ((eid not in F) if fam.is_vertex(mid)
                                else not fam.node(mid).heavy)
                    if terminal:
                        raise StructuralError(
                            f"augmenting walk into node {mid} survived augmentation")
                labels[mid] = child_label
                queue.append(mid)
            elif prev != child_label:
                raise StructuralError(
                    f"node {mid} reachable as both inner and outer; "
                    "augmentation step left a reachable blossom or walk")
    outer = {nid for nid, lab in labels.items() if lab == OUTER}
    inner = {nid for nid, lab in labels.items() if lab == INNER}
    v_out = {v for nid in outer for v in fam.vertices_of(nid)}
    v_in = {v for nid in inner for v in fam.vertices_of(nid)}
    return SearchSetS(outer, inner, v_out, v_in)


def _node_edges(state: IterationState, nid: int):
    g, fam = state.g, state.family
    verts = fam.vertices_of(nid)
    for v in verts:
        for eid, other, side in g.adjacency[v]:
            if other in verts:
                # only a loop at a singleton node survives contraction
                if fam.is_vertex(nid) and g.is_loop(eid) and side == 0:
                    yield eid, v, other
                continue
            yield eid, v, other


# -- the iteration -------------------------------------------------------------


def run_iteration(state: IterationState, stop_units: int = 0) -> IterationReport:
    """Augment along a maximal eligible walk set, adjust duals by half a step
    over the reachable set, then dissolve spent root blossoms.

    Returns ``done=True`` (no mutation) once every unsaturated vertex's dual
    has reached ``stop_units`` or saturation is complete.
    """
    level = state.unsaturated_y()
    if level is None or level <= stop_units:
        return IterationReport(done=True)
    state.stats["iterations"] += 1

    report = IterationReport(done=False)
    rounds = 0
    while True:
        mask = eligible_mask(state)
        result = find_augmenting_walks(state.g, state.F, state.family, mask,
                                       debug=state.debug)
        _absorb_walk_stats(state, result)
        report.augmentations += len(result.walks)
        report.contractions += len(result.new_blossoms)
        if result.walks:
            # rematching freezes walk edges out of the eligible graph; one
            # more pass collects the blossoms reachable in the new state and
            # must not find further walks
            mask = eligible_mask(state)
            again = find_augmenting_walks(state.g, state.F, state.family, mask,
                                          debug=state.debug)
            _absorb_walk_stats(state, again)
            if again.walks:
                raise StructuralError("augmenting walks survived the augmentation step")
            report.contractions += len(again.new_blossoms)
        sset = compute_search_set(state, mask)
        # a zero-dual root blossom that the fresh search can only enter away
        # from its base edge cannot absorb a decrement; it dissolves now and
        # the augmentation step reruns on the exposed structure
        stale = [nd for nd in state.family.root_blossoms()
                 if nd.z == 0 and nd.id in sset.inner_nodes]
        if not stale:
            break
        for nd in stale:
            state.family.dissolve_root(nd.id)
            state.stats["dissolutions"] += 1
            report.dissolutions += 1
        state.family.flags.append(
            f"dissolved {len(stale)} zero-dual inner root blossom(s) mid-iteration")
        rounds += 1
        if rounds > state.g.m + state.g.n:
            raise StructuralError("augmentation step failed to stabilize")
    if state.hooks is not None and hasattr(state.hooks, "post_find_aw"):
        state.hooks.post_find_aw(state, mask)
    if state.debug:
        assert_search_parity(state.g, state.y, sset.v_out | sset.v_in,
                             state.delta_units)
    half = state.delta_units // 2
    for v in sset.v_out:
        state.y[v] -= half
    for v in sset.v_in:
        state.y[v] += half
    state.stats["y_mass_removed"] += half * len(sset.v_out) - half * len(sset.v_in)
    for nd in state.family.root_blossoms():
        if nd.id in sset.outer_nodes:
            nd.z += state.delta_units
        elif nd.id in sset.inner_nodes:
            if nd.z < state.delta_units:
                raise StructuralError(
                    f"blossom {nd.id} z={nd.z} would go negative in dual adjustment")
            nd.z -= state.delta_units
    report.outer_count = len(sset.v_out)
    report.inner_count = len(sset.v_in)

    report.dissolutions += _dissolve_spent_roots(state)

    if state.debug:
        _rescan_invariant(state)
    if state.hooks is not None and hasattr(state.hooks, "post_iteration"):
        state.hooks.post_iteration(state)
    return report


def _absorb_walk_stats(state: IterationState, result: WalkResult) -> None:
    state.stats["augmentations"] += len(result.walks)
    state.stats["contractions"] += len(result.new_blossoms)
    state.stats["edge_scans"] += result.edge_scans
    state.stats["find_aw_invocations"] += 1
    state.stats["guard_skips"] += result.guard_skips
    if state.first_event_scale is not None:
        for walk in result.walks:
            for eid in walk.edges:
                if state.first_event_scale[eid] is None:
                    state.first_event_scale[eid] = state.scale_index
        for bid in result.new_blossoms:
            for eid in state.family.node(bid).cycle:
                if state.first_event_scale[eid] is None:
                    state.first_event_scale[eid] = state.scale_index


def _dissolve_spent_roots(state: IterationState) -> int:
    count = 0
    changed = True
    while changed:
        changed = False
        for nd in state.family.root_blossoms():
            if nd.z == 0:
                state.family.dissolve_root(nd.id)
                state.stats["dissolutions"] += 1
                count += 1
                changed = True
    return count


def _rescan_invariant(state: IterationState) -> None:
    if state.scaled:
        failures = check_invariant_scaled(
            state.g, state.F, state.family, state.y, state.delta_units,
            state.w_eff_units, state.first_event_scale, state.scale_index,
            state.delta0_units, state.active)
    else:
        failures = check_invariant_uniform(
            state.g, state.F, state.family, state.y, state.delta_units,
            state.units_per_weight)
    if failures:
        raise StructuralError("invariant rescan failed: " + "; ".join(failures[:4]))
