"""Arborescence packing via level-by-level edge coloring.

Colors 1..k are threaded through the hierarchy bottom-up. At level 0
every non-source vertex holds all k colors as "breakpoints" (or, if some
vertex has in-degree below k, that vertex immediately certifies a small
cut). Each level then converts breakpoint colors into edge colors in
three steps:

  1. split every vertex's colors into X (stays a breakpoint), Y (parked
     on incoming edges from the newly merged region), and Z (to be wired
     through the component);
  2. a single max-flow per component finds edge-disjoint paths from
     critical-edge budgets to level-edge budgets, one path per Z color,
     whose endpoint becomes that color's leader (a short flow means some
     subset has fewer than k incoming edges, which is a certifying cut);
  3. chain demands connect each color's leader through its breakpoints,
     routed once per level with measured congestion.

Three invariants are re-checked by direct search after every level:
each color can reach every vertex from a colored vertex in its component
(Invariant 1), vertex color counts stay within (i+1) times the critical
degree (Invariant 2), and edge color counts stay within 5 i^2 times the
observed routing factor (Invariant 3, instrumented form). The final
coloring distributes leftover vertex colors over top-level critical
edges, and a DFS per color extracts the arborescences.

Packing is defined for unit-capacity graphs; weighted inputs are
rejected.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .decomp import DEFAULT_PHI, Hierarchy, build_hierarchy
from .errors import (
    InternalError,
    InvariantError,
    ParameterError,
    PropertyOneError,
    UnsupportedGraphError,
)
from .graphcore import (
    DirectedGraph,
    EdgeSet,
    cut_values,
    edges_within,
    reachable_from,
)
from .maxflow import FlowPath, FlowProblem, decompose_paths, max_flow
from .routing import Demand, respecting_check, route
from .seeds import derive_seed

__all__ = [
    "ColorState",
    "CriticalEdges",
    "CutFound",
    "FlowCase",
    "PackingResult",
    "critical_edges",
    "init_base_colors",
    "partition_critical",
    "split_colors",
    "component_flow",
    "chain_demand_pairs",
    "run_level",
    "finalize_coloring",
    "extract_arborescences",
    "pack",
    "check_invariants",
]


@dataclass(frozen=True)
class CriticalEdges:
    """Per-vertex critical incoming edges at one level: edges arriving
    from another component of that level plus higher-level incoming
    edges."""

    level: int
    sets: tuple[frozenset, ...]

    def delta(self, v: int) -> int:
        return len(self.sets[v])


def critical_edges(g: DirectedGraph, hierarchy: Hierarchy, i: int) -> CriticalEdges:
    part = hierarchy.partition(i)
    above = hierarchy.edges_above(i)
    sets: list[set] = [set() for _ in range(g.n)]
    for eid, (u, v, _c) in enumerate(g.edges):
        if part.comp_of[u] != part.comp_of[v] or eid in above:
            sets[v].add(eid)
    return CriticalEdges(i, tuple(frozenset(s) for s in sets))


@dataclass
class ColorState:
    """Color assignments after one level: per-edge and per-vertex color
    sets, plus the cumulative observed routing factor used by the
    instrumented edge-color bound."""

    level: int
    k: int
    edge_colors: dict
    vertex_colors: dict
    route_factor: Fraction
    level_log: tuple = ()


@dataclass(frozen=True)
class CutFound:
    """A certifying cut discovered mid-run; `source_side` contains the
    source and has outgoing capacity below k."""

    source_side: frozenset


@dataclass(frozen=True)
class FlowCase:
    """Successful component flow: one path and one leader per Z color."""

    assignments: Mapping[int, FlowPath]
    leaders: Mapping[int, int]


@dataclass(frozen=True)
class PackingResult:
    """Either k arborescences with their congestion, or a certifying cut
    (source side S with delta(S) < k)."""

    kind: str  # "arborescences" | "cut"
    k: int
    trees: tuple | None = None
    congestion: int | None = None
    cut_vertices: frozenset | None = None
    cut_delta: int | None = None
    levels: int | None = None
    level_log: tuple = ()

    def to_json_dict(self) -> dict:
        data: dict = {"kind": "packing", "k": self.k, "result": self.kind}
        if self.kind == "arborescences":
            data["trees"] = [sorted(t) for t in self.trees]
            data["congestion"] = self.congestion
        else:
            data["cut"] = sorted(self.cut_vertices)
            data["delta"] = self.cut_delta
        if self.levels is not None:
            data["levels"] = self.levels
        data["routing"] = list(self.level_log)
        return data


def init_base_colors(g: DirectedGraph, k: int):
    """Level-0 state: no edge colors, all k colors on every non-source
    vertex. A vertex with in-degree below k yields an immediate cut."""
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}")
    for v in range(g.n):
        if v != g.source and len(g.in_edges(v)) < k:
            return CutFound(frozenset(range(g.n)) - {v})
    colors = frozenset(range(1, k + 1))
    return ColorState(
        level=0,
        k=k,
        edge_colors={e: set() for e in range(g.m)},
        vertex_colors={v: set(colors) for v in range(g.n) if v != g.source},
        route_factor=Fraction(1),
    )


def partition_critical(
    g: DirectedGraph,
    hierarchy: Hierarchy,
    i: int,
    v: int,
    crit_i: CriticalEdges | None = None,
    crit_prev: CriticalEdges | None = None,
) -> tuple[frozenset, frozenset, frozenset]:
    """Split v's level-(i-1) critical incoming edges into (E_X, E_Y, E_Z).

    E_X are the level-i critical edges, E_Y the lower-level incoming
    edges whose tails joined v's component only at level i, and E_Z the
    rest (incoming level-i edges from inside the old component). The
    three sets are asserted to partition the level-(i-1) critical set.
    """
    if not 1 <= i <= hierarchy.L:
        raise ParameterError(f"level {i} out of range 1..{hierarchy.L}")
    if v == g.source:
        raise ParameterError("the source has no critical incoming edges")
    crit_i = crit_i or critical_edges(g, hierarchy, i)
    crit_prev = crit_prev or critical_edges(g, hierarchy, i - 1)
    comp_i = hierarchy.partition(i).component(v)
    comp_prev = hierarchy.partition(i - 1).component(v)
    above_prev = hierarchy.edges_above(i - 1)
    level_i = hierarchy.level_edges(i)

    ex = crit_i.sets[v]
    ey = frozenset(
        e
        for e in g.in_edges(v)
        if g.tail(e) in comp_i and g.tail(e) not in comp_prev and e not in above_prev
    )
    ez = frozenset(e for e in g.in_edges(v) if e in level_i) - ex - ey
    union = ex | ey | ez
    if union != crit_prev.sets[v] or len(ex) + len(ey) + len(ez) != len(union):
        raise InternalError(
            f"(E_X, E_Y, E_Z) do not partition the critical set of vertex {v}"
        )
    return ex, ey, ez


def split_colors(
    prev_colors: frozenset | set, caps: tuple[int, int, int]
) -> tuple[set, set, set]:
    """Deterministically split a color set into (X, Y, Z) within caps,
    filling X then Y then Z by ascending color."""
    cx, cy, cz = caps
    colors = sorted(prev_colors)
    if len(colors) > cx + cy + cz:
        raise InvariantError(
            f"{len(colors)} colors cannot fit caps {caps}; an upstream bound broke"
        )
    x = set(colors[:cx])
    y = set(colors[cx : cx + cy])
    z = set(colors[cx + cy :])
    return x, y, z


def component_flow(
    g: DirectedGraph,
    level_edges: EdgeSet,
    i: int,
    comp: frozenset,
    delta_map: Mapping[int, int],
    z_colors: set | frozenset,
    k: int,
):
    """Wire the component's Z colors with one exact max-flow.

    Supplies are the per-vertex critical degrees, sinks are i times the
    level-edge in-degrees, and the flow is capped at min(k, total sink).
    A short flow exposes a vertex set with fewer than k incoming edges
    (returned as a cut); otherwise the flow decomposes into edge-disjoint
    paths inside the component and the first |Z| of them are assigned to
    the Z colors in ascending order.
    """
    z = sorted(z_colors)
    if not z:
        return FlowCase({}, {})
    sinks: dict[int, int] = {}
    for v in sorted(comp):
        indeg = sum(1 for e in g.in_edges(v) if e in level_edges)
        if indeg:
            sinks[v] = i * indeg
    total_sink = sum(sinks.values())
    bound = min(k, total_sink)
    if len(z) > bound:
        raise InternalError(
            f"{len(z)} colors need wiring but the flow bound is only {bound}"
        )
    supplies = {v: delta_map.get(v, 0) for v in sorted(comp) if delta_map.get(v, 0) > 0}
    intra = edges_within(g, comp)
    res = max_flow(
        FlowProblem(g, supplies, sinks, flow_bound=bound, edge_filter=intra)
    )
    if res.value < bound:
        cstar = frozenset(res.min_cut_side & comp)
        if not cstar:
            raise InternalError("component cut case produced an empty side")
        rho = cut_values(g, cstar).rho
        if rho >= k:
            raise InternalError(
                f"component cut side has {rho} incoming edges, expected fewer than {k}"
            )
        return CutFound(frozenset(range(g.n)) - cstar)
    paths = decompose_paths(g, res, supplies, sinks)
    if len(paths) < len(z):
        raise InternalError(
            f"flow decomposed into {len(paths)} paths but {len(z)} colors need one"
        )
    assignments = {gamma: paths[j] for j, gamma in enumerate(z)}
    leaders = {gamma: assignments[gamma].vertices[-1] for gamma in z}
    return FlowCase(assignments, leaders)


def chain_demand_pairs(
    leader: int, breakpoints: list[int] | tuple[int, ...]
) -> tuple[tuple[int, int], ...]:
    """Chain the leader through the breakpoints in ascending id order:
    (leader, b1), (b1, b2), ... Degenerate self-pairs (the leader already
    being the first breakpoint) are dropped as vacuous."""
    ordered = sorted(breakpoints)
    pairs: list[tuple[int, int]] = []
    prev = leader
    for b in ordered:
        if b != prev:
            pairs.append((prev, b))
        prev = b
    return tuple(pairs)


def run_level(
    g: DirectedGraph,
    hierarchy: Hierarchy,
    i: int,
    state: ColorState,
    seed: int = 0,
    reroute_sweeps: int = 3,
):
    """Compute the level-i color state from the level-(i-1) state, or
    return the certifying cut discovered on the way."""
    if state.level != i - 1:
        raise ParameterError(f"state is at level {state.level}, expected {i - 1}")
    k = state.k
    part = hierarchy.partition(i)
    crit_i = critical_edges(g, hierarchy, i)
    crit_prev = critical_edges(g, hierarchy, i - 1)
    level_set = hierarchy.level_edges(i)
    s = g.source
    singleton_source = frozenset({s})

    edge_colors = {e: set(cols) for e, cols in state.edge_colors.items()}
    vertex_colors: dict[int, set] = {v: set() for v in range(g.n) if v != s}
    z_of: dict[int, set] = {}

    # Step 1: split breakpoint colors into X (keep), Y (park on merged
    # in-edges), Z (wire through the component).
    for comp in part.components:
        if comp == singleton_source:
            continue
        for v in sorted(comp):
            ex, ey, ez = partition_critical(g, hierarchy, i, v, crit_i, crit_prev)
            x, y, z = split_colors(
                state.vertex_colors.get(v, set()),
                (len(ex) * i, len(ey) * i, len(ez) * i),
            )
            vertex_colors[v] |= x
            if y:
                ey_sorted = sorted(ey)
                for idx, gamma in enumerate(sorted(y)):
                    edge_colors[ey_sorted[idx % len(ey_sorted)]].add(gamma)
            z_of[v] = z

    # Step 2: one flow per component hands each Z color a path and a leader.
    delta_map = {v: crit_i.delta(v) for v in range(g.n)}
    component_z: list[tuple[int, frozenset, list[int]]] = []
    leaders: dict[tuple[int, int], int] = {}
    for comp_id, comp in enumerate(part.components):
        if comp == singleton_source:
            continue
        zc = set()
        for v in comp:
            zc |= z_of.get(v, set())
        outcome = component_flow(g, level_set, i, comp, delta_map, zc, k)
        if isinstance(outcome, CutFound):
            return outcome
        component_z.append((comp_id, comp, sorted(zc)))
        for gamma, path in sorted(outcome.assignments.items()):
            for e in path.edges:
                edge_colors[e].add(gamma)
            start = path.vertices[0]
            vertex_colors[start].add(gamma)
            leaders[(comp_id, gamma)] = outcome.leaders[gamma]

    # Step 3: chain each color's leader through its breakpoints, check the
    # demand bound, route once, and color the routed paths.
    pairs: list[tuple[int, int]] = []
    tags: list[int] = []
    for comp_id, comp, zc in component_z:
        for gamma in zc:
            breakpoints = [v for v in sorted(comp) if gamma in z_of.get(v, ())]
            for pair in chain_demand_pairs(leaders[(comp_id, gamma)], breakpoints):
                pairs.append(pair)
                tags.append(gamma)
    congestion = 0
    if pairs:
        demand = Demand(tuple(pairs), part)
        bound = {
            v: 3 * i * sum(1 for e in g.in_edges(v) if e in level_set)
            for v in range(g.n)
        }
        ok, violation = respecting_check(demand, bound)
        if not ok:
            raise InvariantError(
                f"level-{i} demand exceeds its respecting bound at vertex "
                f"{violation[0]} ({violation[1]} > {violation[2]})"
            )
        outcome = route(
            g,
            demand,
            level_set,
            seed=derive_seed(seed, "route", i),
            reroute_sweeps=reroute_sweeps,
            phi=hierarchy.phi_target,
            level=i,
        )
        for idx, gamma in enumerate(tags):
            for e in outcome.paths_edges[idx]:
                edge_colors[e].add(gamma)
        congestion = outcome.congestion

    factor = max(Fraction(1), Fraction(congestion, 3 * i))
    new_state = ColorState(
        level=i,
        k=k,
        edge_colors=edge_colors,
        vertex_colors=vertex_colors,
        route_factor=max(state.route_factor, factor),
        level_log=state.level_log
        + (
            {
                "level": i,
                "demand_pairs": len(pairs),
                "congestion": congestion,
                "factor": str(max(state.route_factor, factor)),
                "respecting_ok": True,
            },
        ),
    )
    violations = check_invariants(g, hierarchy, i, new_state)
    if violations:
        raise InvariantError("; ".join(violations))
    return new_state


def check_invariants(
    g: DirectedGraph, hierarchy: Hierarchy, i: int, state: ColorState
) -> list[str]:
    """Re-derive the three per-level invariants by direct search; returns
    a list of violation descriptions (empty when all hold)."""
    violations: list[str] = []
    s = g.source
    part = hierarchy.partition(i)
    crit = critical_edges(g, hierarchy, i)

    for v in range(g.n):
        if v == s:
            continue
        have = len(state.vertex_colors.get(v, ()))
        allowed = crit.delta(v) * (i + 1)
        if have > allowed:
            violations.append(
                f"vertex {v} holds {have} colors, bound is {allowed} (invariant 2)"
            )

    bound3 = 5 * i * i * state.route_factor
    for e, cols in state.edge_colors.items():
        if len(cols) > bound3:
            violations.append(
                f"edge {e} holds {len(cols)} colors, bound is {bound3} (invariant 3)"
            )

    for gamma in range(1, state.k + 1):
        adj: list[list[int]] = [[] for _ in range(g.n)]
        for e, cols in state.edge_colors.items():
            if gamma in cols:
                adj[g.tail(e)].append(g.head(e))
        for comp in part.components:
            if comp == frozenset({s}):
                continue
            sources = [
                v for v in comp if gamma in state.vertex_colors.get(v, ())
            ]
            reached = set(sources)
            stack = list(sources)
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in reached:
                        reached.add(w)
                        stack.append(w)
            missing = comp - reached
            if missing:
                violations.append(
                    f"color {gamma}: vertex {min(missing)} unreachable from a "
                    f"colored vertex of its component (invariant 1)"
                )
    return violations


def finalize_coloring(
    g: DirectedGraph, hierarchy: Hierarchy, state: ColorState
) -> dict:
    """Fold the top-level vertex colors onto their critical incoming edges
    (round-robin, at most L+1 colors received per edge) and return the
    final per-edge coloring."""
    if state.level != hierarchy.L:
        raise ParameterError(
            f"state is at level {state.level}, expected top level {hierarchy.L}"
        )
    top = hierarchy.L
    crit = critical_edges(g, hierarchy, top)
    final = {e: set(cols) for e, cols in state.edge_colors.items()}
    for v in range(g.n):
        if v == g.source:
            continue
        colors = sorted(state.vertex_colors.get(v, ()))
        if not colors:
            continue
        targets = sorted(crit.sets[v])
        if not targets:
            raise InvariantError(
                f"vertex {v} still holds colors but has no critical incoming edge"
            )
        received: dict[int, int] = {}
        for idx, gamma in enumerate(colors):
            e = targets[idx % len(targets)]
            final[e].add(gamma)
            received[e] = received.get(e, 0) + 1
        worst = max(received.values())
        if worst > top + 1:
            raise InvariantError(
                f"edge received {worst} colors during finalization, quota is {top + 1}"
            )
    for e, cols in final.items():
        if len(cols) > len(state.edge_colors.get(e, ())) + top + 1:
            raise InvariantError(f"edge {e} exceeded its finalization growth bound")
    return {e: frozenset(cols) for e, cols in final.items()}


def extract_arborescences(
    g: DirectedGraph,
    coloring: Mapping[int, frozenset],
    k: int,
    congestion_bound: Fraction | None = None,
) -> PackingResult:
    """One DFS tree per color, rooted at the source over that color's
    edges; fails with the offending color and vertex if a color class
    does not span the graph."""
    s = g.source
    trees: list[tuple[int, ...]] = []
    for gamma in range(1, k + 1):
        adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
        for e, cols in coloring.items():
            if gamma in cols:
                adj[g.tail(e)].append((g.head(e), e))
        for lst in adj:
            lst.sort()
        visited = [False] * g.n
        visited[s] = True
        tree_edges: list[int] = []
        stack = [s]
        while stack:
            u = stack.pop()
            for head, eid in reversed(adj[u]):
                if not visited[head]:
                    visited[head] = True
                    tree_edges.append(eid)
                    stack.append(head)
        if not all(visited):
            missing = visited.index(False)
            raise PropertyOneError(
                f"color {gamma} cannot reach vertex {missing} from the source"
            )
        trees.append(tuple(sorted(tree_edges)))
    usage: dict[int, int] = {}
    for tree in trees:
        for e in tree:
            usage[e] = usage.get(e, 0) + 1
    congestion = max(usage.values(), default=0)
    if congestion_bound is not None and congestion > congestion_bound:
        raise InvariantError(
            f"tree congestion {congestion} exceeds the instrumented bound "
            f"{congestion_bound}"
        )
    return PackingResult(
        kind="arborescences", k=k, trees=tuple(trees), congestion=congestion
    )


def _cut_result(
    g: DirectedGraph, k: int, found: CutFound, levels: int | None, log: tuple
) -> PackingResult:
    side = found.source_side
    if g.source not in side:
        raise InternalError("certifying cut does not contain the source")
    delta = cut_values(g, side).delta
    if delta >= k:
        raise InternalError(f"certifying cut has delta {delta}, expected below {k}")
    return PackingResult(
        kind="cut",
        k=k,
        cut_vertices=side,
        cut_delta=delta,
        levels=levels,
        level_log=log,
    )


def pack(
    g: DirectedGraph,
    k: int,
    phi_target: Fraction = DEFAULT_PHI,
    seed: int = 0,
    reroute_sweeps: int = 3,
) -> PackingResult:
    """Produce k arborescences with measured congestion, or a cut with
    outgoing capacity below k containing the source."""
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}")
    if not g.is_unit_capacity():
        raise UnsupportedGraphError(
            "arborescence packing supports unit-capacity graphs only"
        )
    reachable = reachable_from(g, g.source)
    if len(reachable) != g.n:
        return _cut_result(g, k, CutFound(reachable), None, ())

    hierarchy = build_hierarchy(g, phi_target, derive_seed(seed, "hierarchy"))
    state = init_base_colors(g, k)
    if isinstance(state, CutFound):
        return _cut_result(g, k, state, hierarchy.L, ())
    for i in range(1, hierarchy.L + 1):
        outcome = run_level(
            g, hierarchy, i, state, seed=derive_seed(seed, "level", i),
            reroute_sweeps=reroute_sweeps,
        )
        if isinstance(outcome, CutFound):
            return _cut_result(g, k, outcome, hierarchy.L, state.level_log)
        state = outcome
    coloring = finalize_coloring(g, hierarchy, state)
    bound = 5 * hierarchy.L * hierarchy.L * state.route_factor + hierarchy.L + 1
    result = extract_arborescences(g, coloring, k, bound)
    return PackingResult(
        kind="arborescences",
        k=k,
        trees=result.trees,
        congestion=result.congestion,
        levels=hierarchy.L,
        level_log=state.level_log,
    )
