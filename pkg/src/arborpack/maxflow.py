"""Exact integral max-flow with multi-source/multi-sink boundaries.

The solver is Dinic's algorithm (BFS level graph + blocking-flow DFS with
current-arc pointers) over a residual network that attaches a virtual
super-source and super-sink for the per-vertex supply and sink-capacity
functions. Virtual vertices are never visible to callers: `min_cut_side`
is always a set of real vertices (those unreachable from the super-source
in the final residual graph).

An optional `flow_bound` stops augmentation early once the bound is
reached; a result with `value < flow_bound` (or no bound) is a genuine
maximum flow and its `min_cut_side` is a genuine minimum cut.

Everything is deterministic: arcs are added in edge-id order, then
supplies and sinks in ascending vertex order, and the search routines
scan adjacency in insertion order. Results do not depend on any worker
or thread configuration.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .errors import InternalError, ParameterError
from .graphcore import DirectedGraph, EdgeSet

__all__ = [
    "FlowProblem",
    "FlowResult",
    "FlowPath",
    "max_flow",
    "verify_flow",
    "decompose_paths",
]


@dataclass(frozen=True, eq=False)
class FlowProblem:
    """A max-flow instance over a `DirectedGraph`.

    `source_supply[v]` units may enter the network at v and
    `sink_capacity[v]` units may leave at v. `edge_filter`, when given,
    restricts the instance to that edge subset. `capacity_scale`
    multiplies every real edge capacity (supplies and sinks are never
    scaled).
    """

    graph: DirectedGraph
    source_supply: Mapping[int, int]
    sink_capacity: Mapping[int, int]
    flow_bound: int | None = None
    edge_filter: EdgeSet | None = None
    capacity_scale: int = 1

    def __post_init__(self) -> None:
        n = self.graph.n
        for name, mapping in (("supply", self.source_supply), ("sink", self.sink_capacity)):
            for v, amt in mapping.items():
                if not 0 <= v < n:
                    raise ParameterError(f"{name} vertex {v} out of range")
                if amt < 0:
                    raise ParameterError(f"{name} at {v} must be nonnegative, got {amt}")
        if self.flow_bound is not None and self.flow_bound < 0:
            raise ParameterError("flow_bound must be nonnegative")
        if self.capacity_scale < 1:
            raise ParameterError("capacity_scale must be >= 1")


@dataclass(frozen=True, eq=False)
class FlowResult:
    """An integral flow: value, per-edge flow, and the sink-side cut.

    `flow` maps edge id to flow in scaled capacity units; `source_used`
    and `sink_used` record how much of each vertex's supply/sink capacity
    the flow consumed.
    """

    value: int
    flow: dict = field(repr=False)
    min_cut_side: frozenset
    source_used: dict = field(repr=False)
    sink_used: dict = field(repr=False)
    capped: bool = False


def max_flow(problem: FlowProblem) -> FlowResult:
    """Exact integral maximum flow, optionally capped at `flow_bound`."""
    g = problem.graph
    n = g.n
    source, sink = n, n + 1
    nv = n + 2
    to: list[int] = []
    cap: list[int] = []
    adj: list[list[int]] = [[] for _ in range(nv)]

    def add_arc(u: int, v: int, c: int) -> int:
        idx = len(to)
        to.append(v)
        cap.append(c)
        adj[u].append(idx)
        to.append(u)
        cap.append(0)
        adj[v].append(idx + 1)
        return idx

    scale = problem.capacity_scale
    allowed = problem.edge_filter
    arc_of_edge: dict[int, int] = {}
    for eid, (u, v, c) in enumerate(g.edges):
        if allowed is not None and eid not in allowed:
            continue
        arc_of_edge[eid] = add_arc(u, v, c * scale)
    supply_arc: dict[int, int] = {}
    for v in sorted(problem.source_supply):
        amt = problem.source_supply[v]
        if amt > 0:
            supply_arc[v] = add_arc(source, v, amt)
    sink_arc: dict[int, int] = {}
    for v in sorted(problem.sink_capacity):
        amt = problem.sink_capacity[v]
        if amt > 0:
            sink_arc[v] = add_arc(v, sink, amt)

    total_supply = sum(problem.source_supply.values())
    bound = total_supply if problem.flow_bound is None else min(problem.flow_bound, total_supply)

    level = [-1] * nv
    it = [0] * nv

    def bfs() -> bool:
        for i in range(nv):
            level[i] = -1
        level[source] = 0
        dq = deque([source])
        while dq:
            u = dq.popleft()
            for a in adj[u]:
                w = to[a]
                if cap[a] > 0 and level[w] < 0:
                    level[w] = level[u] + 1
                    dq.append(w)
        return level[sink] >= 0

    def dfs(u: int, limit: int) -> int:
        if u == sink:
            return limit
        pushed = 0
        while it[u] < len(adj[u]):
            a = adj[u][it[u]]
            w = to[a]
            if cap[a] > 0 and level[w] == level[u] + 1:
                d = dfs(w, min(limit - pushed, cap[a]))
                if d > 0:
                    cap[a] -= d
                    cap[a ^ 1] += d
                    pushed += d
                    if pushed == limit:
                        return pushed
            it[u] += 1
        level[u] = -1
        return pushed

    flow_total = 0
    while flow_total < bound and bfs():
        for i in range(nv):
            it[i] = 0
        while flow_total < bound:
            pushed = dfs(source, bound - flow_total)
            if pushed == 0:
                break
            flow_total += pushed

    # Residual reachability from the virtual source gives the cut.
    seen = [False] * nv
    seen[source] = True
    dq = deque([source])
    while dq:
        u = dq.popleft()
        for a in adj[u]:
            w = to[a]
            if cap[a] > 0 and not seen[w]:
                seen[w] = True
                dq.append(w)
    unreachable = frozenset(v for v in range(n) if not seen[v])

    flow = {eid: cap[a ^ 1] for eid, a in arc_of_edge.items()}
    source_used = {v: cap[a ^ 1] for v, a in supply_arc.items()}
    sink_used = {v: cap[a ^ 1] for v, a in sink_arc.items()}
    return FlowResult(
        value=flow_total,
        flow=flow,
        min_cut_side=unreachable,
        source_used=source_used,
        sink_used=sink_used,
        capped=(flow_total >= bound and problem.flow_bound is not None),
    )


def verify_flow(problem: FlowProblem, result: FlowResult) -> None:
    """Re-derive every flow invariant; raises `InternalError` on failure.

    Checks capacity bounds, conservation at every real vertex, value
    accounting, and (for uncapped runs) the min-cut identity
    value == supply(T) + c(crossing into T) + sink(V - T).
    """
    g = problem.graph
    scale = problem.capacity_scale
    allowed = problem.edge_filter
    in_flow = [0] * g.n
    out_flow = [0] * g.n
    for eid, f in result.flow.items():
        u, v, c = g.edges[eid]
        if allowed is not None and eid not in allowed:
            raise InternalError(f"flow on filtered-out edge {eid}")
        if not 0 <= f <= c * scale:
            raise InternalError(f"edge {eid}: flow {f} outside [0, {c * scale}]")
        out_flow[u] += f
        in_flow[v] += f
    for v in range(g.n):
        src = result.source_used.get(v, 0)
        snk = result.sink_used.get(v, 0)
        if src > problem.source_supply.get(v, 0) or snk > problem.sink_capacity.get(v, 0):
            raise InternalError(f"vertex {v}: virtual usage exceeds its budget")
        if in_flow[v] + src != out_flow[v] + snk:
            raise InternalError(f"vertex {v}: conservation violated")
    if sum(result.source_used.values()) != result.value:
        raise InternalError("value does not match total supply used")
    if sum(result.sink_used.values()) != result.value:
        raise InternalError("value does not match total sink usage")
    if not result.capped:
        t_side = result.min_cut_side
        crossing = 0
        for eid, (u, v, c) in enumerate(g.edges):
            if allowed is not None and eid not in allowed:
                continue
            if u not in t_side and v in t_side:
                crossing += c * scale
        cut = (
            sum(problem.source_supply.get(v, 0) for v in t_side)
            + crossing
            + sum(problem.sink_capacity.get(v, 0) for v in range(g.n) if v not in t_side)
        )
        if cut != result.value:
            raise InternalError(f"min-cut value {cut} != flow value {result.value}")


@dataclass(frozen=True)
class FlowPath:
    """One unit path of a decomposition; a single-vertex path has no edges."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]


def decompose_paths(
    g: DirectedGraph,
    result: FlowResult,
    supplies: Mapping[int, int],
    sinks: Mapping[int, int],
) -> list[FlowPath]:
    """Decompose an integral flow into `value` unit paths.

    Trace order is deterministic: repeatedly start from the lowest-id
    vertex with remaining injection and follow the lowest-id edge with
    positive remaining flow. Cycles encountered along the way are
    cancelled in full and never emitted. Each edge e appears in at most
    flow(e) paths; at most supplies[u] paths start at u and at most
    sinks[v] paths end at v.
    """
    for v, used in result.source_used.items():
        if used > supplies.get(v, 0):
            raise InternalError(f"vertex {v}: flow uses more supply than granted")
    for v, used in result.sink_used.items():
        if used > sinks.get(v, 0):
            raise InternalError(f"vertex {v}: flow uses more sink capacity than granted")

    rem = {eid: f for eid, f in result.flow.items() if f > 0}
    inject = {v: amt for v, amt in result.source_used.items() if amt > 0}
    absorb = {v: amt for v, amt in result.sink_used.items() if amt > 0}

    # Conservation check on the remaining-flow picture.
    balance = [0] * g.n
    for eid, f in rem.items():
        u, v, _c = g.edges[eid]
        balance[u] -= f
        balance[v] += f
    for v in range(g.n):
        if balance[v] + inject.get(v, 0) != absorb.get(v, 0):
            raise InternalError(f"vertex {v}: flow is not conservative")

    out_sorted = {
        v: sorted(e for e in g.out_edges(v) if e in rem) for v in range(g.n)
    }
    out_ptr = {v: 0 for v in out_sorted}

    def next_edge(v: int) -> int:
        lst = out_sorted.get(v, ())
        ptr = out_ptr.get(v, 0)
        while ptr < len(lst) and rem.get(lst[ptr], 0) == 0:
            ptr += 1
        out_ptr[v] = ptr
        if ptr == len(lst):
            raise InternalError(f"vertex {v}: no outgoing flow while tracing")
        return lst[ptr]

    paths: list[FlowPath] = []
    for start in sorted(inject):
        while inject[start] > 0:
            vpath = [start]
            epath: list[int] = []
            seen = {start: 0}
            cur = start
            while absorb.get(cur, 0) == 0:
                eid = next_edge(cur)
                rem[eid] -= 1
                nxt = g.head(eid)
                if nxt in seen:
                    # One unit around this cycle is already removed; drop
                    # any further copies, then resume from the junction.
                    k = seen[nxt]
                    cyc_edges = epath[k:] + [eid]
                    extra = min(rem[e] for e in cyc_edges)
                    if extra:
                        for e in cyc_edges:
                            rem[e] -= extra
                    for v in vpath[k + 1:]:
                        del seen[v]
                    del vpath[k + 1:]
                    del epath[k:]
                    cur = nxt
                else:
                    epath.append(eid)
                    vpath.append(nxt)
                    seen[nxt] = len(vpath) - 1
                    cur = nxt
            absorb[cur] -= 1
            inject[start] -= 1
            paths.append(FlowPath(tuple(vpath), tuple(epath)))
    if len(paths) != result.value:
        raise InternalError(
            f"decomposed {len(paths)} paths for a flow of value {result.value}"
        )
    return paths
