"""Directed multigraph core: normalized graphs, SCCs, cuts, degree tables.

Everything in this package runs on `DirectedGraph`: an immutable weighted
multigraph with dense vertex ids 0..n-1 and a distinguished source vertex
that has no incoming edges after normalization. Parallel edges are kept
as distinct edge occurrences (edge ids index into `edges`) because the
packing algorithms assign per-edge state; self-loops are dropped because
they can affect neither a cut nor an arborescence.

All functions here are pure; a constructed graph is safe to share across
concurrent readers.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .errors import InputError, InternalError

VertexId = int
EdgeId = int
Edge = tuple[int, int, int]
EdgeSet = frozenset  # frozenset[EdgeId]

#: Reject capacities above this bound so 64-bit accumulation cannot
#: overflow even when summed over every edge of a desk-scale graph.
MAX_CAPACITY = 1 << 40


@dataclass(frozen=True)
class DirectedGraph:
    """Immutable weighted directed multigraph.

    `edges[e] = (tail, head, capacity)`.  `W` is the capacity bound
    (maximum capacity present, 1 for an edgeless graph).
    """

    n: int
    edges: tuple[Edge, ...]
    source: int
    W: int
    _out: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _in: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        out: list[list[int]] = [[] for _ in range(self.n)]
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for eid, (u, v, _c) in enumerate(self.edges):
            out[u].append(eid)
            inc[v].append(eid)
        object.__setattr__(self, "_out", tuple(tuple(a) for a in out))
        object.__setattr__(self, "_in", tuple(tuple(a) for a in inc))

    @property
    def m(self) -> int:
        return len(self.edges)

    def tail(self, e: EdgeId) -> VertexId:
        return self.edges[e][0]

    def head(self, e: EdgeId) -> VertexId:
        return self.edges[e][1]

    def capacity(self, e: EdgeId) -> int:
        return self.edges[e][2]

    def out_edges(self, v: VertexId) -> tuple[int, ...]:
        """Edge ids leaving v, in ascending id order."""
        return self._out[v]

    def in_edges(self, v: VertexId) -> tuple[int, ...]:
        """Edge ids entering v, in ascending id order."""
        return self._in[v]

    def in_capacity(self, v: VertexId) -> int:
        return sum(self.edges[e][2] for e in self._in[v])

    def out_capacity(self, v: VertexId) -> int:
        return sum(self.edges[e][2] for e in self._out[v])

    def total_capacity(self) -> int:
        return sum(c for _, _, c in self.edges)

    def edge_capacity(self, eids: Iterable[EdgeId]) -> int:
        """Capacity sum c(F) over an edge set."""
        return sum(self.edges[e][2] for e in eids)

    def edge_set(self) -> EdgeSet:
        return frozenset(range(self.m))

    def is_unit_capacity(self) -> bool:
        return all(c == 1 for _, _, c in self.edges)


def normalize(raw_edges: Sequence[tuple[int, ...]], n: int, s: int) -> DirectedGraph:
    """Build a normalized `DirectedGraph` from raw (tail, head, capacity) triples.

    Drops self-loops and every edge whose head is the source; preserves
    the order of the surviving edges. Raises `InputError` for ids out of
    range, non-positive capacities, or capacities above `MAX_CAPACITY`.
    """
    if n < 1:
        raise InputError(f"vertex count must be positive, got {n}")
    if not 0 <= s < n:
        raise InputError(f"source {s} out of range for n={n}")
    kept: list[Edge] = []
    for idx, e in enumerate(raw_edges):
        u, v, c = e
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"edge {idx}: endpoint out of range: ({u}, {v})")
        if c < 1:
            raise InputError(f"edge {idx}: capacity must be >= 1, got {c}")
        if c > MAX_CAPACITY:
            raise InputError(f"edge {idx}: capacity {c} exceeds bound 2^40")
        if u == v or v == s:
            continue
        kept.append((u, v, c))
    w = max((c for _, _, c in kept), default=1)
    return DirectedGraph(n=n, edges=tuple(kept), source=s, W=w)


@dataclass(frozen=True)
class Partition:
    """A partition of the vertex set into numbered components.

    Component numbering is deterministic: components are ordered by their
    smallest member vertex id.
    """

    comp_of: tuple[int, ...]
    components: tuple[frozenset, ...]

    def __len__(self) -> int:
        return len(self.components)

    def component_of(self, v: VertexId) -> int:
        return self.comp_of[v]

    def component(self, v: VertexId) -> frozenset:
        return self.components[self.comp_of[v]]

    def refines(self, other: "Partition") -> bool:
        """True if every component here lies inside one component of `other`."""
        for comp in self.components:
            targets = {other.comp_of[v] for v in comp}
            if len(targets) != 1:
                return False
        return True


def _partition_from_groups(n: int, groups: Iterable[Iterable[int]]) -> Partition:
    ordered = sorted((frozenset(grp) for grp in groups), key=min)
    comp_of = [-1] * n
    for cid, comp in enumerate(ordered):
        for v in comp:
            comp_of[v] = cid
    if any(c < 0 for c in comp_of):
        raise InternalError("partition does not cover all vertices")
    return Partition(tuple(comp_of), tuple(ordered))


def scc(g: DirectedGraph, removed: EdgeSet = frozenset()) -> Partition:
    """Strongly connected components of g with `removed` edges deleted.

    Iterative Tarjan; component numbering by smallest member vertex id.
    """
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for eid, (u, v, _c) in enumerate(g.edges):
        if eid not in removed:
            adj[u].append(v)
    index = [0] * g.n
    low = [0] * g.n
    on_stack = [False] * g.n
    visited = [False] * g.n
    stack: list[int] = []
    groups: list[list[int]] = []
    counter = 1
    for root in range(g.n):
        if visited[root]:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, ptr = work.pop()
            if ptr == 0:
                visited[v] = True
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            while ptr < len(adj[v]):
                w = adj[v][ptr]
                if not visited[w]:
                    work.append((v, ptr + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
                ptr += 1
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                groups.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return _partition_from_groups(g.n, groups)


def scc_topo_order(
    g: DirectedGraph, partition: Partition, removed: EdgeSet = frozenset()
) -> tuple[int, ...]:
    """Topological order of component ids in the condensation.

    Only edges surviving `removed` order the components. The component
    containing the source comes first when it has no surviving incoming
    edge; remaining ties break on the smallest member vertex id.
    """
    k = len(partition.components)
    succ: list[set] = [set() for _ in range(k)]
    indeg = [0] * k
    for eid, (u, v, _c) in enumerate(g.edges):
        if eid in removed:
            continue
        cu, cv = partition.comp_of[u], partition.comp_of[v]
        if cu != cv and cv not in succ[cu]:
            succ[cu].add(cv)
            indeg[cv] += 1

    def key(cid: int) -> tuple[int, int]:
        comp = partition.components[cid]
        return (0 if g.source in comp else 1, min(comp))

    heap = [(key(c), c) for c in range(k) if indeg[c] == 0]
    heapq.heapify(heap)
    order: list[int] = []
    while heap:
        _, c = heapq.heappop(heap)
        order.append(c)
        for d in succ[c]:
            indeg[d] -= 1
            if indeg[d] == 0:
                heapq.heappush(heap, (key(d), d))
    if len(order) != k:
        raise InternalError("condensation contains a cycle")
    return tuple(order)


class CutValues(NamedTuple):
    delta: int
    rho: int


def cut_values(g: DirectedGraph, vertex_set: Iterable[int]) -> CutValues:
    """Capacity leaving (delta) and entering (rho) a vertex set."""
    inside = set(vertex_set)
    delta = rho = 0
    for u, v, c in g.edges:
        tin, hin = u in inside, v in inside
        if tin and not hin:
            delta += c
        elif hin and not tin:
            rho += c
    return CutValues(delta, rho)


@dataclass(frozen=True)
class DegreeTable:
    """Capacity-weighted in/out degrees restricted to an edge set."""

    in_deg: tuple[int, ...]
    out_deg: tuple[int, ...]

    def deg(self, v: VertexId) -> int:
        return self.in_deg[v] + self.out_deg[v]

    def vol(self, vertices: Iterable[int]) -> int:
        return sum(self.deg(v) for v in vertices)

    @property
    def total_in(self) -> int:
        return sum(self.in_deg)

    @property
    def total_out(self) -> int:
        return sum(self.out_deg)


def restricted_degrees(g: DirectedGraph, edge_filter: Iterable[EdgeId]) -> DegreeTable:
    """Per-vertex degrees counting only capacities of edges in `edge_filter`."""
    in_deg = [0] * g.n
    out_deg = [0] * g.n
    for eid in edge_filter:
        u, v, c = g.edges[eid]
        out_deg[u] += c
        in_deg[v] += c
    return DegreeTable(tuple(in_deg), tuple(out_deg))


def edges_within(g: DirectedGraph, vertices: Iterable[int]) -> EdgeSet:
    """Ids of edges with both endpoints inside `vertices`."""
    inside = set(vertices)
    return frozenset(
        eid for eid, (u, v, _c) in enumerate(g.edges) if u in inside and v in inside
    )


def reachable_from(g: DirectedGraph, start: VertexId, allowed: EdgeSet | None = None) -> frozenset:
    """Vertices reachable from `start`, optionally restricted to `allowed` edges."""
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for eid in g.out_edges(u):
            if allowed is not None and eid not in allowed:
                continue
            v = g.head(eid)
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return frozenset(seen)
