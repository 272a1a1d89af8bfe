"""Sampling-based approximate rooted min-cut over an expander hierarchy.

The search walks every level of the hierarchy. Level 0 scans each
non-source vertex directly (its in-capacity is the cut value of the
singleton). At higher levels, every component is probed with
capacity-weighted edge samples: a sampled endpoint v yields the exact
minimum over sets T with v in T inside the component of the capacity
entering T, computed by contracting everything outside the component
into a virtual super-source and running one exact max-flow. The global
minimum candidate wins.

The RNG is split per (level, component), so the outcome is independent
of any processing order.
"""
from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass
from typing import Sequence

from .decomp import Hierarchy
from .errors import EmptySampleError, InternalError, ParameterError
from .graphcore import DirectedGraph, cut_values, edges_within
from .maxflow import FlowProblem, max_flow
from .seeds import derive_rng

__all__ = [
    "CutCandidate",
    "MincutReport",
    "sample_endpoints",
    "mincut_into_component",
    "approx_rooted_mincut",
]


@dataclass(frozen=True)
class CutCandidate:
    """A candidate rooted cut: the sink side C_v, its incoming capacity,
    and where the sample that produced it came from."""

    vertex_set: frozenset
    rho: int
    level: int
    component: int
    sampled_vertex: int


@dataclass(frozen=True)
class MincutReport:
    best: CutCandidate
    candidates: tuple[CutCandidate, ...]
    trials_per_component: int
    seed: int


def sample_endpoints(
    g: DirectedGraph, edge_ids: Sequence[int], trials: int, rng: random.Random
) -> list[int]:
    """`trials` endpoint samples: an edge drawn with probability
    proportional to its capacity, then a fair-coin endpoint."""
    eids = sorted(edge_ids)
    if not eids:
        raise EmptySampleError("cannot sample endpoints from an empty edge set")
    if trials < 1:
        raise ParameterError(f"trials must be positive, got {trials}")
    cumulative: list[int] = []
    total = 0
    for e in eids:
        total += g.capacity(e)
        cumulative.append(total)
    out: list[int] = []
    for _ in range(trials):
        x = rng.randrange(total)
        e = eids[bisect.bisect_right(cumulative, x)]
        u, v, _c = g.edges[e]
        out.append(u if rng.getrandbits(1) == 0 else v)
    return out


def mincut_into_component(
    g: DirectedGraph, comp: frozenset, v: int, level: int = -1, component: int = -1
) -> CutCandidate:
    """Exact min over {T : v in T subseteq comp} of the capacity entering T.

    Everything outside the component is contracted into the flow source:
    each edge entering the component becomes supply at its head, edges
    leaving the component are dropped, and v is the sink.
    """
    if v not in comp:
        raise ParameterError(f"sample vertex {v} is not in the component")
    if g.source in comp:
        raise ParameterError("component must not contain the source")
    supplies: dict[int, int] = {}
    for eid, (u, w, c) in enumerate(g.edges):
        if w in comp and u not in comp:
            supplies[w] = supplies.get(w, 0) + c
    intra = edges_within(g, comp)
    big = sum(supplies.values()) + g.edge_capacity(intra) + 1
    res = max_flow(FlowProblem(g, supplies, {v: big}, edge_filter=intra))
    side = frozenset(res.min_cut_side & comp)
    if v not in side:
        raise InternalError("sink vertex escaped its own min-cut side")
    rho = cut_values(g, side).rho
    if rho != res.value:
        raise InternalError(f"cut re-evaluates to {rho}, flow value was {res.value}")
    return CutCandidate(side, rho, level, component, v)


def approx_rooted_mincut(
    g: DirectedGraph, hierarchy: Hierarchy, seed: int = 0, trials_mult: int = 4
) -> MincutReport:
    """Approximate rooted min-cut via the hierarchy; returns the best
    candidate plus every candidate examined."""
    if hierarchy.n != g.n or hierarchy.m != g.m or hierarchy.source != g.source:
        raise ParameterError("hierarchy does not match this graph")
    if g.n < 2:
        raise ParameterError("rooted min-cut needs at least one non-source vertex")
    if trials_mult < 1:
        raise ParameterError("trials_mult must be positive")
    s = g.source
    trials = max(1, math.ceil(trials_mult * math.log2(max(g.n, 2))))
    candidates: list[CutCandidate] = []
    best: CutCandidate | None = None

    def consider(cand: CutCandidate) -> None:
        nonlocal best
        if s in cand.vertex_set or not cand.vertex_set:
            raise InternalError("candidate cut is not a valid rooted cut side")
        candidates.append(cand)
        if best is None or cand.rho < best.rho:
            best = cand

    level0 = hierarchy.partition(0)
    for v in range(g.n):
        if v == s:
            continue
        consider(
            CutCandidate(frozenset({v}), g.in_capacity(v), 0, level0.comp_of[v], v)
        )
    for i in range(1, hierarchy.L + 1):
        part = hierarchy.partition(i)
        level_edges = hierarchy.level_edges(i)
        for comp_id, comp in enumerate(part.components):
            if comp == frozenset({s}):
                continue
            inside = [
                e
                for e in level_edges
                if g.tail(e) in comp and g.head(e) in comp
            ]
            if not inside:
                continue
            rng = derive_rng(seed, "mincut", i, comp_id)
            computed: dict[int, CutCandidate] = {}
            for v in sample_endpoints(g, inside, trials, rng):
                if v not in computed:
                    computed[v] = mincut_into_component(g, comp, v, i, comp_id)
                consider(computed[v])
    assert best is not None
    return MincutReport(best, tuple(candidates), trials, seed)
