"""Terminal-set expander decomposition and the level hierarchy built on it.

`decompose` is a desk-scale certify-or-cut scheme: inside every strongly
connected component of the working graph it tries to certify that the
terminal-degree demands route with congestion 1/phi, by pushing seeded
random split-flow instances through an exact max-flow. When a trial flow
falls short, the residual min-cut exposes a violating vertex set; its
smaller-direction crossing edges join the cut set B and both sides are
re-examined. The halving guarantee c(B) <= c(terminals)/2 is enforced,
not hoped for: if B grows past the budget, phi is halved and the
offending component re-runs (routing always succeeds once the congestion
allowance exceeds the total terminal degree, so this terminates).

`build_hierarchy` iterates decompose, feeding each round's cut edges back
in as the next terminal set until no cut is needed, and records the SCC
partition of the graph minus all higher-level edges for every level.

Flow-based certification is a heuristic stand-in for the real expansion
property; the exhaustive cut-expansion check in `oracle` is the ground
truth at small n.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import HalvingViolation, InternalError, ParameterError
from .graphcore import DirectedGraph, EdgeSet, Partition, restricted_degrees, scc
from .maxflow import FlowProblem, max_flow
from .seeds import derive_rng, derive_seed

__all__ = ["DecompResult", "Hierarchy", "decompose", "build_hierarchy", "DEFAULT_PHI"]

DEFAULT_PHI = Fraction(1, 16)

_MAX_PHI_HALVINGS = 64


@dataclass(frozen=True)
class DecompResult:
    """Cut edges B, the expansion target the run ended at, and the number
    of component certifications performed."""

    cut_edges: frozenset
    achieved_phi: Fraction
    rounds: int


def certification_trials(n: int) -> int:
    """Seeded demand-sampling count used per component."""
    return max(1, math.ceil(4 * math.log2(max(n, 2))))


def _sub_sccs(g: DirectedGraph, comp: frozenset, banned: set) -> list[frozenset]:
    """SCCs of the subgraph induced on `comp` with `banned` edges deleted."""
    removed = set(banned)
    for eid, (u, v, _c) in enumerate(g.edges):
        if u not in comp or v not in comp:
            removed.add(eid)
    part = scc(g, frozenset(removed))
    return sorted((c for c in part.components if c <= comp), key=min)


def _grow_half(g, comp, deg, pivot, forward, threshold):
    """Deterministic BFS ball around `pivot` inside `comp`, grown until it
    holds `threshold` (at most half) of the component's terminal degree.

    The threshold is randomized by the caller so that a natural boundary
    sitting just under one half is still hit rather than overgrown.
    """
    total = sum(deg[v] for v in comp)
    ball = {pivot}
    mass = deg[pivot]
    frontier = [pivot]
    while frontier and mass < threshold * total / 2:
        nxt: list[int] = []
        for u in sorted(frontier):
            edge_ids = g.out_edges(u) if forward else g.in_edges(u)
            for eid in edge_ids:
                w = g.head(eid) if forward else g.tail(eid)
                if w in comp and w not in ball:
                    ball.add(w)
                    mass += deg[w]
                    nxt.append(w)
                    if mass >= threshold * total / 2:
                        return ball
        frontier = nxt
    return ball


def _certify_component(g, comp, deg, phi, rng, trials):
    """Try to certify `comp`; return None on success or a violating
    proper nonempty subset of comp on failure.

    Trials alternate between balanced random vertex splits and BFS-ball
    splits around degree-weighted pivots; the latter align with
    structured bottlenecks (bridges, long cycles) that coin flips almost
    never isolate. Both are degree-respecting demands, so a component
    that truly routes at congestion 1/phi passes every trial.
    """
    active = [v for v in sorted(comp) if deg[v] > 0]
    if len(active) < 2:
        return None
    sigma = max(1, int(Fraction(1) / phi))

    def pick_pivot() -> int:
        total = sum(deg[v] for v in active)
        x = rng.randrange(total)
        for v in active:
            x -= deg[v]
            if x < 0:
                return v
        return active[-1]

    for t in range(trials):
        supplies: dict[int, int] = {}
        sinks: dict[int, int] = {}
        style = t % 3
        if style == 0:
            for v in active:
                if rng.random() < 0.5:
                    supplies[v] = deg[v]
                else:
                    sinks[v] = deg[v]
        else:
            threshold = rng.uniform(0.7, 1.0)
            ball = _grow_half(
                g, comp, deg, pick_pivot(), forward=(style == 1), threshold=threshold
            )
            for v in active:
                if (v in ball) == (style == 1):
                    supplies[v] = deg[v]
                else:
                    sinks[v] = deg[v]
        target = min(sum(supplies.values()), sum(sinks.values()))
        if target == 0:
            continue
        res = max_flow(
            FlowProblem(g, supplies, sinks, flow_bound=target, capacity_scale=sigma)
        )
        if res.value < target:
            viol = res.min_cut_side & comp
            if not viol or viol == comp:
                raise InternalError("trial flow produced a degenerate cut side")
            return frozenset(viol)
    return None


def decompose(
    g: DirectedGraph, terminals: EdgeSet, phi_target: Fraction, seed: int = 0
) -> DecompResult:
    """Find cut edges B with c(B) <= c(terminals)/2 such that the terminal
    set is (heuristically) component-constrained phi-expanding after the
    cut. Deterministic given the seed."""
    phi_target = Fraction(phi_target)
    if not 0 < phi_target <= 1:
        raise ParameterError(f"phi_target must be in (0, 1], got {phi_target}")
    for eid in terminals:
        if not 0 <= eid < g.m:
            raise ParameterError(f"terminal edge id {eid} out of range")
    if not terminals:
        return DecompResult(frozenset(), phi_target, 0)

    estar_cap = g.edge_capacity(terminals)
    degrees = restricted_degrees(g, terminals)
    deg = [degrees.deg(v) for v in range(g.n)]
    trials = certification_trials(g.n)

    phi = phi_target
    halvings = 0
    cut: set[int] = set()
    base = scc(g)
    pending: deque[frozenset] = deque(sorted(base.components, key=min))
    rounds = 0
    counter = 0
    while pending:
        comp = pending.popleft()
        if len(comp) < 2:
            continue
        rounds += 1
        rng = derive_rng(seed, "certify", halvings, counter)
        counter += 1
        viol = _certify_component(g, comp, deg, phi, rng, trials)
        if viol is None:
            continue
        outgoing = []
        incoming = []
        for eid in range(g.m):
            if eid in cut:
                continue
            u, v, _c = g.edges[eid]
            if u in viol and v in comp and v not in viol:
                outgoing.append(eid)
            elif v in viol and u in comp and u not in viol:
                incoming.append(eid)
        out_cap = g.edge_capacity(outgoing)
        in_cap = g.edge_capacity(incoming)
        chosen = outgoing if out_cap <= in_cap else incoming
        if not chosen:
            raise InternalError("violating side has no crossing edges inside its SCC")
        if 2 * (g.edge_capacity(cut) + g.edge_capacity(chosen)) > estar_cap:
            # Budget exceeded: retry this component at a weaker target.
            halvings += 1
            if halvings > _MAX_PHI_HALVINGS:
                raise InternalError("phi lowered past any feasible value")
            phi = phi / 2
            pending.appendleft(comp)
            continue
        cut.update(chosen)
        for side in (viol, comp - viol):
            pending.extend(_sub_sccs(g, side, cut))
    return DecompResult(frozenset(cut), phi, rounds)


@dataclass(frozen=True)
class Hierarchy:
    """Level edge sets E_1..E_L plus the SCC partition of the graph minus
    all higher-level edges, for every level 0..L.

    Level 0 has no edge set; its partition is all singletons because every
    edge counts as higher-level there. Partitions refine upward (a laminar
    family) and the source is a singleton component at every level.
    """

    n: int
    m: int
    source: int
    phi_target: Fraction
    levels: tuple[frozenset, ...]
    partitions: tuple[Partition, ...]
    level_phis: tuple[Fraction, ...]
    _above: tuple[frozenset, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        above: list[frozenset] = [frozenset()] * (len(self.levels) + 1)
        acc: frozenset = frozenset()
        for i in range(len(self.levels) - 1, -1, -1):
            acc = acc | self.levels[i]
            above[i] = acc
        object.__setattr__(self, "_above", tuple(above))

    @property
    def L(self) -> int:
        return len(self.levels)

    def level_edges(self, i: int) -> frozenset:
        """E_i for 1 <= i <= L."""
        if not 1 <= i <= self.L:
            raise ParameterError(f"level {i} out of range 1..{self.L}")
        return self.levels[i - 1]

    def edges_above(self, i: int) -> frozenset:
        """Union of E_j for j > i (all edges at i = 0)."""
        if not 0 <= i <= self.L:
            raise ParameterError(f"level {i} out of range 0..{self.L}")
        return self._above[i]

    def partition(self, i: int) -> Partition:
        if not 0 <= i <= self.L:
            raise ParameterError(f"level {i} out of range 0..{self.L}")
        return self.partitions[i]

    def validate(self, g: DirectedGraph) -> None:
        """Re-derive every structural invariant; raises on any failure."""
        if g.n != self.n or g.m != self.m or g.source != self.source:
            raise ParameterError("hierarchy was not built on this graph")
        if self.L < 1 or len(self.partitions) != self.L + 1:
            raise InternalError("level/partition counts are inconsistent")
        union: set[int] = set()
        for level in self.levels:
            union.update(level)
        if union != set(range(g.m)):
            raise InternalError("level edge sets do not cover the graph")
        caps = [g.edge_capacity(level) for level in self.levels]
        for i in range(len(caps) - 1):
            if 2 * caps[i + 1] > caps[i]:
                raise HalvingViolation(
                    f"c(E_{i + 2}) = {caps[i + 1]} exceeds half of c(E_{i + 1}) = {caps[i]}"
                )
        top_cap = caps[0] if caps else 0
        limit = (math.ceil(math.log2(top_cap)) if top_cap > 1 else 0) + 1
        if self.L > limit:
            raise HalvingViolation(f"L = {self.L} exceeds bound {limit}")
        for i in range(self.L + 1):
            expected = scc(g, self.edges_above(i))
            if expected != self.partitions[i]:
                raise InternalError(f"level-{i} partition does not match its SCCs")
            if self.partitions[i].component(g.source) != frozenset({g.source}):
                raise InternalError(f"source is not a singleton at level {i}")
            if i > 0 and not self.partitions[i - 1].refines(self.partitions[i]):
                raise InternalError(f"level {i - 1} does not refine level {i}")

    def to_json_dict(self) -> dict:
        return {
            "kind": "hierarchy",
            "n": self.n,
            "m": self.m,
            "source": self.source,
            "phi_target": str(self.phi_target),
            "levels": [sorted(level) for level in self.levels],
            "partitions": [
                [sorted(comp) for comp in part.components] for part in self.partitions
            ],
            "level_phis": [str(phi) for phi in self.level_phis],
        }


def hierarchy_from_json(data: dict) -> Hierarchy:
    """Rebuild a Hierarchy from its JSON shape (validate against a graph
    separately with `Hierarchy.validate`)."""
    from .graphcore import _partition_from_groups

    n = int(data["n"])
    parts = tuple(
        _partition_from_groups(n, [frozenset(c) for c in part])
        for part in data["partitions"]
    )
    return Hierarchy(
        n=n,
        m=int(data["m"]),
        source=int(data["source"]),
        phi_target=Fraction(data["phi_target"]),
        levels=tuple(frozenset(level) for level in data["levels"]),
        partitions=parts,
        level_phis=tuple(Fraction(p) for p in data["level_phis"]),
    )


def build_hierarchy(
    g: DirectedGraph, phi_target: Fraction = DEFAULT_PHI, seed: int = 0
) -> Hierarchy:
    """Iterate decompose until no cut edges remain, then assemble and
    validate the full hierarchy."""
    phi_target = Fraction(phi_target)
    if not 0 < phi_target <= 1:
        raise ParameterError(f"phi_target must be in (0, 1], got {phi_target}")
    levels: list[frozenset] = []
    phis: list[Fraction] = []
    total_cap = g.total_capacity()
    max_levels = (math.ceil(math.log2(total_cap)) if total_cap > 1 else 0) + 2
    estar: frozenset = frozenset(range(g.m))
    i = 1
    while True:
        result = decompose(g, estar, phi_target, derive_seed(seed, "level", i))
        levels.append(estar)
        phis.append(result.achieved_phi)
        if not result.cut_edges:
            break
        estar = result.cut_edges
        i += 1
        if i > max_levels:
            raise HalvingViolation(
                f"hierarchy construction passed {max_levels} levels without converging"
            )
    hier = Hierarchy(
        n=g.n,
        m=g.m,
        source=g.source,
        phi_target=phi_target,
        levels=tuple(levels),
        partitions=tuple(scc_for_levels(g, levels)),
        level_phis=tuple(phis),
    )
    hier.validate(g)
    return hier


def scc_for_levels(g: DirectedGraph, levels: Iterable[frozenset]) -> list[Partition]:
    """Partitions of g minus all higher-level edges, for levels 0..L."""
    levels = list(levels)
    above: list[frozenset] = [frozenset()] * (len(levels) + 1)
    acc: frozenset = frozenset()
    for i in range(len(levels) - 1, -1, -1):
        acc = acc | levels[i]
        above[i] = acc
    return [scc(g, above[i]) for i in range(len(levels) + 1)]
