"""Exact references and verifiers.

These are the ground-truth counterparts of the approximate machinery:
an exact rooted min-cut (a sweep of exact max-flows), an exhaustive
cut-expansion certifier for small graphs, and structural validators for
arborescences and packing results. Every function is pure and safe to
run concurrently.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import InternalError, ParameterError, ScaleError
from .graphcore import DirectedGraph, EdgeSet, Partition, cut_values, normalize
from .maxflow import FlowProblem, max_flow

__all__ = [
    "exact_rooted_mincut",
    "exact_global_mincut",
    "bruteforce_cut_expansion",
    "bruteforce_rooted_mincut",
    "verify_arborescence",
    "verify_packing",
]

_BRUTE_LIMIT = 16


def exact_rooted_mincut(g: DirectedGraph) -> tuple[int, frozenset]:
    """Exact rooted connectivity: min over t != s of max-flow(s, t).

    Returns the value and a witness sink-side set T (so the cut is
    (V - T, T) with the source on the left). Value 0 means some vertex is
    unreachable from the source.
    """
    if g.n < 2:
        raise ParameterError("rooted min-cut needs at least one non-source vertex")
    s = g.source
    big = g.total_capacity() + 1
    best: int | None = None
    witness: frozenset | None = None
    targets = sorted((v for v in range(g.n) if v != s), key=lambda v: (g.in_capacity(v), v))
    for t in targets:
        if best == 0:
            break
        bound = best  # a run that reaches the bound cannot improve the minimum
        res = max_flow(FlowProblem(g, {s: big}, {t: big}, flow_bound=bound))
        if best is None or res.value < best:
            best = res.value
            witness = res.min_cut_side
    assert best is not None and witness is not None
    check = cut_values(g, witness).rho
    if check != best:
        raise InternalError(f"witness cut re-evaluates to {check}, expected {best}")
    return best, witness


def bruteforce_rooted_mincut(g: DirectedGraph) -> tuple[int, frozenset]:
    """Min over every nonempty S avoiding the source of rho(S), by full
    enumeration; cross-checks `exact_rooted_mincut` at small n."""
    if g.n > _BRUTE_LIMIT:
        raise ScaleError(f"enumeration limited to n <= {_BRUTE_LIMIT}, got {g.n}")
    if g.n < 2:
        raise ParameterError("rooted min-cut needs at least one non-source vertex")
    others = [v for v in range(g.n) if v != g.source]
    best = None
    witness = None
    for mask in range(1, 1 << len(others)):
        subset = frozenset(others[i] for i in range(len(others)) if mask >> i & 1)
        rho = cut_values(g, subset).rho
        if best is None or rho < best:
            best, witness = rho, subset
    return best, witness


def exact_global_mincut(g: DirectedGraph) -> int:
    """Global directed min-cut: the smaller of the rooted min-cut in g and
    in g with every edge reversed."""
    forward, _ = exact_rooted_mincut(g)
    reversed_g = normalize([(v, u, c) for u, v, c in g.edges], g.n, g.source)
    if reversed_g.n < 2:
        raise ParameterError("global min-cut needs at least two vertices")
    backward, _ = exact_rooted_mincut(reversed_g)
    return min(forward, backward)


def bruteforce_cut_expansion(
    g: DirectedGraph, partition: Partition, estar: EdgeSet
) -> Fraction | float:
    """Largest phi certified by exhaustive cut enumeration.

    For every component C of the partition and every vertex set T whose
    terminal degree inside C is positive but at most half of C's, the
    certified phi is min over such (C, T) of
    min(delta(T), rho(T)) / deg_estar(C & T). Returns +inf when no
    constraint binds (for instance when the terminal set is empty).
    """
    n = g.n
    if n > _BRUTE_LIMIT:
        raise ScaleError(f"enumeration limited to n <= {_BRUTE_LIMIT}, got {n}")
    size = 1 << n
    subsets = np.arange(size, dtype=np.int64)
    in_t = ((subsets[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)

    delta = np.zeros(size, dtype=np.int64)
    rho = np.zeros(size, dtype=np.int64)
    for u, v, c in g.edges:
        tin = in_t[:, u]
        hin = in_t[:, v]
        delta += c * (tin & ~hin)
        rho += c * (hin & ~tin)
    min_side = np.minimum(delta, rho)

    deg = np.zeros(n, dtype=np.int64)
    for eid in estar:
        u, v, c = g.edges[eid]
        deg[u] += c
        deg[v] += c

    best_num: int | None = None
    best_den: int | None = None
    for comp in partition.components:
        members = sorted(comp)
        comp_deg = deg[members]
        total = int(comp_deg.sum())
        if total == 0:
            continue
        deg_in_t = in_t[:, members] @ comp_deg
        valid = (deg_in_t > 0) & (2 * deg_in_t <= total)
        if not valid.any():
            continue
        nums = min_side[valid]
        dens = deg_in_t[valid]
        # Float pass to shortlist candidates, exact comparison to decide.
        ratios = nums / dens
        cutoff = ratios.min() * (1 + 1e-9) + 1e-12
        for idx in np.nonzero(ratios <= cutoff)[0]:
            a, b = int(nums[idx]), int(dens[idx])
            if best_num is None or a * best_den < best_num * b:
                best_num, best_den = a, b
    if best_num is None:
        return math.inf
    return Fraction(best_num, best_den)


def verify_arborescence(g: DirectedGraph, tree: Iterable[int]) -> tuple[bool, str | None]:
    """Check that `tree` is a spanning tree rooted at the source with every
    edge directed away from it. Returns (ok, first violation)."""
    tree = list(tree)
    s = g.source
    for eid in tree:
        if not 0 <= eid < g.m:
            return False, f"edge id {eid} is not a real edge"
    if len(set(tree)) != len(tree):
        return False, "tree repeats an edge id"
    if len(tree) != g.n - 1:
        return False, f"tree has {len(tree)} edges, expected {g.n - 1}"
    indeg = [0] * g.n
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for eid in tree:
        u, v, _c = g.edges[eid]
        indeg[v] += 1
        adj[u].append(v)
    if indeg[s] != 0:
        return False, "source has an incoming tree edge"
    for v in range(g.n):
        if v != s and indeg[v] != 1:
            return False, f"vertex {v} has tree in-degree {indeg[v]}, expected 1"
    seen = {s}
    stack = [s]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) != g.n:
        missing = min(set(range(g.n)) - seen)
        return False, f"vertex {missing} unreachable inside the tree"
    return True, None


def verify_packing(g: DirectedGraph, result, k: int) -> dict:
    """Validate a packing result against the exact oracle.

    Tree results must be k valid arborescences whose recomputed congestion
    matches, with rooted connectivity at least k / congestion. Cut results
    must contain the source, have delta less than k, and be corroborated
    by exact connectivity below k. Returns a JSON-ready report.
    """
    checks: list[dict] = []

    def check(name: str, ok: bool, detail: str = "") -> None:
        checks.append({"name": name, "ok": bool(ok), "detail": detail})

    if result.kind == "arborescences":
        trees = result.trees or ()
        check("tree_count", len(trees) == k, f"{len(trees)} trees for k={k}")
        for idx, tree in enumerate(trees):
            ok, why = verify_arborescence(g, tree)
            check(f"arborescence_{idx + 1}", ok, why or "")
        usage: dict[int, int] = {}
        for tree in trees:
            for eid in tree:
                usage[eid] = usage.get(eid, 0) + 1
        congestion = max(usage.values(), default=0)
        check(
            "congestion_recomputed",
            congestion == result.congestion,
            f"recomputed {congestion}, reported {result.congestion}",
        )
        if g.n >= 2:
            exact, _ = exact_rooted_mincut(g)
            certified = congestion > 0 and k <= exact * congestion
            check(
                "certificate",
                certified or g.m == 0,
                f"k={k}, congestion={congestion}, exact connectivity={exact}",
            )
    elif result.kind == "cut":
        cut = set(result.cut_vertices or ())
        check("source_inside", g.source in cut, "")
        delta = cut_values(g, cut).delta
        check("delta_reeval", delta == result.cut_delta, f"recomputed delta {delta}")
        check("delta_below_k", delta < k, f"delta {delta} vs k {k}")
        if g.n >= 2:
            exact, _ = exact_rooted_mincut(g)
            check("oracle_below_k", exact < k, f"exact connectivity {exact}")
    else:
        check("kind", False, f"unknown result kind {result.kind!r}")
    return {"kind": "verify", "ok": all(c["ok"] for c in checks), "checks": checks}
