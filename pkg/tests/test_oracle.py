"""Exact oracles and verifiers."""
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings

from arborpack.errors import ParameterError, ScaleError
from arborpack.graphcore import normalize, scc
from arborpack.oracle import (
    bruteforce_cut_expansion,
    bruteforce_rooted_mincut,
    exact_global_mincut,
    exact_rooted_mincut,
    verify_arborescence,
    verify_packing,
)
from arborpack.packing import PackingResult

from .conftest import digraphs


class TestExactRootedMincut:
    def test_path(self):
        g = normalize([(0, 1, 1), (1, 2, 1)], 3, 0)
        value, side = exact_rooted_mincut(g)
        assert value == 1
        assert 0 not in side

    def test_bidirected_k4(self):
        raw = [(u, v, 1) for u in range(4) for v in range(4) if u != v]
        g = normalize(raw, 4, 0)
        value, _ = exact_rooted_mincut(g)
        assert value == 3

    def test_isolated_vertex(self):
        g = normalize([(0, 1, 1)], 3, 0)
        value, side = exact_rooted_mincut(g)
        assert value == 0
        assert 2 in side

    def test_single_vertex_rejected(self):
        g = normalize([], 1, 0)
        with pytest.raises(ParameterError):
            exact_rooted_mincut(g)

    @given(digraphs(min_n=2, max_n=8, max_m=18, max_cap=3))
    @settings(max_examples=40)
    def test_matches_enumeration(self, g):
        value, _ = exact_rooted_mincut(g)
        brute, _ = bruteforce_rooted_mincut(g)
        assert value == brute

    def test_global_mincut_takes_both_directions(self):
        # Forward rooted connectivity is 1 but reversing exposes rho({s}) = 0
        # seen from the reversed graph's perspective of vertex 1, so the
        # global cut is the smaller of the two sweeps.
        g = normalize([(0, 1, 2), (1, 2, 1), (2, 1, 2)], 3, 0)
        forward, _ = exact_rooted_mincut(g)
        assert exact_global_mincut(g) <= forward


class TestBruteforceCutExpansion:
    def test_single_bidirected_edge(self):
        # Component {1, 2} with both unit edges as terminals: the only
        # constrained sets are the two singletons, each with degree 2 and
        # min(delta, rho) = 1, so the certified value is 1/2.
        g = normalize([(1, 2, 1), (2, 1, 1)], 3, 0)
        part = scc(g)
        phi = bruteforce_cut_expansion(g, part, g.edge_set())
        assert phi == Fraction(1, 2)

    def test_empty_terminals_unconstrained(self):
        g = normalize([(1, 2, 1), (2, 1, 1)], 3, 0)
        phi = bruteforce_cut_expansion(g, scc(g), frozenset())
        assert phi == math.inf

    def test_components_evaluated_independently(self):
        g = normalize([(1, 2, 1), (2, 1, 1), (3, 4, 1), (4, 3, 1)], 5, 0)
        phi = bruteforce_cut_expansion(g, scc(g), g.edge_set())
        assert phi == Fraction(1, 2)

    def test_scale_limit(self):
        g = normalize([], 17, 0)
        with pytest.raises(ScaleError):
            bruteforce_cut_expansion(g, scc(g), frozenset())

    def test_matches_naive_enumeration(self):
        import itertools

        from arborpack.graphcore import cut_values, restricted_degrees

        g = normalize(
            [(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 1, 1), (1, 3, 1), (3, 2, 1)], 4, 0
        )
        part = scc(g)
        estar = g.edge_set()
        table = restricted_degrees(g, estar)
        best = None
        for comp in part.components:
            total = table.vol(comp)
            if total == 0:
                continue
            for r in range(1, g.n + 1):
                for combo in itertools.combinations(range(g.n), r):
                    t = set(combo)
                    deg_t = table.vol(comp & t)
                    if deg_t == 0 or 2 * deg_t > total:
                        continue
                    dv = cut_values(g, t)
                    ratio = Fraction(min(dv.delta, dv.rho), deg_t)
                    if best is None or ratio < best:
                        best = ratio
        assert bruteforce_cut_expansion(g, part, estar) == best


class TestVerifyArborescence:
    def test_path_tree(self):
        g = normalize([(0, 1, 1), (1, 2, 1)], 3, 0)
        ok, why = verify_arborescence(g, [0, 1])
        assert ok, why

    def test_missing_edge(self):
        g = normalize([(0, 1, 1), (1, 2, 1)], 3, 0)
        ok, why = verify_arborescence(g, [0])
        assert not ok
        assert "expected 2" in why

    def test_extra_edge(self):
        g = normalize([(0, 1, 1), (1, 2, 1), (0, 2, 1)], 3, 0)
        ok, why = verify_arborescence(g, [0, 1, 2])
        assert not ok

    def test_wrong_direction_unreachable(self):
        g = normalize([(0, 1, 1), (2, 1, 1)], 3, 0)
        ok, why = verify_arborescence(g, [0, 1])
        assert not ok


class TestVerifyPacking:
    def test_valid_single_tree(self):
        g = normalize([(0, 1, 1), (1, 2, 1)], 3, 0)
        result = PackingResult(
            kind="arborescences", k=1, trees=((0, 1),), congestion=1
        )
        report = verify_packing(g, result, 1)
        assert report["ok"]

    def test_cut_with_delta_equal_k_fails(self):
        g = normalize([(0, 1, 1)], 2, 0)
        result = PackingResult(
            kind="cut", k=1, cut_vertices=frozenset({0}), cut_delta=1
        )
        report = verify_packing(g, result, 1)
        assert not report["ok"]

    def test_shared_edge_congestion_two(self):
        g = normalize([(0, 1, 1), (1, 2, 1), (0, 2, 1)], 3, 0)
        trees = ((0, 1), (0, 2))
        result = PackingResult(
            kind="arborescences", k=2, trees=trees, congestion=2
        )
        report = verify_packing(g, result, 2)
        # Certificate: connectivity >= k / congestion = 1, and the exact
        # rooted connectivity here is 1.
        assert report["ok"]
