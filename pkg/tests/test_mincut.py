"""Approximate rooted min-cut: sampling, component cuts, soundness."""
import random

import pytest
from hypothesis import given, settings

from arborpack.decomp import build_hierarchy
from arborpack.errors import EmptySampleError, ParameterError
from arborpack.graphcore import cut_values, normalize
from arborpack.mincut import (
    approx_rooted_mincut,
    mincut_into_component,
    sample_endpoints,
)
from arborpack.oracle import exact_rooted_mincut

from .conftest import digraphs


class TestSampleEndpoints:
    def test_single_edge_endpoints_only(self):
        g = normalize([(1, 2, 1)], 3, 0)
        out = sample_endpoints(g, [0], 50, random.Random(0))
        assert set(out) <= {1, 2}

    def test_capacity_weighted_frequency(self):
        # Edge (3,4) has three quarters of the capacity; binomial bounds
        # give a +-3 sigma window of about 0.013 at 10^4 trials.
        g = normalize([(1, 2, 1), (3, 4, 3)], 5, 0)
        out = sample_endpoints(g, [0, 1], 10_000, random.Random(7))
        heavy = sum(1 for v in out if v in (3, 4)) / len(out)
        assert abs(heavy - 0.75) < 0.013

    def test_seeded_reproducible(self):
        g = normalize([(1, 2, 1), (2, 3, 2)], 4, 0)
        a = sample_endpoints(g, [0, 1], 1, random.Random(123))
        b = sample_endpoints(g, [0, 1], 1, random.Random(123))
        assert a == b

    def test_empty_edge_set_raises(self):
        g = normalize([], 3, 0)
        with pytest.raises(EmptySampleError):
            sample_endpoints(g, [], 1, random.Random(0))


class TestMincutIntoComponent:
    def test_singleton_component(self):
        g = normalize([(0, 1, 2), (0, 1, 1)], 2, 0)
        cand = mincut_into_component(g, frozenset({1}), 1)
        assert cand.vertex_set == frozenset({1})
        assert cand.rho == 3

    def test_tie_between_nested_sets(self):
        # x -> a -> v and x -> v, unit capacities: both {v} and {a, v}
        # have two incoming edges.
        g = normalize([(0, 1, 1), (1, 2, 1), (0, 2, 1)], 3, 0)
        cand = mincut_into_component(g, frozenset({1, 2}), 2)
        assert cand.rho == 2
        assert cand.vertex_set in (frozenset({2}), frozenset({1, 2}))
        assert cut_values(g, cand.vertex_set).rho == 2

    def test_inner_bottleneck(self):
        # x -> a with capacity 5, a -> v with capacity 1.
        g = normalize([(0, 1, 5), (1, 2, 1)], 3, 0)
        cand = mincut_into_component(g, frozenset({1, 2}), 2)
        assert cand.vertex_set == frozenset({2})
        assert cand.rho == 1

    def test_requires_membership(self):
        g = normalize([(0, 1, 1)], 3, 0)
        with pytest.raises(ParameterError):
            mincut_into_component(g, frozenset({1}), 2)


class TestApproxRootedMincut:
    def test_path_found_at_level_zero(self):
        g = normalize([(0, 1, 1), (1, 2, 1)], 3, 0)
        h = build_hierarchy(g, seed=1)
        report = approx_rooted_mincut(g, h, seed=0)
        assert report.best.rho == 1
        assert report.best.level == 0

    def test_isolated_vertex_gives_zero(self):
        g = normalize([(0, 1, 1)], 3, 0)
        h = build_hierarchy(g, seed=1)
        report = approx_rooted_mincut(g, h, seed=0)
        assert report.best.rho == 0
        assert report.best.vertex_set == frozenset({2})

    def test_candidates_are_valid_cuts(self):
        g = normalize([(0, 1, 2), (1, 2, 1), (2, 1, 1), (2, 3, 2), (3, 2, 1)], 4, 0)
        h = build_hierarchy(g, seed=3)
        report = approx_rooted_mincut(g, h, seed=5)
        for cand in report.candidates:
            assert 0 not in cand.vertex_set
            assert cand.vertex_set
            assert cut_values(g, cand.vertex_set).rho == cand.rho

    def test_mismatched_hierarchy_rejected(self):
        g1 = normalize([(0, 1, 1)], 2, 0)
        g2 = normalize([(0, 1, 1), (1, 2, 1)], 3, 0)
        h = build_hierarchy(g1, seed=0)
        with pytest.raises(ParameterError):
            approx_rooted_mincut(g2, h, seed=0)

    def test_deterministic_under_seed(self):
        g = normalize(
            [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 1, 1), (1, 3, 1), (0, 2, 1)], 4, 0
        )
        h = build_hierarchy(g, seed=2)
        a = approx_rooted_mincut(g, h, seed=11)
        b = approx_rooted_mincut(g, h, seed=11)
        assert a == b

    @given(digraphs(min_n=2, max_n=8, max_m=20, max_cap=3))
    @settings(max_examples=30)
    def test_sound_upper_bound_and_reevaluation(self, g):
        h = build_hierarchy(g, seed=2)
        report = approx_rooted_mincut(g, h, seed=4)
        exact, _ = exact_rooted_mincut(g)
        assert report.best.rho >= exact
        assert cut_values(g, report.best.vertex_set).rho == report.best.rho

    @given(digraphs(min_n=2, max_n=8, max_m=16, max_cap=3))
    @settings(max_examples=30)
    def test_exact_when_minimum_is_a_singleton(self, g):
        exact, _ = exact_rooted_mincut(g)
        singleton_best = min(
            g.in_capacity(v) for v in range(g.n) if v != g.source
        )
        if singleton_best == exact:
            h = build_hierarchy(g, seed=2)
            report = approx_rooted_mincut(g, h, seed=4)
            assert report.best.rho == exact


class TestStructuralEdgeCases:
    def test_unreachable_scc_found_by_component_probe(self):
        # The cycle {1, 2} has no incoming edges: no singleton shows the
        # zero cut, but the component probe contracts an empty outside
        # boundary and reports it exactly.
        g = normalize([(1, 2, 1), (2, 1, 1)], 3, 0)
        h = build_hierarchy(g, seed=1)
        report = approx_rooted_mincut(g, h, seed=2)
        assert report.best.rho == 0
        assert report.best.vertex_set == frozenset({1, 2})
        assert report.best.level >= 1

    def test_large_capacities(self):
        w = 1 << 20
        g = normalize(
            [(0, 1, w), (1, 2, w // 2), (2, 1, w // 3), (0, 2, 7),
             (2, 3, w // 5), (3, 2, 1), (1, 3, 123456)],
            4,
            0,
        )
        h = build_hierarchy(g, seed=3)
        h.validate(g)
        report = approx_rooted_mincut(g, h, seed=4)
        exact, _ = exact_rooted_mincut(g)
        assert exact == (w // 5) + 123456  # rho({3})
        assert report.best.rho >= exact
        assert cut_values(g, report.best.vertex_set).rho == report.best.rho
