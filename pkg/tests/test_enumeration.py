import itertools

import pytest

from msd_strata import (
    DeskScaleError,
    Edge,
    EnhancedLevelGraph,
    SignatureMu,
    brute_force_graphs,
    canonical_form,
    codim,
    enumerate_enhanced_level_graphs,
    enumerate_enhancements,
    enumerate_undegenerations,
    validate,
)
from msd_strata.enumeration import DeskLimits, kappa_bound


def test_canonical_vertex_permutation(gamma1):
    perm = {0: 2, 1: 0, 2: 1}
    shuffled = EnhancedLevelGraph(
        [gamma1.genera[1], gamma1.genera[2], gamma1.genera[0]],
        [gamma1.levels[1], gamma1.levels[2], gamma1.levels[0]],
        [perm[v] for v in gamma1.leg_vertex],
        [Edge((perm[e.ends[0]], perm[e.ends[1]]), e.kappa) for e in gamma1.edges],
        gamma1.mu,
    )
    assert canonical_form(shuffled)[1] == canonical_form(gamma1)[1]


def test_canonical_distinguishes_enhancements(gamma1, gamma2):
    assert canonical_form(gamma1)[1] != canonical_form(gamma2)[1]


def test_canonical_parallel_edges(banana22):
    flipped = EnhancedLevelGraph(
        banana22.genera,
        banana22.levels,
        banana22.leg_vertex,
        [banana22.edges[1], Edge(banana22.edges[0].ends[::-1], 2)],
        banana22.mu,
    )
    assert canonical_form(flipped)[1] == canonical_form(banana22)[1]


def test_canonical_idempotent(gamma1, cherry23, four_edge_tower, horizontal_pair):
    for g in (gamma1, cherry23, four_edge_tower, horizontal_pair):
        once, key_once = canonical_form(g)
        twice, key_twice = canonical_form(once)
        assert once == twice
        assert key_once == key_twice


def test_legless_twins_canonicalize():
    """Two interchangeable bottom vertices must not double-count."""
    mu = SignatureMu([6], 4)
    a = EnhancedLevelGraph(
        [2, 1, 1],
        [0, -1, -1],
        [0],
        [Edge((0, 1), 1), Edge((0, 2), 1)],
        mu,
    )
    b = EnhancedLevelGraph(
        [2, 1, 1],
        [0, -1, -1],
        [0],
        [Edge((0, 2), 1), Edge((0, 1), 1)],
        mu,
    )
    assert canonical_form(a)[1] == canonical_form(b)[1]


def test_running_skeleton_enhancements(running_skeleton):
    solutions = enumerate_enhancements(running_skeleton)
    kappas = sorted(tuple(e.kappa for e in g.edges) for g in solutions)
    assert kappas == [(1, 1, 3), (2, 2, 2), (3, 3, 1)]
    for g in solutions:
        assert validate(g).valid


def test_infeasible_skeleton():
    mu = SignatureMu([], 1)
    skeleton = EnhancedLevelGraph([1, 1], [0, -1], [], [Edge((0, 1))], mu)
    assert enumerate_enhancements(skeleton) == []


def test_cherry_skeleton_unique(cherry23):
    skeleton = EnhancedLevelGraph(
        cherry23.genera,
        cherry23.levels,
        cherry23.leg_vertex,
        [Edge(e.ends) for e in cherry23.edges],
        cherry23.mu,
    )
    solutions = enumerate_enhancements(skeleton)
    assert [tuple(e.kappa for e in g.edges) for g in solutions] == [(2, 3)]


def test_full_enumeration_contains_cherry(cherry23):
    graphs = enumerate_enhanced_level_graphs(cherry23.mu, 2)
    target = canonical_form(cherry23)[1]
    assert any(canonical_form(g)[1] == target for g in graphs)
    for g in graphs:
        assert validate(g).valid
        assert codim(g) <= 2


def test_enumeration_max_codim_zero(cherry23, smooth_graph):
    only = enumerate_enhanced_level_graphs(cherry23.mu, 0)
    assert len(only) == 1
    assert only[0].num_vertices == 1 and only[0].edges == ()
    only2 = enumerate_enhanced_level_graphs(smooth_graph.mu, 0)
    assert len(only2) == 1


def test_enumeration_refuses_large_input():
    mu = SignatureMu([2] * 9, 10)
    with pytest.raises(DeskScaleError):
        enumerate_enhanced_level_graphs(mu, 1)
    with pytest.raises(DeskScaleError):
        enumerate_enhanced_level_graphs(
            SignatureMu([0] * 9, 1), 1, DeskLimits(max_nodes=20, max_legs=8)
        )


def test_kappa_bound_covers_examples(gamma1, cherry23):
    assert max(e.kappa for e in gamma1.edges) <= kappa_bound(gamma1.mu)
    assert max(e.kappa for e in cherry23.edges) <= kappa_bound(cherry23.mu)


def test_optimized_matches_bruteforce():
    mu = SignatureMu([0, 0, -1, -1], 0)
    fast = enumerate_enhanced_level_graphs(mu, 2)
    slow = brute_force_graphs(mu, 2)
    fast_keys = {canonical_form(g)[1] for g in fast}
    slow_keys = {canonical_form(g)[1] for g in slow}
    assert fast_keys == slow_keys
    assert len(fast) == len(fast_keys)


def test_undegenerations_stay_enumerated(cherry23):
    graphs = enumerate_enhanced_level_graphs(cherry23.mu, 2)
    keys = {canonical_form(g)[1] for g in graphs}
    for g in graphs:
        for _, _, smaller in enumerate_undegenerations(g):
            assert canonical_form(smaller)[1] in keys


def test_enumeration_sorted_and_stable(cherry23):
    once = enumerate_enhanced_level_graphs(cherry23.mu, 1)
    twice = enumerate_enhanced_level_graphs(cherry23.mu, 1)
    assert once == twice
    keys = [canonical_form(g)[1] for g in once]
    assert keys == sorted(keys)
