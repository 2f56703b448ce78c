"""Horizontal and vertical undegenerations of enhanced level graphs.

An undegeneration passes to a less degenerate graph: smoothing a set of
horizontal edges contracts them in the dual graph, and merging adjacent
levels contracts every vertical edge whose endpoint levels become equal.
Vertical undegenerations are indexed by subsets J of the below-zero levels
(the levels that stay separated), which avoids enumerating the many level
surjections that produce the same graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .level_graph import Edge, EnhancedLevelGraph, validate


@dataclass(frozen=True)
class Undegeneration:
    """Bookkeeping for one undegeneration step.

    ``delta`` maps old levels to new levels (order non-decreasing, onto
    {0..-M}); ``smoothed_horizontal`` are the horizontal edges removed;
    ``contracted_edges`` is the full set of removed edges; ``vertex_map``
    sends old vertex indices to new ones and ``edge_map`` old surviving edge
    indices to new ones.
    """

    delta: tuple  # pairs (old_level, new_level), descending in old_level
    smoothed_horizontal: tuple
    contracted_edges: tuple
    vertex_map: tuple
    edge_map: tuple  # pairs (old_edge, new_edge)

    def level_image(self, level: int) -> int:
        for old, new in self.delta:
            if old == level:
                return new
        raise KeyError(level)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _contract(graph: EnhancedLevelGraph, contracted: set, new_level) -> tuple:
    """Contract the given edges, merging vertices and absorbing cycles.

    ``new_level`` maps an old level to its new value.  The genus of a merged
    vertex is the sum of the old genera plus the first Betti number of the
    contracted subgraph lying in that merge class.  Returns the new graph and
    an (vertex_map, edge_map) pair.
    """
    uf = _UnionFind(graph.num_vertices)
    for e in contracted:
        u, v = graph.edges[e].ends
        uf.union(u, v)

    classes = {}
    for v in range(graph.num_vertices):
        classes.setdefault(uf.find(v), []).append(v)
    # keep a deterministic vertex order: by class representative
    reps = sorted(classes)
    vertex_map = [0] * graph.num_vertices
    for new_idx, rep in enumerate(reps):
        for v in classes[rep]:
            vertex_map[v] = new_idx

    genera = []
    levels = []
    for rep in reps:
        members = classes[rep]
        inside = [
            e for e in contracted
            if uf.find(graph.edges[e].ends[0]) == rep
        ]
        betti = len(inside) - len(members) + 1
        genera.append(sum(graph.genera[v] for v in members) + betti)
        levels.append(new_level[graph.levels[members[0]]])

    legs = tuple(vertex_map[v] for v in graph.leg_vertex)
    edges = []
    edge_map = []
    for i, e in enumerate(graph.edges):
        if i in contracted:
            continue
        edge_map.append((i, len(edges)))
        edges.append(Edge((vertex_map[e.ends[0]], vertex_map[e.ends[1]]), e.kappa))

    new_graph = EnhancedLevelGraph(genera, levels, legs, edges, graph.mu)
    return new_graph, tuple(vertex_map), tuple(edge_map)


def undegenerate_vertical(graph: EnhancedLevelGraph, delta: dict) -> tuple:
    """Merge levels according to the surjection ``delta``.

    ``delta`` maps every occupied level onto {0..-M}, order non-decreasing;
    each vertical edge whose endpoint levels map to the same value is
    contracted.  Enhancements on surviving edges are kept.
    """
    occupied = graph.level_set()
    if set(delta) != set(occupied):
        raise ValueError("delta must be defined exactly on the occupied levels")
    values = [delta[l] for l in occupied]
    if any(values[i] < values[i + 1] for i in range(len(values) - 1)):
        raise ValueError("delta must be order non-decreasing")
    target = sorted(set(values), reverse=True)
    if target != list(range(0, -len(target), -1)):
        raise ValueError("delta must map onto {0..-M}")

    contracted = {
        e
        for e in graph.vertical_edges()
        if delta[graph.level_top(e)] == delta[graph.level_bottom(e)]
    }
    new_graph, vertex_map, edge_map = _contract(graph, contracted, delta)
    record = Undegeneration(
        delta=tuple((l, delta[l]) for l in occupied),
        smoothed_horizontal=(),
        contracted_edges=tuple(sorted(contracted)),
        vertex_map=vertex_map,
        edge_map=edge_map,
    )
    assert validate(new_graph).valid
    return new_graph, record


def undegenerate_horizontal(graph: EnhancedLevelGraph, smoothed) -> tuple:
    """Smooth the given horizontal edges (contract them in the dual graph)."""
    smoothed = set(smoothed)
    for e in smoothed:
        if not graph.is_horizontal(e):
            raise ValueError("edge %d is vertical, cannot smooth it" % e)
    identity = {l: l for l in graph.level_set()}
    new_graph, vertex_map, edge_map = _contract(graph, smoothed, identity)
    new_graph = new_graph.with_normalized_levels()
    record = Undegeneration(
        delta=tuple((l, l) for l in graph.level_set()),
        smoothed_horizontal=tuple(sorted(smoothed)),
        contracted_edges=tuple(sorted(smoothed)),
        vertex_map=vertex_map,
        edge_map=edge_map,
    )
    assert validate(new_graph).valid
    return new_graph, record


def undegenerate_by_level_subset(graph: EnhancedLevelGraph, kept_levels) -> tuple:
    """Keep exactly the level passages in ``kept_levels``.

    A vertical edge survives iff its crossing interval [bottom, top) meets
    the subset; consecutive levels not separated by the subset are merged.
    The empty subset smooths every vertical edge; the full set of below-zero
    levels is the identity.
    """
    kept = set(kept_levels)
    below = set(graph.level_set()[1:])
    if not kept <= below:
        raise ValueError("kept levels must be occupied levels below zero")
    delta = {
        l: -sum(1 for j in kept if j >= l)
        for l in graph.level_set()
    }
    return undegenerate_vertical(graph, delta)


def enumerate_undegenerations(graph: EnhancedLevelGraph) -> list:
    """All compositions of a vertical and a horizontal undegeneration.

    Returns triples (J, D, graph) for every subset J of the below-zero
    levels and every subset D of the horizontal edges, in lexicographic
    order; there are 2^N * 2^H of them, each produced once.
    """
    below = graph.level_set()[1:]
    horizontals = graph.horizontal_edges()
    out = []
    for jsize in range(len(below) + 1):
        for j_subset in itertools.combinations(below, jsize):
            vert_graph, vert_rec = undegenerate_by_level_subset(graph, j_subset)
            old_to_new = dict(vert_rec.edge_map)
            for dsize in range(len(horizontals) + 1):
                for d_subset in itertools.combinations(horizontals, dsize):
                    mapped = [old_to_new[e] for e in d_subset]
                    final, _ = undegenerate_horizontal(vert_graph, mapped)
                    out.append((j_subset, d_subset, final))
    return out
