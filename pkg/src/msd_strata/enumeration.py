"""Desk-scale enumeration of enhanced level graphs up to isomorphism.

Isomorphisms fix the labeled legs pointwise, so only legless vertices with
equal (level, genus) can ever be exchanged; canonical forms are computed by
brute-force minimization over exactly those exchanges, with parallel edges
normalized by sorting.  The enumerators generate decorated skeletons and
solve the per-vertex degree equations for the enhancements.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from typing import Optional

from .level_graph import (
    Edge,
    EnhancedLevelGraph,
    SignatureMu,
    codim,
    validate,
)


class DeskScaleError(ValueError):
    """The requested enumeration exceeds the configured search bounds."""


@dataclass(frozen=True)
class DeskLimits:
    """Caps keeping the exhaustive searches at desk scale."""

    max_nodes: int = 6  # cap on 3g - 3 + n, the maximal number of edges
    max_legs: int = 8


def kappa_bound(mu: SignatureMu) -> int:
    """A priori bound on any enhancement, from the vertex degree budgets."""
    lowest = min([0] + list(mu.m))
    positive = sum(v for v in mu.m if v > 0)
    return 2 - 2 * lowest + positive + 2 * mu.genus


# ----------------------------------------------------------------------
# canonical forms
# ----------------------------------------------------------------------

def _serialize(graph: EnhancedLevelGraph) -> tuple:
    vertex_part = tuple(
        (graph.levels[v], graph.genera[v], tuple(sorted(graph.legs_at(v))))
        for v in range(graph.num_vertices)
    )
    edge_part = tuple(
        sorted(
            (min(e.ends), max(e.ends), -1 if e.kappa is None else e.kappa)
            for e in graph.edges
        )
    )
    return (tuple(graph.mu.m), graph.mu.genus, vertex_part, edge_part)


def _relabel(graph: EnhancedLevelGraph, perm: list) -> EnhancedLevelGraph:
    """Move vertex v to position perm[v]."""
    inv = [0] * len(perm)
    for old, new in enumerate(perm):
        inv[new] = old
    return EnhancedLevelGraph(
        tuple(graph.genera[inv[i]] for i in range(graph.num_vertices)),
        tuple(graph.levels[inv[i]] for i in range(graph.num_vertices)),
        tuple(perm[v] for v in graph.leg_vertex),
        tuple(Edge((perm[e.ends[0]], perm[e.ends[1]]), e.kappa) for e in graph.edges),
        graph.mu,
    )


def canonical_form(graph: EnhancedLevelGraph) -> tuple:
    """Minimal relabeling of a graph and its canonical key.

    Vertices are ordered by (level descending, genus, legs); legless twins
    with equal level and genus are resolved by trying every exchange and
    keeping the lexicographically smallest serialization.  Keys of two
    graphs agree iff the graphs are isomorphic by a leg-fixing isomorphism.
    """
    keys = [
        (-graph.levels[v], graph.genera[v], tuple(sorted(graph.legs_at(v))) or (None,))
        for v in range(graph.num_vertices)
    ]
    order = sorted(range(graph.num_vertices), key=lambda v: (keys[v], v))
    groups = []
    for _, group in itertools.groupby(order, key=lambda v: keys[v]):
        groups.append(list(group))

    best = None
    best_graph = None
    for arrangement in itertools.product(
        *(itertools.permutations(g) for g in groups)
    ):
        flat = [v for group in arrangement for v in group]
        perm = [0] * graph.num_vertices
        for position, v in enumerate(flat):
            perm[v] = position
        candidate = _relabel(graph, perm)
        ser = _serialize(candidate)
        if best is None or ser < best:
            best = ser
            best_graph = candidate
    # normalize the stored edge order of the winner
    edge_sorted = sorted(
        best_graph.edges,
        key=lambda e: (min(e.ends), max(e.ends), -1 if e.kappa is None else e.kappa),
    )
    best_graph = EnhancedLevelGraph(
        best_graph.genera,
        best_graph.levels,
        best_graph.leg_vertex,
        tuple(Edge((min(e.ends), max(e.ends)), e.kappa) for e in edge_sorted),
        best_graph.mu,
    )
    key = repr(_serialize(best_graph)).encode()
    return best_graph, key


def canonical_key_digest(key: bytes) -> str:
    return hashlib.sha256(key).hexdigest()[:16]


# ----------------------------------------------------------------------
# enhancements of a skeleton
# ----------------------------------------------------------------------

def enumerate_enhancements(skeleton: EnhancedLevelGraph, mu=None) -> list:
    """All positive enhancement assignments solving the degree equations.

    The skeleton is an enhanced level graph whose vertical edges carry no
    kappa yet; terminating search is guaranteed by the a priori bound from
    the degree budgets.
    """
    if mu is None:
        mu = skeleton.mu
    verticals = [i for i in range(skeleton.num_edges) if not skeleton.is_horizontal(i)]
    bound = kappa_bound(mu)

    # per-vertex constants: sum over up-edges of kappa minus sum over
    # down-edges of kappa must hit the target
    target = {}
    for v in range(skeleton.num_vertices):
        legsum = sum(mu.m[j - 1] for j in skeleton.legs_at(v))
        hor = skeleton.horizontal_half_edge_count(v)
        ups = [e for e in verticals if skeleton.top_end(e) == v]
        downs = [e for e in verticals if skeleton.bottom_end(e) == v]
        target[v] = 2 * skeleton.genera[v] - 2 - legsum + hor + len(ups) + len(downs)

    incidence = {
        v: (
            [e for e in verticals if skeleton.top_end(e) == v],
            [e for e in verticals if skeleton.bottom_end(e) == v],
        )
        for v in range(skeleton.num_vertices)
    }

    solutions = []

    def feasible(assigned):
        for v, (ups, downs) in incidence.items():
            lo = hi = 0
            ok = True
            for e in ups:
                if e in assigned:
                    lo += assigned[e]
                    hi += assigned[e]
                else:
                    lo += 1
                    hi += bound
            for e in downs:
                if e in assigned:
                    lo -= assigned[e]
                    hi -= assigned[e]
                else:
                    lo -= bound
                    hi -= 1
            if not (lo <= target[v] <= hi):
                return False
        return True

    def assign(pos, acc):
        if pos == len(verticals):
            solutions.append(dict(acc))
            return
        e = verticals[pos]
        for k in range(1, bound + 1):
            acc[e] = k
            if feasible(acc):
                assign(pos + 1, acc)
            del acc[e]

    if feasible({}):
        assign(0, {})

    out = []
    for sol in solutions:
        edges = tuple(
            Edge(e.ends, sol[i]) if i in sol else e
            for i, e in enumerate(skeleton.edges)
        )
        out.append(
            EnhancedLevelGraph(
                skeleton.genera, skeleton.levels, skeleton.leg_vertex, edges, mu
            )
        )
    return out


# ----------------------------------------------------------------------
# full enumeration
# ----------------------------------------------------------------------

def _connected(num_vertices: int, pairs) -> bool:
    if num_vertices == 1:
        return True
    seen = {0}
    stack = [0]
    adjacency = {v: set() for v in range(num_vertices)}
    for u, v in pairs:
        adjacency[u].add(v)
        adjacency[v].add(u)
    while stack:
        v = stack.pop()
        for w in adjacency[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == num_vertices


def _surjective_level_maps(num_vertices: int, depth: int):
    """Maps from vertices onto {0, -1, ..., -depth}."""
    values = list(range(0, -depth - 1, -1))
    for combo in itertools.product(values, repeat=num_vertices):
        if set(combo) == set(values):
            yield combo


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def enumerate_enhanced_level_graphs(
    mu: SignatureMu, max_codim: int, limits: Optional[DeskLimits] = None
) -> list:
    """Every admissible enhanced level graph of the type, one per iso class.

    Covers all graphs with at most ``max_codim`` levels below zero plus
    horizontal edges; output is sorted by canonical key.  Raises
    DeskScaleError when the configured bounds are exceeded.
    """
    limits = limits or DeskLimits()
    g, n = mu.genus, mu.n
    max_edges = 3 * g - 3 + n
    if max_edges > limits.max_nodes:
        raise DeskScaleError(
            "up to %d nodes exceeds the desk-scale cap %d"
            % (max_edges, limits.max_nodes)
        )
    if n > limits.max_legs:
        raise DeskScaleError("%d legs exceeds the desk-scale cap" % n)

    found = {}
    for graph in _generate(mu, max_codim, max_edges, optimized=True):
        canonical, key = canonical_form(graph)
        if key not in found:
            found[key] = canonical
    return [found[k] for k in sorted(found)]


def brute_force_graphs(mu: SignatureMu, max_codim: int) -> list:
    """Unpruned reference generator; same output contract as the optimized
    enumerator but every structural combination is tried and filtered only
    at the end.  Only sensible for tiny signatures."""
    max_edges = 3 * mu.genus - 3 + mu.n
    found = {}
    for graph in _generate(mu, max_codim, max_edges, optimized=False):
        canonical, key = canonical_form(graph)
        if key not in found:
            found[key] = canonical
    return [found[k] for k in sorted(found)]


def _generate(mu, max_codim, max_edges, optimized):
    g, n = mu.genus, mu.n
    if max_edges < 0:
        return
    for num_vertices in range(1, max_edges + 2):
        lower_edges = num_vertices - 1 if optimized else 0
        for num_edges in range(lower_edges, max_edges + 1):
            h1 = num_edges - num_vertices + 1
            if optimized and (h1 < 0 or h1 > g):
                continue
            pair_pool = [
                (u, v)
                for u in range(num_vertices)
                for v in range(u, num_vertices)
            ]
            for pairs in itertools.combinations_with_replacement(pair_pool, num_edges):
                if optimized and not _connected(num_vertices, pairs):
                    continue
                max_depth = min(max_codim, num_vertices - 1)
                for depth in range(0, max_depth + 1) if optimized else range(
                    0, num_vertices
                ):
                    for levels in _surjective_level_maps(num_vertices, depth):
                        horizontal = sum(
                            1 for (u, v) in pairs if levels[u] == levels[v]
                        )
                        if optimized and depth + horizontal > max_codim:
                            continue
                        genus_budget = g - h1
                        if optimized and genus_budget < 0:
                            continue
                        genus_options = (
                            _compositions(genus_budget, num_vertices)
                            if optimized
                            else itertools.product(range(g + 1), repeat=num_vertices)
                        )
                        for genera in genus_options:
                            for legs in itertools.product(
                                range(num_vertices), repeat=n
                            ):
                                skeleton = EnhancedLevelGraph(
                                    genera,
                                    levels,
                                    legs,
                                    [Edge(p) for p in pairs],
                                    mu,
                                )
                                if optimized:
                                    if not _stable_enough(skeleton):
                                        continue
                                    candidates = enumerate_enhancements(skeleton, mu)
                                else:
                                    # discard skeletons that fail any
                                    # kappa-independent rule: no enhancement
                                    # could ever fix those
                                    if validate(skeleton).rules() - {"kappa_missing"}:
                                        continue
                                    candidates = _all_kappa_fillings(skeleton, mu)
                                for graph in candidates:
                                    report = validate(graph)
                                    if report.valid and codim(graph) <= max_codim:
                                        yield graph


def _stable_enough(skeleton: EnhancedLevelGraph) -> bool:
    for v in range(skeleton.num_vertices):
        if skeleton.genera[v] == 0:
            if skeleton.valence(v) + len(skeleton.legs_at(v)) < 3:
                return False
    return True


def _all_kappa_fillings(skeleton: EnhancedLevelGraph, mu: SignatureMu):
    """Every kappa combination inside the bound, no equation solving.

    The degree equations are left for the validator; this is deliberately
    the dumbest possible filling so it can serve as an oracle for the
    constraint-propagating solver.
    """
    verticals = [
        i for i in range(skeleton.num_edges) if not skeleton.is_horizontal(i)
    ]
    bound = kappa_bound(mu)
    for combo in itertools.product(range(1, bound + 1), repeat=len(verticals)):
        values = dict(zip(verticals, combo))
        edges = tuple(
            Edge(e.ends, values[i]) if i in values else e
            for i, e in enumerate(skeleton.edges)
        )
        yield EnhancedLevelGraph(
            skeleton.genera, skeleton.levels, skeleton.leg_vertex, edges, mu
        )
