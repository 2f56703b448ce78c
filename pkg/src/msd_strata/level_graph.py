"""Core data model for enhanced level graphs.

An enhanced level graph is the dual graph of a stable curve together with a
weak full order on the vertices (recorded by a level function with values in
{0, -1, ..., -N}) and a positive integer enhancement ``kappa`` on every
vertical edge.  Horizontal edges (joining equal levels) carry no enhancement;
their two branches are simple poles.  The admissibility conditions tie the
enhancements to the vertex genera and the orders of the marked points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


class GraphStructureError(ValueError):
    """Malformed raw data: dangling indices, duplicate legs, bad types.

    Distinct from mathematical invalidity, which ``validate`` reports.
    """


@dataclass(frozen=True)
class SignatureMu:
    """Orders (m_1, ..., m_n) of the marked zeros/poles, plus the genus.

    The orders must be non-increasing and sum to 2g - 2.
    """

    m: tuple
    genus: int

    def __init__(self, m: Iterable[int], genus: int):
        m = tuple(int(v) for v in m)
        genus = int(genus)
        if genus < 0:
            raise GraphStructureError("genus must be nonnegative")
        if any(m[i] < m[i + 1] for i in range(len(m) - 1)):
            raise GraphStructureError("orders must be non-increasing")
        if sum(m) != 2 * genus - 2:
            raise GraphStructureError(
                "orders sum to %d, expected 2g-2 = %d" % (sum(m), 2 * genus - 2)
            )
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "genus", genus)

    @property
    def n(self) -> int:
        return len(self.m)

    def has_pole(self) -> bool:
        return any(v < 0 for v in self.m)


@dataclass(frozen=True)
class Edge:
    """Unordered pair of vertex indices; ``kappa`` present iff vertical."""

    ends: tuple
    kappa: Optional[int] = None

    def __init__(self, ends: Sequence[int], kappa: Optional[int] = None):
        if len(ends) != 2:
            raise GraphStructureError("edge needs exactly two ends")
        ends = (int(ends[0]), int(ends[1]))
        if kappa is not None:
            kappa = int(kappa)
            if kappa < 1:
                raise GraphStructureError("kappa must be a positive integer")
        object.__setattr__(self, "ends", ends)
        object.__setattr__(self, "kappa", kappa)

    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]


@dataclass(frozen=True)
class EnhancedLevelGraph:
    """Decorated multigraph: per-vertex (genus, level), labeled legs, edges.

    ``genera[v]`` and ``levels[v]`` describe vertex ``v``; ``leg_vertex[j-1]``
    is the vertex carrying leg ``j`` (legs are labeled 1..n and never
    permuted); ``edges`` may contain loops and parallel edges.  Values are
    immutable; all operations on them are pure functions.
    """

    genera: tuple
    levels: tuple
    leg_vertex: tuple
    edges: tuple
    mu: SignatureMu

    def __init__(self, genera, levels, leg_vertex, edges, mu):
        genera = tuple(int(g) for g in genera)
        levels = tuple(int(l) for l in levels)
        leg_vertex = tuple(int(v) for v in leg_vertex)
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in edges)
        if not isinstance(mu, SignatureMu):
            raise GraphStructureError("mu must be a SignatureMu")
        nv = len(genera)
        if nv == 0:
            raise GraphStructureError("graph needs at least one vertex")
        if len(levels) != nv:
            raise GraphStructureError("genera and levels disagree in length")
        if any(g < 0 for g in genera):
            raise GraphStructureError("vertex genus must be nonnegative")
        if any(l > 0 for l in levels):
            raise GraphStructureError("levels must be <= 0")
        if len(leg_vertex) != mu.n:
            raise GraphStructureError(
                "expected %d legs, got %d" % (mu.n, len(leg_vertex))
            )
        if any(v < 0 or v >= nv for v in leg_vertex):
            raise GraphStructureError("leg assigned to a missing vertex")
        for e in edges:
            if any(v < 0 or v >= nv for v in e.ends):
                raise GraphStructureError("edge end out of range")
        object.__setattr__(self, "genera", genera)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "leg_vertex", leg_vertex)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "mu", mu)

    # -- basic queries ----------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.genera)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def level_set(self) -> list:
        """All occupied levels, descending (top level first)."""
        return sorted(set(self.levels), reverse=True)

    def levels_below_top(self) -> list:
        return [l for l in self.level_set() if l != max(self.levels)]

    @property
    def depth(self) -> int:
        """Number of levels strictly below zero, assuming normalized levels."""
        return len(set(self.levels)) - 1

    def is_horizontal(self, edge_index: int) -> bool:
        u, v = self.edges[edge_index].ends
        return self.levels[u] == self.levels[v]

    def horizontal_edges(self) -> list:
        return [i for i in range(self.num_edges) if self.is_horizontal(i)]

    def vertical_edges(self) -> list:
        return [i for i in range(self.num_edges) if not self.is_horizontal(i)]

    def top_end(self, edge_index: int) -> int:
        """Vertex at the upper end of a vertical edge."""
        u, v = self.edges[edge_index].ends
        return u if self.levels[u] > self.levels[v] else v

    def bottom_end(self, edge_index: int) -> int:
        u, v = self.edges[edge_index].ends
        return v if self.levels[u] > self.levels[v] else u

    def level_top(self, edge_index: int) -> int:
        return self.levels[self.top_end(edge_index)]

    def level_bottom(self, edge_index: int) -> int:
        return self.levels[self.bottom_end(edge_index)]

    def crossing_levels(self, edge_index: int) -> list:
        """Levels i with bottom(e) <= i < top(e), descending."""
        return list(
            range(self.level_top(edge_index) - 1, self.level_bottom(edge_index) - 1, -1)
        )

    def edges_down_from(self, v: int) -> list:
        """Vertical edges whose upper end is ``v``."""
        return [
            i
            for i in self.vertical_edges()
            if self.top_end(i) == v
        ]

    def edges_up_from(self, v: int) -> list:
        """Vertical edges whose lower end is ``v``."""
        return [
            i
            for i in self.vertical_edges()
            if self.bottom_end(i) == v
        ]

    def horizontal_half_edge_count(self, v: int) -> int:
        count = 0
        for i in self.horizontal_edges():
            count += sum(1 for end in self.edges[i].ends if end == v)
        return count

    def legs_at(self, v: int) -> list:
        """Labels (1-based) of the legs attached to vertex ``v``."""
        return [j + 1 for j, w in enumerate(self.leg_vertex) if w == v]

    def valence(self, v: int) -> int:
        """Number of half-edges at ``v`` (loops count twice); legs excluded."""
        return sum(1 for e in self.edges for end in e.ends if end == v)

    def vertex_degree(self, v: int) -> Optional[int]:
        """Degree of the twisted differential forced on ``v``.

        Legs contribute their orders, an upper edge end contributes
        ``kappa - 1``, a lower end ``-(kappa + 1)``, and every horizontal
        half-edge ``-1``.  Returns None when some incident vertical edge has
        no enhancement yet.
        """
        total = sum(self.mu.m[j - 1] for j in self.legs_at(v))
        for i in self.vertical_edges():
            kappa = self.edges[i].kappa
            if self.top_end(i) == v or self.bottom_end(i) == v:
                if kappa is None:
                    return None
            if self.top_end(i) == v:
                total += kappa - 1
            if self.bottom_end(i) == v:
                total -= kappa + 1
        total -= self.horizontal_half_edge_count(v)
        return total

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for e in self.edges:
                for a, b in (e.ends, e.ends[::-1]):
                    if a == v and b not in seen:
                        seen.add(b)
                        stack.append(b)
        return len(seen) == self.num_vertices

    def with_normalized_levels(self) -> "EnhancedLevelGraph":
        """Relabel levels order-preservingly onto {0, -1, ..., -N}."""
        occupied = self.level_set()
        relabel = {old: -i for i, old in enumerate(occupied)}
        return EnhancedLevelGraph(
            self.genera,
            tuple(relabel[l] for l in self.levels),
            self.leg_vertex,
            self.edges,
            self.mu,
        )


@dataclass(frozen=True)
class Violation:
    rule: str
    locus: tuple
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def valid(self) -> bool:
        return not self.violations

    def rules(self) -> set:
        return {v.rule for v in self.violations}


def validate(graph: EnhancedLevelGraph) -> ValidationReport:
    """Check every admissibility invariant, reporting all violations.

    Rule identifiers: ``connected``, ``level_normalization``,
    ``vertical_loop``, ``kappa_on_horizontal``, ``kappa_missing``,
    ``genus_identity``, ``degree_identity``, ``stability``.
    """
    bad = []

    if not graph.is_connected():
        bad.append(Violation("connected", (), "graph is not connected"))

    occupied = graph.level_set()
    expected = list(range(0, -len(occupied), -1))
    if occupied != expected:
        bad.append(
            Violation(
                "level_normalization",
                tuple(occupied),
                "levels %r are not {0..-N}" % (occupied,),
            )
        )

    for i, e in enumerate(graph.edges):
        horizontal = graph.is_horizontal(i)
        if e.is_loop() and e.kappa is not None:
            bad.append(Violation("vertical_loop", (i,), "loop cannot carry kappa"))
        elif horizontal and e.kappa is not None:
            bad.append(
                Violation("kappa_on_horizontal", (i,), "horizontal edge with kappa")
            )
        elif not horizontal and e.kappa is None:
            bad.append(
                Violation("kappa_missing", (i,), "vertical edge without kappa")
            )

    h1 = graph.num_edges - graph.num_vertices + 1
    total = sum(graph.genera) + h1
    if total != graph.mu.genus:
        bad.append(
            Violation(
                "genus_identity",
                (),
                "sum of genera plus cycles is %d, expected %d"
                % (total, graph.mu.genus),
            )
        )

    for v in range(graph.num_vertices):
        deg = graph.vertex_degree(v)
        if deg is None:
            continue  # kappa_missing already reported
        if deg != 2 * graph.genera[v] - 2:
            bad.append(
                Violation(
                    "degree_identity",
                    (v,),
                    "degree %d at vertex %d, expected %d"
                    % (deg, v, 2 * graph.genera[v] - 2),
                )
            )

    for v in range(graph.num_vertices):
        if graph.genera[v] == 0:
            special = graph.valence(v) + len(graph.legs_at(v))
            if special < 3:
                bad.append(
                    Violation(
                        "stability",
                        (v,),
                        "genus 0 vertex %d has only %d special points" % (v, special),
                    )
                )

    return ValidationReport(tuple(bad))


def codim(graph: EnhancedLevelGraph) -> int:
    """Boundary codimension: levels below zero plus horizontal edges."""
    return graph.depth + len(graph.horizontal_edges())


def level_subgraph(graph: EnhancedLevelGraph, i: int, mode: str = "at") -> list:
    """Connected components of the subgraph at/above level ``i``.

    ``mode`` is one of ``at``, ``above``, ``above_or_at``.  Each component is
    a pair (sorted vertex tuple, sorted edge-index tuple); an edge is included
    iff both its endpoints are.  Components are sorted by smallest vertex.
    """
    if i not in graph.level_set():
        raise ValueError("level %d not present" % i)
    if mode == "at":
        keep = {v for v in range(graph.num_vertices) if graph.levels[v] == i}
    elif mode == "above":
        keep = {v for v in range(graph.num_vertices) if graph.levels[v] > i}
    elif mode == "above_or_at":
        keep = {v for v in range(graph.num_vertices) if graph.levels[v] >= i}
    else:
        raise ValueError("unknown mode %r" % mode)

    kept_edges = [
        j
        for j, e in enumerate(graph.edges)
        if e.ends[0] in keep and e.ends[1] in keep
    ]
    components = []
    unseen = set(keep)
    while unseen:
        start = min(unseen)
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for j in kept_edges:
                for a, b in (graph.edges[j].ends, graph.edges[j].ends[::-1]):
                    if a == v and b not in comp:
                        comp.add(b)
                        stack.append(b)
        unseen -= comp
        comp_edges = tuple(
            j for j in kept_edges if graph.edges[j].ends[0] in comp
        )
        components.append((tuple(sorted(comp)), comp_edges))
    return components


def node_orders(graph: EnhancedLevelGraph, edge_index: int) -> tuple:
    """Twisted-differential orders at the two branches of a node.

    Vertical edge: (kappa - 1, -kappa - 1) at the upper and lower branch.
    Horizontal edge: (-1, -1), a pair of simple poles.  The two orders always
    sum to -2.
    """
    e = graph.edges[edge_index]
    if graph.is_horizontal(edge_index):
        return (-1, -1)
    if e.kappa is None:
        raise ValueError("vertical edge %d has no enhancement" % edge_index)
    return (e.kappa - 1, -e.kappa - 1)
