"""Level rotation torus closure as an affine toric monoid.

The torus sits inside the product of coordinates r_i (one per level below
zero) and rho_e (one per vertical edge), cut out by one monomial equation per
edge: the product of the r_i over the levels the edge crosses equals
rho_e^kappa_e.  Pulling the coordinates back along the simple cover turns
each of them into a character of a rank-N torus; the closure is the spectrum
of the semigroup algebra on these exponent vectors, so it is normal exactly
when the monoid they generate is saturated in the group they generate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .level_graph import EnhancedLevelGraph
from .twist_lattice import hermite_normal_form, lattice_contains, simple_twist_data


@dataclass(frozen=True)
class MonomialEquation:
    """prod(r_i for i in levels) = rho_(edge)^exponent"""

    levels: tuple
    edge: int
    exponent: int

    def __str__(self):
        left = "*".join("r[%d]" % i for i in self.levels) or "1"
        return "%s = rho[%d]^%d" % (left, self.edge, self.exponent)


def torus_equations(graph: EnhancedLevelGraph) -> list:
    """One defining monomial equation per vertical edge."""
    out = []
    for e in graph.vertical_edges():
        out.append(
            MonomialEquation(
                tuple(graph.crossing_levels(e)), e, graph.edges[e].kappa
            )
        )
    return out


@dataclass(frozen=True)
class CharacterMonoid:
    """Exponent vectors of the closure coordinates on the simple cover.

    The coordinate r_i maps to a_i times the i-th unit vector; rho_e maps to
    the vector with a_i/kappa_e at every level the edge crosses.  Vectors are
    indexed by the levels below zero in descending order.
    """

    ambient_rank: int
    level_generators: tuple
    edge_generators: tuple  # pairs (edge index, vector)

    @property
    def generators(self) -> list:
        return [list(g) for g in self.level_generators] + [
            list(v) for _, v in self.edge_generators
        ]


def character_monoid(graph: EnhancedLevelGraph) -> CharacterMonoid:
    a, _ = simple_twist_data(graph)
    levels = graph.level_set()[1:]
    pos = {l: i for i, l in enumerate(levels)}
    level_gens = []
    for i, lvl in enumerate(levels):
        vec = [0] * len(levels)
        vec[i] = a[i]
        level_gens.append(tuple(vec))
    edge_gens = []
    for e in graph.vertical_edges():
        kappa = graph.edges[e].kappa
        vec = [0] * len(levels)
        for lvl in graph.crossing_levels(e):
            vec[pos[lvl]] = a[pos[lvl]] // kappa
        edge_gens.append((e, tuple(vec)))
    return CharacterMonoid(len(levels), tuple(level_gens), tuple(edge_gens))


@dataclass(frozen=True)
class NormalityVerdict:
    status: str  # "normal", "non_normal", "inconclusive"
    witness: Optional[tuple] = None

    def __str__(self):
        if self.status == "non_normal":
            return "non_normal (witness %s)" % (list(self.witness),)
        return self.status


def _monoid_contains(generators: list, target: list) -> bool:
    """Bounded search for a nonnegative integer combination."""
    gens = [g for g in generators if any(g)]
    memo = {}

    def recurse(rest):
        if not any(rest):
            return True
        key = tuple(rest)
        if key in memo:
            return memo[key]
        ok = False
        for g in gens:
            if all(a >= b for a, b in zip(rest, g)):
                if recurse([a - b for a, b in zip(rest, g)]):
                    ok = True
                    break
        memo[key] = ok
        return ok

    return recurse(list(target))


def closure_normality(
    graph: EnhancedLevelGraph, search_bound: Optional[int] = None
) -> NormalityVerdict:
    """Decide normality of the torus closure by monoid saturation.

    The generator set contains a_i times every unit vector, so the rational
    cone is the full nonnegative orthant and saturation reduces to: every
    nonnegative vector of the generated group lies in the generated monoid.
    Vectors are searched by increasing coordinate sum; a non-member is a
    witness for non-normality.  If the search bound covers the fundamental
    box (coordinate sum up to sum(a_i - 1)), the a_i-periodicity of the
    orthant makes the verdict "normal" exhaustive; otherwise the result is
    inconclusive rather than a guess.
    """
    monoid = character_monoid(graph)
    n = monoid.ambient_rank
    if n == 0:
        return NormalityVerdict("normal")
    gens = monoid.generators
    if search_bound is None:
        search_bound = 2 * max(max(g) for g in gens)
    a = [g[i] for i, g in enumerate(monoid.level_generators)]
    conductor = sum(x - 1 for x in a)
    lattice = hermite_normal_form(gens, n)

    for total in range(1, search_bound + 1):
        for vec in _compositions(total, n):
            if not lattice_contains(lattice, list(vec)):
                continue
            if not _monoid_contains(gens, list(vec)):
                return NormalityVerdict("non_normal", tuple(vec))
    if search_bound >= conductor:
        return NormalityVerdict("normal")
    return NormalityVerdict("inconclusive")


def _compositions(total: int, parts: int):
    """All nonnegative integer vectors of the given length and sum."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest
