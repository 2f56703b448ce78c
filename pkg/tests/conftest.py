"""Shared fixtures: the worked example graphs used throughout the suite."""

import random
from fractions import Fraction

import pytest

from msd_strata import Edge, EnhancedLevelGraph, GaussianRational, ResidueAssignment, SignatureMu
from msd_strata.residue_grc import plus_branch_vertex, rational_echelon


@pytest.fixture
def gamma1():
    """Triangle on three levels, genera 3/1/0, enhancements (3, 3, 1)."""
    mu = SignatureMu([4, 4, 2, -2], 5)
    return EnhancedLevelGraph(
        genera=[3, 1, 0],
        levels=[0, -1, -2],
        leg_vertex=[2, 1, 0, 1],
        edges=[Edge((0, 1), 3), Edge((1, 2), 3), Edge((0, 2), 1)],
        mu=mu,
    )


@pytest.fixture
def gamma2():
    """Same triangle with the other admissible enhancement (1, 1, 3)."""
    mu = SignatureMu([4, 4, 2, -2], 5)
    return EnhancedLevelGraph(
        genera=[3, 1, 0],
        levels=[0, -1, -2],
        leg_vertex=[2, 1, 0, 1],
        edges=[Edge((0, 1), 1), Edge((1, 2), 1), Edge((0, 2), 3)],
        mu=mu,
    )


@pytest.fixture
def running_skeleton():
    mu = SignatureMu([4, 4, 2, -2], 5)
    return EnhancedLevelGraph(
        genera=[3, 1, 0],
        levels=[0, -1, -2],
        leg_vertex=[2, 1, 0, 1],
        edges=[Edge((0, 1)), Edge((1, 2)), Edge((0, 2))],
        mu=mu,
    )


@pytest.fixture
def smooth_graph():
    """Single genus-2 vertex carrying two simple zeros."""
    return EnhancedLevelGraph(
        genera=[2], levels=[0], leg_vertex=[0, 0], edges=[], mu=SignatureMu([1, 1], 2)
    )


@pytest.fixture
def horizontal_pair():
    """Two genus-1 vertices at level zero joined by two horizontal edges."""
    mu = SignatureMu([2, 1, 1], 3)
    return EnhancedLevelGraph(
        genera=[1, 1],
        levels=[0, 0],
        leg_vertex=[0, 1, 1],
        edges=[Edge((0, 1)), Edge((0, 1))],
        mu=mu,
    )


@pytest.fixture
def cherry23():
    """Top vertex with the order -5 pole, two bottoms with enhancements 2, 3."""
    mu = SignatureMu([2, 1, 0, 0, -5], 0)
    return EnhancedLevelGraph(
        genera=[0, 0, 0],
        levels=[0, -1, -1],
        leg_vertex=[2, 1, 1, 2, 0],
        edges=[Edge((0, 1), 2), Edge((0, 2), 3)],
        mu=mu,
    )


@pytest.fixture
def cherry22():
    """Cherry with two simple zeros; both enhancements equal to 2."""
    mu = SignatureMu([1, 1, 0, 0, -4], 0)
    return EnhancedLevelGraph(
        genera=[0, 0, 0],
        levels=[0, -1, -1],
        leg_vertex=[1, 2, 1, 2, 0],
        edges=[Edge((0, 1), 2), Edge((0, 2), 2)],
        mu=mu,
    )


@pytest.fixture
def banana22():
    """Two vertices on two levels joined by two edges of enhancement 2."""
    mu = SignatureMu([3, 1], 3)
    return EnhancedLevelGraph(
        genera=[2, 0],
        levels=[0, -1],
        leg_vertex=[1, 1],
        edges=[Edge((0, 1), 2), Edge((0, 1), 2)],
        mu=mu,
    )


@pytest.fixture
def triangle221():
    """Three-level refinement of the (2, 2) banana, enhancements (2, 2, 1)."""
    mu = SignatureMu([3, 1], 3)
    return EnhancedLevelGraph(
        genera=[2, 0, 0],
        levels=[0, -1, -2],
        leg_vertex=[2, 1],
        edges=[Edge((0, 2), 2), Edge((0, 1), 2), Edge((1, 2), 1)],
        mu=mu,
    )


@pytest.fixture
def all_pole_graph():
    """Two-level graph with a marked pole on both vertices.

    Every component above a level carries a pole and no vertex is pole-free,
    so neither checker imposes any condition on the edge residue.
    """
    mu = SignatureMu([4, -1, -1], 2)
    return EnhancedLevelGraph(
        genera=[2, 0],
        levels=[0, -1],
        leg_vertex=[1, 0, 1],
        edges=[Edge((0, 1), 4)],
        mu=mu,
    )


@pytest.fixture
def four_edge_tower():
    """Two top vertices over a middle and a bottom one, all enhancements 2.

    Edges in order: top1-middle, top2-middle, top1-bottom, top2-bottom.
    No marked poles, so every component above a level is condition-bearing.
    """
    mu = SignatureMu([4, 4], 5)
    return EnhancedLevelGraph(
        genera=[2, 2, 0, 0],
        levels=[0, 0, -1, -2],
        leg_vertex=[2, 3],
        edges=[Edge((0, 2), 2), Edge((1, 2), 2), Edge((0, 3), 2), Edge((1, 3), 2)],
        mu=mu,
    )


# ----------------------------------------------------------------------
# residue assignment sampling
# ----------------------------------------------------------------------

def physical_assignment_space(graph):
    """Rational basis of the assignments satisfying every residue theorem.

    Unknowns: one per vertical edge, one per horizontal edge, one per marked
    pole leg; one linear constraint per vertex.  Returns (unknown labels,
    nullspace basis rows).
    """
    verticals = graph.vertical_edges()
    horizontals = graph.horizontal_edges()
    pole_legs = [j for j in range(1, graph.mu.n + 1) if graph.mu.m[j - 1] < 0]
    unknowns = (
        [("v", e) for e in verticals]
        + [("h", e) for e in horizontals]
        + [("p", j) for j in pole_legs]
    )
    col = {u: i for i, u in enumerate(unknowns)}
    rows = []
    for v in range(graph.num_vertices):
        row = [0] * len(unknowns)
        for e in verticals:
            if graph.bottom_end(e) == v:
                row[col[("v", e)]] += 1
        for e in horizontals:
            u1, u2 = graph.edges[e].ends
            if u1 == u2:
                continue
            if v == plus_branch_vertex(graph, e):
                row[col[("h", e)]] += 1
            elif v in (u1, u2):
                row[col[("h", e)]] -= 1
        for j in pole_legs:
            if graph.leg_vertex[j - 1] == v:
                row[col[("p", j)]] += 1
        rows.append(row)
    echelon = rational_echelon(rows)
    pivots = set()
    for row in echelon:
        pivots.add(next(i for i, x in enumerate(row) if x))
    basis = []
    for free in range(len(unknowns)):
        if free in pivots:
            continue
        vec = [Fraction(0)] * len(unknowns)
        vec[free] = Fraction(1)
        for row in echelon:
            p = next(i for i, x in enumerate(row) if x)
            vec[p] = -row[free]
        basis.append(vec)
    return unknowns, basis


def random_physical_assignment(graph, rng: random.Random) -> ResidueAssignment:
    """Random Gaussian-rational assignment obeying all residue theorems."""
    unknowns, basis = physical_assignment_space(graph)
    values = [GaussianRational(0, 0) for _ in unknowns]
    for vec in basis:
        re = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        im = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        for i, coeff in enumerate(vec):
            if coeff:
                values[i] = values[i] + GaussianRational(re * coeff, im * coeff)
    vertical, horizontal, marked = {}, {}, {}
    for (kind, key), value in zip(unknowns, values):
        if kind == "v":
            vertical[key] = value
        elif kind == "h":
            horizontal[key] = value
        else:
            marked[key] = value
    for e in graph.horizontal_edges():
        horizontal.setdefault(e, GaussianRational(0, 0))
    return ResidueAssignment(vertical, horizontal, marked)
