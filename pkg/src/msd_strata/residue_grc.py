"""Global residue condition as exact linear algebra.

Residues live at the branches of the nodes: every vertical edge stores its
value at the lower branch, every horizontal edge at a designated "+" branch
(the other branch carries the negation, so matching residues at the simple
poles hold by construction).  The direct checker evaluates, for every level i
and every pole-free connected component above i, the sum of the residues at
the edges joining the component to level i.  The homological checker instead
derives all linear consequences of the cycle relations among the vanishing
curves and verifies them level by level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .level_graph import EnhancedLevelGraph, SignatureMu, level_subgraph, validate


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    real: Fraction
    imag: Fraction

    def __init__(self, real=0, imag=0):
        object.__setattr__(self, "real", Fraction(real))
        object.__setattr__(self, "imag", Fraction(imag))

    def __add__(self, other):
        return GaussianRational(self.real + other.real, self.imag + other.imag)

    def __sub__(self, other):
        return GaussianRational(self.real - other.real, self.imag - other.imag)

    def __neg__(self):
        return GaussianRational(-self.real, -self.imag)

    def scale(self, rational) -> "GaussianRational":
        f = Fraction(rational)
        return GaussianRational(self.real * f, self.imag * f)

    def is_zero(self) -> bool:
        return self.real == 0 and self.imag == 0

    def __str__(self):
        return "%s%+si" % (self.real, self.imag)


GR_ZERO = GaussianRational(0, 0)


@dataclass(frozen=True)
class ResidueAssignment:
    """Residue values on the edges, plus optional marked-pole residues.

    ``vertical`` maps a vertical edge index to the residue at its lower
    branch; ``horizontal`` maps a horizontal edge index to the value at the
    "+" branch (the "-" branch is its negation); ``marked_poles`` optionally
    maps a pole leg label (1-based) to its residue.
    """

    vertical: dict
    horizontal: dict
    marked_poles: Optional[dict] = None


def plus_branch_vertex(graph: EnhancedLevelGraph, edge_index: int) -> int:
    """Designated "+" end of a horizontal edge: the smaller vertex index."""
    u, v = graph.edges[edge_index].ends
    return min(u, v)


def horizontal_value_at(
    graph: EnhancedLevelGraph, rho: ResidueAssignment, edge_index: int, vertex: int
) -> GaussianRational:
    """Residue of a horizontal branch as seen from ``vertex``.

    For a loop the two branches cancel, so the net contribution is zero.
    """
    value = rho.horizontal[edge_index]
    e = graph.edges[edge_index]
    if e.is_loop():
        return GR_ZERO
    return value if vertex == plus_branch_vertex(graph, edge_index) else -value


def check_assignment_complete(graph: EnhancedLevelGraph, rho: ResidueAssignment):
    missing_v = set(graph.vertical_edges()) - set(rho.vertical)
    missing_h = set(graph.horizontal_edges()) - set(rho.horizontal)
    if missing_v or missing_h:
        raise ValueError(
            "missing residues for edges %s" % sorted(missing_v | missing_h)
        )


@dataclass(frozen=True)
class GrcCondition:
    """Sum of residues at the edges joining a pole-free component above
    ``level`` down to ``level`` must vanish."""

    level: int
    component_vertices: tuple
    edges: tuple


def grc_conditions(graph: EnhancedLevelGraph) -> list:
    """Extract all residue conditions imposed by the levels below a component.

    For each level i and each connected component of the subgraph above i
    whose vertices carry no marked pole, the condition lists the vertical
    edges joining the component to level i (edges plunging below i do not
    appear).  Components attached to level i by no edge impose nothing and
    are omitted.
    """
    _require_valid(graph)
    out = []
    for lvl in graph.level_set()[1:]:
        for vertices, _ in level_subgraph(graph, lvl, "above"):
            if any(
                graph.mu.m[j - 1] < 0
                for v in vertices
                for j in graph.legs_at(v)
            ):
                continue
            edges = tuple(
                e
                for e in graph.vertical_edges()
                if graph.top_end(e) in vertices and graph.level_bottom(e) == lvl
            )
            if edges:
                out.append(GrcCondition(lvl, tuple(vertices), edges))
    return out


@dataclass(frozen=True)
class GrcReport:
    passed: bool
    violated_conditions: tuple
    violated_residue_theorems: tuple  # vertex indices

    def __str__(self):
        if self.passed:
            return "pass"
        parts = []
        for c in self.violated_conditions:
            parts.append(
                "condition at level %d, component %s, edges %s"
                % (c.level, list(c.component_vertices), list(c.edges))
            )
        for v in self.violated_residue_theorems:
            parts.append("residue theorem at vertex %d" % v)
        return "fail: " + "; ".join(parts)


def residue_theorem_violations(
    graph: EnhancedLevelGraph, rho: ResidueAssignment, require_marked: bool = False
) -> list:
    """Vertices where the poles' residues do not sum to zero.

    The poles at a vertex are the lower branches of its downward vertical
    edges, its horizontal half-edges and its marked pole legs.  A vertex with
    marked pole legs is only checkable when their residues are supplied;
    with ``require_marked`` unchecked vertices raise instead of being
    skipped.
    """
    bad = []
    marked = rho.marked_poles or {}
    for v in range(graph.num_vertices):
        pole_legs = [j for j in graph.legs_at(v) if graph.mu.m[j - 1] < 0]
        if any(j not in marked for j in pole_legs):
            if require_marked:
                raise ValueError(
                    "missing marked-pole residues at vertex %d" % v
                )
            continue
        total = GR_ZERO
        for e in graph.vertical_edges():
            if graph.bottom_end(e) == v:
                total = total + rho.vertical[e]
        for e in graph.horizontal_edges():
            for end in graph.edges[e].ends:
                if end == v:
                    total = total + horizontal_value_at(graph, rho, e, v)
                    break  # loop contributions already net to zero
        for j in pole_legs:
            total = total + marked[j]
        if not total.is_zero():
            bad.append(v)
    return bad


def check_grc(graph: EnhancedLevelGraph, rho: ResidueAssignment) -> GrcReport:
    """Direct evaluation of the residue conditions.

    Passes iff every condition sums to zero; when marked-pole residues are
    supplied, the per-vertex residue theorems are verified as well.
    """
    check_assignment_complete(graph, rho)
    violated = []
    for cond in grc_conditions(graph):
        total = GR_ZERO
        for e in cond.edges:
            total = total + rho.vertical[e]
        if not total.is_zero():
            violated.append(cond)
    theorem_bad = []
    if rho.marked_poles is not None:
        theorem_bad = residue_theorem_violations(graph, rho, require_marked=True)
    return GrcReport(
        not violated and not theorem_bad, tuple(violated), tuple(theorem_bad)
    )


# ----------------------------------------------------------------------
# rational row reduction
# ----------------------------------------------------------------------

def rational_echelon(rows: list) -> list:
    """Reduced row echelon form over the rationals; zero rows dropped."""
    work = [[Fraction(x) for x in row] for row in rows]
    out = []
    cols = len(work[0]) if work else 0
    col = 0
    rank = 0
    while col < cols:
        pivot_row = None
        for i in range(rank, len(work)):
            if work[i][col]:
                pivot_row = i
                break
        if pivot_row is None:
            col += 1
            continue
        work[rank], work[pivot_row] = work[pivot_row], work[rank]
        pv = work[rank][col]
        work[rank] = [x / pv for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][col]:
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], work[rank])]
        rank += 1
        col += 1
    return [row for row in work if any(row)]


def rational_rank(rows: list) -> int:
    if not rows:
        return 0
    return len(rational_echelon(rows))


def _boundary_rows(graph: EnhancedLevelGraph) -> dict:
    """Vertex boundary vectors indexed over all edges.

    A vertical edge counts +1 at its upper end and -1 at its lower end; a
    horizontal edge +1 at the "+" branch and -1 at the other; a loop
    cancels to 0.
    """
    rows = {}
    ne = graph.num_edges
    for v in range(graph.num_vertices):
        row = [0] * ne
        for e in range(ne):
            edge = graph.edges[e]
            if edge.is_loop():
                continue
            if graph.is_horizontal(e):
                plus = plus_branch_vertex(graph, e)
                if v == plus:
                    row[e] += 1
                elif v in edge.ends:
                    row[e] -= 1
            else:
                if graph.top_end(e) == v:
                    row[e] += 1
                elif graph.bottom_end(e) == v:
                    row[e] -= 1
        rows[v] = row
    return rows


def relation_space(graph: EnhancedLevelGraph) -> list:
    """Rational relations among the vertical vanishing curves.

    The kernel of the cycle map from edge space to the homology of the
    punctured smooth surface is spanned by the boundaries of the pole-free
    pieces; intersecting with the vertical coordinate subspace removes the
    horizontal curves.  Returns echelon basis rows indexed by the vertical
    edges (in ``graph.vertical_edges()`` order).
    """
    verticals = graph.vertical_edges()
    horizontals = graph.horizontal_edges()
    boundaries = _boundary_rows(graph)
    pole_free = [
        v
        for v in range(graph.num_vertices)
        if all(graph.mu.m[j - 1] >= 0 for j in graph.legs_at(v))
    ]
    # eliminate horizontal coordinates first; surviving rows with zero
    # horizontal part span the intersection with the vertical subspace
    reordered = [
        [boundaries[v][e] for e in horizontals]
        + [boundaries[v][e] for e in verticals]
        for v in pole_free
    ]
    nh = len(horizontals)
    echelon = rational_echelon(reordered)
    return [row[nh:] for row in echelon if not any(row[:nh])]


def check_grc_homological(graph: EnhancedLevelGraph, rho: ResidueAssignment) -> GrcReport:
    """Level filtration form of the residue conditions.

    For each level i, every relation supported on the edges with bottom
    level <= i must annihilate the residues of the edges at bottom level
    exactly i.  Violations are reported as synthetic conditions carrying the
    offending relation's support.
    """
    check_assignment_complete(graph, rho)
    _require_valid(graph)
    verticals = graph.vertical_edges()
    relations = relation_space(graph)
    violated = []
    for lvl in graph.level_set()[1:]:
        deep = [i for i, e in enumerate(verticals) if graph.level_bottom(e) <= lvl]
        deep_set = set(deep)
        # restrict the relation space to vectors supported on the deep edges
        shallow = [i for i in range(len(verticals)) if i not in deep_set]
        reordered = [
            [row[i] for i in shallow] + [row[i] for i in deep] for row in relations
        ]
        ns = len(shallow)
        supported = [
            row[ns:] for row in rational_echelon(reordered) if not any(row[:ns])
        ]
        at_level = [
            k for k, i in enumerate(deep) if graph.level_bottom(verticals[i]) == lvl
        ]
        for rel in supported:
            total = GR_ZERO
            for k in at_level:
                if rel[k]:
                    total = total + rho.vertical[verticals[deep[k]]].scale(rel[k])
            if not total.is_zero():
                support = tuple(verticals[deep[k]] for k in range(len(deep)) if rel[k])
                violated.append(GrcCondition(lvl, (), support))
    return GrcReport(not violated, tuple(violated), ())


# ----------------------------------------------------------------------
# dimensions
# ----------------------------------------------------------------------

def stratum_dim(mu: SignatureMu) -> int:
    """Complex dimension of the stratum of differentials of the given type.

    Counts relative cohomology of the punctured surface: 2g + n - 1 for
    holomorphic types, one less as soon as a marked pole is prescribed.
    """
    if mu.has_pole():
        return 2 * mu.genus + mu.n - 2
    return 2 * mu.genus + mu.n - 1


def _require_valid(graph: EnhancedLevelGraph):
    report = validate(graph)
    if not report.valid:
        raise ValueError("graph is not admissible: %s" % sorted(report.rules()))


def grc_space_dim(graph: EnhancedLevelGraph, level: int) -> int:
    """Dimension of the level's residue-constrained cohomology.

    Each vertex at the level contributes the cohomology of its punctured
    compactified piece (punctures: marked poles, lower branches of vertical
    edges ending here, horizontal branches; relative points: marked
    non-poles and upper branches).  From the ambient sum we subtract the
    rank of the horizontal matching plus this level's residue conditions,
    computed inside the subspace cut out by the per-vertex residue theorems.
    """
    _require_valid(graph)
    if level not in graph.level_set():
        raise ValueError("level %d not present" % level)

    # puncture coordinates, one per pole branch at this level
    punctures = []  # (vertex, kind, payload)
    for v in range(graph.num_vertices):
        if graph.levels[v] != level:
            continue
        for j in graph.legs_at(v):
            if graph.mu.m[j - 1] < 0:
                punctures.append((v, "leg", j))
    for e in graph.vertical_edges():
        if graph.level_bottom(e) == level:
            punctures.append((graph.bottom_end(e), "vlow", e))
    for e in graph.horizontal_edges():
        u, w = graph.edges[e].ends
        if graph.levels[u] == level:
            punctures.append((u, "hbranch", (e, 0)))
            punctures.append((w, "hbranch", (e, 1)))
    index = {p: i for i, p in enumerate(punctures)}

    ambient = 0
    for v in range(graph.num_vertices):
        if graph.levels[v] != level:
            continue
        p = sum(1 for q in punctures if q[0] == v)
        z = sum(1 for j in graph.legs_at(v) if graph.mu.m[j - 1] >= 0)
        z += sum(1 for e in graph.vertical_edges() if graph.top_end(e) == v and graph.level_top(e) == level)
        if p >= 1:
            ambient += 2 * graph.genera[v] + p + z - 2
        else:
            ambient += 2 * graph.genera[v] + z - 1

    npts = len(punctures)
    theorems = []
    for v in range(graph.num_vertices):
        if graph.levels[v] != level:
            continue
        row = [0] * npts
        hit = False
        for q in punctures:
            if q[0] == v:
                row[index[q]] = 1
                hit = True
        if hit:
            theorems.append(row)

    conditions = []
    for e in graph.horizontal_edges():
        u, w = graph.edges[e].ends
        if graph.levels[u] != level:
            continue
        row = [0] * npts
        row[index[(u, "hbranch", (e, 0))]] += 1
        row[index[(w, "hbranch", (e, 1))]] += 1
        conditions.append(row)
    for cond in grc_conditions(graph):
        if cond.level != level:
            continue
        row = [0] * npts
        for e in cond.edges:
            row[index[(graph.bottom_end(e), "vlow", e)]] += 1
        conditions.append(row)

    extra = rational_rank(conditions + theorems) - rational_rank(theorems)
    return ambient - extra


@dataclass(frozen=True)
class DimIdentityReport:
    lhs: int
    rhs: int
    per_level: tuple
    stratum_dimension: int
    horizontal_count: int

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def dim_identity_check(graph: EnhancedLevelGraph) -> DimIdentityReport:
    """Compare the level dimension sum with the stratum dimension minus the
    number of horizontal edges."""
    dims = tuple(grc_space_dim(graph, lvl) for lvl in graph.level_set())
    h = len(graph.horizontal_edges())
    sd = stratum_dim(graph.mu)
    return DimIdentityReport(sum(dims), sd - h, dims, sd, h)
