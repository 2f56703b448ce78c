"""Integer-lattice algebra for level rotations and prong-matchings.

Everything here is exact: matrices hold arbitrary-precision Python ints and
all decompositions track unimodular transforms.  The central objects are the
homomorphism from the level rotation group Z^{levels} to the prong rotation
group (sending a tuple n to (n_top(e) - n_bot(e) mod kappa_e) per vertical
edge), its kernel (the twist lattice), the finite-index sublattice generated
by one-level-at-a-time twists, and the finite groups these data produce.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from .level_graph import EnhancedLevelGraph, validate

DEFAULT_ORBIT_BOUND = 10**6


# ----------------------------------------------------------------------
# integer matrices
# ----------------------------------------------------------------------

def identity_matrix(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: list, b: list) -> list:
    rows = len(a)
    inner = len(b)
    cols = len(b[0]) if inner else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        for k in range(inner):
            f = a[i][k]
            if f:
                row_b = b[k]
                row_o = out[i]
                for j in range(cols):
                    row_o[j] += f * row_b[j]
    return out


def det_bareiss(m: list) -> int:
    """Exact determinant by fraction-free elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


@dataclass(frozen=True)
class SmithDecomposition:
    """U * M * V = S with U, V unimodular and S diagonal, d_1 | d_2 | ...

    Diagonal entries are nonnegative; zeros come last.
    """

    u: tuple
    s: tuple
    v: tuple

    def diagonal(self) -> list:
        if not self.s:
            return []
        return [self.s[i][i] for i in range(min(len(self.s), len(self.s[0])))]

    def nonzero_diagonal(self) -> list:
        return [d for d in self.diagonal() if d]

    @property
    def rank(self) -> int:
        return len(self.nonzero_diagonal())


def smith_normal_form(matrix: list) -> SmithDecomposition:
    """Diagonalize an integer matrix by unimodular row and column operations.

    Pivots are the smallest nonzero absolute value of the remaining block,
    scanned row-major; this keeps intermediate entries small and makes the
    transforms reproducible.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    s = [list(map(int, row)) for row in matrix]
    if any(len(row) != cols for row in s):
        raise ValueError("matrix is not rectangular")
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def row_op(i, j, f):
        # row_i -= f * row_j
        si, sj = s[i], s[j]
        for k in range(cols):
            si[k] -= f * sj[k]
        ui, uj = u[i], u[j]
        for k in range(rows):
            ui[k] -= f * uj[k]

    def col_op(i, j, f):
        # col_i -= f * col_j
        for k in range(rows):
            s[k][i] -= f * s[k][j]
        for k in range(cols):
            v[k][i] -= f * v[k][j]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for k in range(rows):
            s[k][i], s[k][j] = s[k][j], s[k][i]
        for k in range(cols):
            v[k][i], v[k][j] = v[k][j], v[k][i]

    def negate_row(i):
        s[i] = [-x for x in s[i]]
        u[i] = [-x for x in u[i]]

    def clear_block(t):
        """Zero out row/column t outside the pivot; pivot stays positive.

        Every restart strictly shrinks the positive pivot, so this ends.
        """
        if s[t][t] < 0:
            negate_row(t)
        while True:
            for i in range(t + 1, rows):
                if s[i][t]:
                    row_op(i, t, s[i][t] // s[t][t])
            left = [i for i in range(t + 1, rows) if s[i][t]]
            if left:
                swap_rows(t, left[0])  # remainder is a smaller positive pivot
                continue
            for j in range(t + 1, cols):
                if s[t][j]:
                    col_op(j, t, s[t][j] // s[t][t])
            left = [j for j in range(t + 1, cols) if s[t][j]]
            if left:
                swap_cols(t, left[0])
                continue
            break

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if s[i][j] and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        clear_block(t)
        t += 1
    rank = t

    # enforce the divisibility chain; each pair fix only touches rows/columns
    # i and i+1, whose other entries are already zero
    changed = True
    while changed:
        changed = False
        for i in range(rank - 1):
            if s[i + 1][i + 1] % s[i][i] != 0:
                changed = True
                col_op(i, i + 1, -1)
                clear_block(i)
                clear_block(i + 1)

    return SmithDecomposition(
        tuple(tuple(r) for r in u),
        tuple(tuple(r) for r in s),
        tuple(tuple(r) for r in v),
    )


def hermite_normal_form(rows_in: list, width: Optional[int] = None) -> list:
    """Canonical row-echelon basis of the lattice spanned by integer rows.

    Pivots are positive, entries above a pivot are reduced into [0, pivot).
    Two row sets span the same lattice iff their forms are equal.
    """
    if width is None:
        width = len(rows_in[0]) if rows_in else 0
    work = [list(map(int, r)) for r in rows_in if any(r)]
    basis = []
    col = 0
    while col < width and work:
        having = [r for r in work if r[col]]
        rest = [r for r in work if not r[col]]
        if not having:
            col += 1
            continue
        while len(having) > 1:
            having.sort(key=lambda r: abs(r[col]))
            pivot = having[0]
            reduced = []
            for r in having[1:]:
                q = r[col] // pivot[col]
                new = [a - q * b for a, b in zip(r, pivot)]
                if new[col]:
                    reduced.append(new)
                elif any(new):
                    rest.append(new)
            having = [pivot] + reduced
        pivot = having[0]
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        basis.append(pivot)
        work = rest
        col += 1
    # reduce entries above each pivot
    basis.sort(key=lambda r: next(i for i, x in enumerate(r) if x))
    for i in range(len(basis) - 1, -1, -1):
        p = next(j for j, x in enumerate(basis[i]) if x)
        for k in range(i):
            q = basis[k][p] // basis[i][p]
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], basis[i])]
    return [list(r) for r in basis]


def lattice_contains(hnf_basis: list, vector: list) -> bool:
    """Membership of an integer vector in a lattice given by an HNF basis."""
    rem = list(map(int, vector))
    for row in hnf_basis:
        p = next(j for j, x in enumerate(row) if x)
        if rem[p] % row[p] == 0:
            q = rem[p] // row[p]
            rem = [a - q * b for a, b in zip(rem, row)]
    return not any(rem)


def kernel_basis(matrix: list, cols: int) -> list:
    """Basis (as rows) of the integer kernel of ``matrix`` acting on Z^cols."""
    rows = len(matrix)
    dec = smith_normal_form(matrix) if rows else None
    if rows == 0:
        return identity_matrix(cols)
    rank = dec.rank
    # kernel = V * (last cols-rank coordinate vectors)
    basis = []
    for j in range(rank, cols):
        basis.append([dec.v[i][j] for i in range(cols)])
    return basis


# ----------------------------------------------------------------------
# finite abelian groups
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FinAbGroup:
    """Finitely generated abelian group in invariant-factor form.

    ``invariant_factors`` is a divisor chain d_1 | d_2 | ... with every
    d_i >= 2; ``free_rank`` counts Z summands.
    """

    invariant_factors: tuple
    free_rank: int = 0

    def __init__(self, divisors=(), free_rank=0):
        factors = [int(d) for d in divisors if int(d) != 1]
        if any(d <= 0 for d in factors):
            raise ValueError("invariant factors must be positive")
        # normalize to a divisor chain by repeated gcd/lcm exchange
        changed = True
        while changed:
            changed = False
            for i in range(len(factors)):
                for j in range(i + 1, len(factors)):
                    a, b = factors[i], factors[j]
                    if b % a != 0:
                        g = gcd(a, b)
                        factors[i], factors[j] = g, a * b // g
                        changed = True
        factors = sorted(d for d in factors if d != 1)
        object.__setattr__(self, "invariant_factors", tuple(factors))
        object.__setattr__(self, "free_rank", int(free_rank))

    @property
    def order(self) -> Optional[int]:
        """Group order, or None when the group is infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return not self.invariant_factors and not self.free_rank

    def __str__(self):
        parts = ["Z"] * self.free_rank + ["Z/%d" % d for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"

    @classmethod
    def from_presentation(cls, relation_rows: list, ambient_rank: int) -> "FinAbGroup":
        """Quotient of Z^ambient_rank by the lattice spanned by the rows."""
        if not relation_rows:
            return cls((), ambient_rank)
        dec = smith_normal_form(relation_rows)
        diag = dec.nonzero_diagonal()
        return cls(diag, ambient_rank - len(diag))


# ----------------------------------------------------------------------
# graph-level operations
# ----------------------------------------------------------------------

def _require_valid(graph: EnhancedLevelGraph):
    report = validate(graph)
    if not report.valid:
        raise ValueError(
            "graph is not admissible: %s" % sorted(report.rules())
        )


def prong_rotation_group(graph: EnhancedLevelGraph) -> FinAbGroup:
    """Product of Z/kappa_e over the vertical edges, in invariant factors."""
    _require_valid(graph)
    kappas = [graph.edges[i].kappa for i in graph.vertical_edges()]
    return FinAbGroup(kappas, 0)


@dataclass(frozen=True)
class PhiMap:
    """Matrix of the level-rotation-to-prong-rotation homomorphism.

    One row per vertical edge (entry +1 at the upper level's column, -1 at
    the lower level's column), one column per level in ``level_columns``;
    row ``e`` is read modulo ``moduli[e]``.
    """

    matrix: tuple
    moduli: tuple
    level_columns: tuple
    edge_rows: tuple

    def image_generators(self) -> list:
        """Images of the standard level rotations, one vector per column."""
        gens = []
        for j in range(len(self.level_columns)):
            gens.append([row[j] % k for row, k in zip(self.matrix, self.moduli)])
        return gens


def phi_map(graph: EnhancedLevelGraph, extended: bool = True) -> PhiMap:
    """Assemble the prong-twisting matrix of the level rotation action.

    ``extended`` keeps a column for the top level; dropping it restricts the
    action to rotations of the levels strictly below zero.  Both versions
    have the same image in the prong rotation group.
    """
    _require_valid(graph)
    levels = graph.level_set()
    if not extended:
        levels = levels[1:]
    col = {l: j for j, l in enumerate(levels)}
    verticals = graph.vertical_edges()
    matrix = []
    moduli = []
    for e in verticals:
        row = [0] * len(levels)
        lt, lb = graph.level_top(e), graph.level_bottom(e)
        if lt in col:
            row[col[lt]] += 1
        if lb in col:
            row[col[lb]] -= 1
        matrix.append(row)
        moduli.append(graph.edges[e].kappa)
    return PhiMap(
        tuple(tuple(r) for r in matrix),
        tuple(moduli),
        tuple(levels),
        tuple(verticals),
    )


def _phi_kernel_lattice(graph: EnhancedLevelGraph, extended: bool) -> list:
    """HNF basis of the kernel of the prong-twisting map."""
    phi = phi_map(graph, extended=extended)
    ncols = len(phi.level_columns)
    nrows = len(phi.edge_rows)
    if nrows == 0:
        return identity_matrix(ncols)
    # kernel of Z^levels -> prod Z/kappa: solve M n + diag(kappa) m = 0 and
    # project onto n; the projection is injective because kappa_e >= 1
    block = [list(row) + [0] * nrows for row in phi.matrix]
    for i, k in enumerate(phi.moduli):
        block[i][ncols + i] = k
    big_kernel = kernel_basis(block, ncols + nrows)
    projected = [row[:ncols] for row in big_kernel]
    return hermite_normal_form(projected, ncols)


def twist_group_basis(graph: EnhancedLevelGraph) -> list:
    """HNF basis of the twist lattice inside Z^{levels below zero}.

    The lattice is the kernel of the restricted prong-twisting map; its rank
    always equals the number of levels below zero.  Coordinates follow the
    levels in descending order (-1, -2, ...).
    """
    basis = _phi_kernel_lattice(graph, extended=False)
    assert len(basis) == graph.depth
    return basis


def simple_twist_data(graph: EnhancedLevelGraph) -> tuple:
    """Per-level twist exponents and the triangular generators they produce.

    For each level i below zero, ``a[i]`` is the lcm of kappa_e over the
    edges crossing level i, and the corresponding generator twists all
    levels <= i by a[i].  Coordinates as in ``twist_group_basis``.
    """
    _require_valid(graph)
    levels = graph.level_set()[1:]
    a = []
    for lvl in levels:
        crossing = [
            graph.edges[e].kappa
            for e in graph.vertical_edges()
            if graph.level_bottom(e) <= lvl < graph.level_top(e)
        ]
        assert crossing, "connected graph must have an edge crossing each level"
        out = 1
        for k in crossing:
            out = out * k // gcd(out, k)
        a.append(out)
    generators = []
    for idx, lvl in enumerate(levels):
        generators.append(
            [a[idx] if other <= lvl else 0 for other in levels]
        )
    return a, generators


def simple_twist_lattice(graph: EnhancedLevelGraph) -> list:
    """HNF basis of the lattice spanned by the simple twist generators."""
    _, generators = simple_twist_data(graph)
    width = graph.depth
    if not generators:
        return []
    return hermite_normal_form(generators, width)


def k_group(graph: EnhancedLevelGraph) -> FinAbGroup:
    """Finite quotient of the twist lattice by the simple twist lattice."""
    tw = twist_group_basis(graph)
    stw_gens = simple_twist_data(graph)[1]
    n = graph.depth
    if n == 0:
        return FinAbGroup()
    # express each simple generator in the twist basis; coefficients are
    # integral because the simple lattice is contained in the twist lattice
    coeffs = []
    for gen in stw_gens:
        coeffs.append(_solve_in_basis(tw, gen))
    group = FinAbGroup.from_presentation(coeffs, n)
    assert group.free_rank == 0, "simple twist lattice has full rank"
    return group


def _solve_in_basis(basis_rows: list, vector: list) -> list:
    """Integer coordinates of ``vector`` in the row basis (must exist)."""
    n = len(basis_rows)
    coeffs = [Fraction(0)] * n
    rem = [Fraction(x) for x in vector]
    # basis rows are in echelon form, so solve front to back
    for i, row in enumerate(basis_rows):
        p = next(j for j, x in enumerate(row) if x)
        c = rem[p] / row[p]
        coeffs[i] = c
        rem = [r - c * x for r, x in zip(rem, row)]
    if any(rem) or any(c.denominator != 1 for c in coeffs):
        raise ValueError("vector lies outside the lattice")
    return [int(c) for c in coeffs]


def pm_class_count(graph: EnhancedLevelGraph) -> int:
    """Number of prong-matching equivalence classes.

    Two prong-matchings are equivalent when a level rotation carries one to
    the other, so the count is the cokernel order of the prong-twisting map:
    the index of (column span of the matrix) + diag(kappa) inside Z^{edges}.
    """
    phi = phi_map(graph, extended=True)
    nrows = len(phi.edge_rows)
    if nrows == 0:
        return 1
    ncols = len(phi.level_columns)
    block = [
        [phi.matrix[i][j] for j in range(ncols)]
        + [phi.moduli[i] if k == i else 0 for k in range(nrows)]
        for i in range(nrows)
    ]
    dec = smith_normal_form(block)
    diag = dec.nonzero_diagonal()
    assert len(diag) == nrows
    out = 1
    for d in diag:
        out *= d
    return out


def pm_orbits_bruteforce(
    graph: EnhancedLevelGraph, bound: int = DEFAULT_ORBIT_BOUND
) -> list:
    """Orbits of the level rotation action on all prong-matchings.

    Breadth-first closure over the product of Z/kappa_e, using the images of
    the single-level rotations as generators.  Refuses (raises ValueError)
    when the state space exceeds ``bound``.
    """
    phi = phi_map(graph, extended=True)
    total = 1
    for k in phi.moduli:
        total *= k
    if total > bound:
        raise ValueError(
            "state space of size %d exceeds the orbit bound %d" % (total, bound)
        )
    if not phi.moduli:
        return [[()]]
    gens = []
    for g in phi.image_generators():
        gens.append(tuple(g))
        gens.append(tuple((-x) % k for x, k in zip(g, phi.moduli)))
    states = list(itertools.product(*(range(k) for k in phi.moduli)))
    unseen = set(states)
    orbits = []
    while unseen:
        start = min(unseen)
        orbit = {start}
        queue = [start]
        while queue:
            cur = queue.pop()
            for g in gens:
                nxt = tuple((c + d) % k for c, d, k in zip(cur, g, phi.moduli))
                if nxt not in orbit:
                    orbit.add(nxt)
                    queue.append(nxt)
        unseen -= orbit
        orbits.append(sorted(orbit))
    return orbits


@dataclass(frozen=True)
class CoveringGroups:
    """Level-wise ramification orders, the full ramification group, and the
    exactness check |K| * |G| = prod(a_i)."""

    h_factors: tuple
    g_group: FinAbGroup
    k_quotient: FinAbGroup
    sequence_check: bool

    @property
    def h_order(self) -> int:
        out = 1
        for a in self.h_factors:
            out *= a
        return out


def covering_groups(graph: EnhancedLevelGraph) -> CoveringGroups:
    """Ramification data of the simple and full level rotation covers.

    H is the direct sum of cyclic groups of the per-level orders a_i; G is
    the image of the level rotation group inside the prong rotation group;
    the quotient of the twist lattice by the simple twist lattice measures
    the failure of H -> G to be injective.
    """
    a, _ = simple_twist_data(graph)
    kernel = _phi_kernel_lattice(graph, extended=True)
    g_grp = FinAbGroup.from_presentation(kernel, graph.depth + 1)
    assert g_grp.free_rank == 0
    k_grp = k_group(graph)
    h_order = 1
    for x in a:
        h_order *= x
    ok = (k_grp.order * g_grp.order) == h_order
    return CoveringGroups(tuple(a), g_grp, k_grp, ok)
