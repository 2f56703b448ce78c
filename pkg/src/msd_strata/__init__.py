"""Exact combinatorial invariants of enhanced level graphs."""

from .level_graph import (
    Edge,
    EnhancedLevelGraph,
    GraphStructureError,
    SignatureMu,
    ValidationReport,
    codim,
    level_subgraph,
    node_orders,
    validate,
)
from .degenerations import (
    Undegeneration,
    enumerate_undegenerations,
    undegenerate_by_level_subset,
    undegenerate_horizontal,
    undegenerate_vertical,
)
from .twist_lattice import (
    CoveringGroups,
    FinAbGroup,
    PhiMap,
    SmithDecomposition,
    covering_groups,
    k_group,
    phi_map,
    pm_class_count,
    pm_orbits_bruteforce,
    prong_rotation_group,
    simple_twist_data,
    simple_twist_lattice,
    smith_normal_form,
    twist_group_basis,
)
from .residue_grc import (
    GaussianRational,
    GrcCondition,
    ResidueAssignment,
    check_grc,
    check_grc_homological,
    dim_identity_check,
    grc_conditions,
    grc_space_dim,
    stratum_dim,
)
from .toric_closure import (
    CharacterMonoid,
    MonomialEquation,
    NormalityVerdict,
    character_monoid,
    closure_normality,
    torus_equations,
)
from .blowup_ideals import (
    Monomial,
    MonomialIdeal,
    disorderly_ideal,
    ideal_product,
    is_orderly,
    is_principal,
)
from .enumeration import (
    DeskLimits,
    DeskScaleError,
    brute_force_graphs,
    canonical_form,
    enumerate_enhanced_level_graphs,
    enumerate_enhancements,
)

__version__ = "0.1.0"
