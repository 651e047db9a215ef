"""canord: exact two-sided verification of module counts for canonical orders.

The package computes, entirely in exact cyclotomic arithmetic, both sides of
a numerical correspondence for canonical orders over surface singularities:
a geometric count read off the exceptional curves of a resolution together
with its ramification data, and an algebraic count obtained from a central
idempotent slice of a twisted group algebra.  Supporting machinery includes
cyclotomic number arithmetic, finite matrix subgroups of GL2, central
extensions and twisted group algebras, integer intersection lattices with
Smith-normal-form torsion computations, exact character tables and McKay
quivers, and a truncated cyclic-cover structure check.
"""
from __future__ import annotations

from .cyclotomic import (
    CycloNumber,
    from_rational,
    multiplicative_order,
    one,
    root_of_unity,
    zero,
)
from .errors import (
    CanordError,
    ClosureCapError,
    CurveTypeError,
    LatticeError,
    NotNormalError,
    NotSubgroupError,
    ParameterError,
    TruncationError,
)
from .matgroup import (
    FiniteMatrixGroup,
    GroupTable,
    Mat2,
    conjugacy_classes,
    fixed_line_ramification,
    generate_group,
    quotient,
)
from .twisted import (
    AlgebraElement,
    CentralExtension,
    block_count,
    build_extension,
    central_idempotents,
    dihedral_extension,
    idempotent_epsilon,
)
from .lattice import (
    Curve,
    DivisorClass,
    IntersectionLattice,
    a_string,
    build_config,
    canonical_check,
    d_tree,
    dynkin,
    family_config,
    fundamental_cycle,
    is_negative_definite,
    linear_equivalence_solve,
    smith_normal_form,
    to_dot,
    torsion_order,
)
from .ramdata import (
    FAMILIES,
    CanonicalType,
    CurveType,
    RamData,
    ResolutionRamData,
    canonical_ram,
    classify_exceptional,
    is_terminal,
    ram_to_json,
    resolution_is_terminal,
    resolution_ram,
    resolution_to_json,
    skew_constructible,
)
from .families import (
    ade_group,
    cover_lattice,
    expected_count,
    extension_params,
    group_side,
    lattice_relations,
    matrix_group,
    torsion_checks,
)
from .mckay import (
    CharacterTable,
    McKayQuiver,
    McKayReport,
    ResolutionCount,
    character_table,
    count_from_group,
    count_from_resolution,
    identify_affine,
    mckay_quiver,
    verify,
)
from .cycliccover import (
    CoverStructureReport,
    TruncatedEigenModule,
    cover_structure_check,
    eigenspace_decompose,
    invariant_monomials,
)

__version__ = "0.1.0"
