"""Deformation data of affine Gorenstein toric varieties from lattice polytopes."""

from .polytope import (
    Edge,
    Path,
    Polytope,
    PolytopeError,
    UnsupportedDimensionError,
    load_polytope,
    min_vertex,
    parse_polytope_file,
    path_lambda,
    path_mu,
    polygon_from_vertices,
    width,
)
from .conemonoid import (
    FreePairDecomposition,
    HilbertBasis,
    TFunctional,
    boundary_representation,
    deg,
    eta,
    eta_tilde,
    free_pair_decompose,
    functional_equal,
    hilbert_basis,
)
from .tangent import (
    T2Profile,
    VkSpace,
    check_prop32,
    t0b_basis,
    t1_dimension,
    t2_closed_form_3d,
    t2_dimension_general,
    t2_dimension_lattice3d,
    vk_space,
)
from .basespace import (
    BaseSpace,
    CorrectnessError,
    FamilyEquations,
    TTildeIdeal,
    base_ideal,
    build_base_space,
    choose_basis,
    eliminate,
    export_cas,
    family_binomials,
    first_order_family,
    ttilde_generators,
    w_graded_dims,
)
from .minkowski import (
    CorrespondenceReport,
    MinkowskiDecomposition,
    component_dimension,
    correspondence_report,
    enumerate_decompositions,
    map_f,
    map_g,
)

__all__ = [name for name in dir() if not name.startswith("_")]
