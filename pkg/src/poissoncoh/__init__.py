"""Exact formal Poisson cohomology of polynomial Poisson structures."""

__version__ = "0.1.0"

from .algebra import Polynomial, monomial_basis, poly_mul, poly_partial, variables
from .multivec import (
    AffinePointMap,
    Multivector,
    Offset,
    OneForm,
    VolumeForm,
    divergence,
    euler_field,
    pushforward,
    schouten,
    wedge,
)
from .poisson import (
    NotPoissonError,
    PoissonStructure,
    anchor,
    anchor_invert,
    casimir_basis,
    exactness_witness,
    hamiltonian,
    intrinsic_gradient,
    jacobi_check,
    jacobian_bivector,
    modular_field,
    near_positivity_sample,
    rank_at,
    validate,
    wedge_power,
)
from .complexes import (
    build_slice_matrix,
    cohomology_dim,
    cohomology_table,
    fit_free_module,
)
from .models import ModelSpec, involution_map, model
from .assembly import BettiVector, blf_global_formal, near_positive_global
from .dsl import ParseError, format_structure, parse_structure
