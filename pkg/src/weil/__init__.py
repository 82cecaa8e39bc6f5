"""Finite-dimensional local (Weil) algebras over the reals.

Exact structure-constant algebras with ideals, quotients and the standard
constructions (biproduct, relative product, pullback, pushout, tensor
product); truncated polynomial algebras; evaluation of expressions at
algebra-valued points (jets and higher-order forward differentiation);
and a finite-difference polarization calculus used as an independent oracle.
"""

from .algebra import (
    DUAL,
    REALS,
    AlgebraError,
    AlgMorphism,
    Element,
    LocalAlgebra,
    from_products,
    identity_morphism,
    is_isomorphism,
    same_table,
    verify_morphism,
    zero_morphism,
)
from .constructions import (
    biproduct,
    distributivity_witness,
    factor_through,
    map_pair,
    pullback,
    pushout,
    relative_product,
    tensor,
)
from .expr import parse_expr, to_string
from .ideals import cokernel, ideal_generate, image, kernel, quotient_algebra
from .points import (
    APoint,
    eval_apoint,
    jet,
    jet_extract,
    kappa_action,
    lift,
    lift_map,
    parse_map,
    pullback_points_witness,
    tensor_compose_witness,
)
from .polarization import homogeneity_check, multidir_derivative_fd, polarize, taylor_remainder_check, unidirectional
from .truncated import (
    TruncSpec,
    build_B,
    build_C,
    build_truncated_multi,
    build_truncated_total,
    certify_non_isomorphic,
    tensor_split_iso,
    truncation_morphism,
)

__version__ = "0.1.0"
