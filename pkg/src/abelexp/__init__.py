"""Exact exponential polynomials on finitely generated abelian groups."""

from .cyclotomic import Cyclotomic, cyc_arith, cyc_root_of_unity, cyc_to_float, root_of_unity
from .dsl import format_expopoly, parse
from .errors import (
    AbelexpError,
    CyclotomicDivisionError,
    DecompositionFailureError,
    IllPosedInstanceError,
    NoCertificateError,
    NotFiniteError,
    NotGeneralizedPolynomialError,
    NotInLiftedFormError,
    OverflowGuardError,
    ParseError,
    PreconditionError,
    StructuralError,
    UnsupportedEmbeddingError,
)
from .expopoly import (
    DifferenceOperator,
    Exponential,
    ExpoPoly,
    VectorPolynomial,
    add_scale,
    apply_diff_op,
    compose_functional,
    compose_ops,
    evaluate,
    translate,
)
from .groups import GroupElement, GroupSpec, group_add, group_product, parse_element, parse_group
from .structure import (
    ClassificationReport,
    FunctionOracle,
    TranslateSpan,
    check_genpoly_blackbox,
    classify,
    degree,
    degree_certificate,
    extract_components_ops,
    extract_components_solve,
    homogeneous_parts,
    lemma2_operators,
    lift,
    n_of_f_bounds,
    polarize,
    spectral_set,
    translate_span,
    unlift,
)

__version__ = "0.1.0"
