"""B-series, word series and extended word series with exact coefficient algebra."""
from .butcher import (
    BMap,
    CheckResult,
    EULER,
    EXPLICIT_MIDPOINT,
    HEUN,
    IMPLICIT_MIDPOINT,
    RK4,
    RKTableau,
    adjoint,
    compose,
    condition_text,
    conjugate,
    effective_order,
    elementary_weights,
    exact_flow_bmap,
    exp_star,
    inverse,
    is_hamiltonian_field_coeffs,
    is_symplectic_coeffs,
    is_symplectic_tableau,
    log_star,
    order_conditions,
    order_of,
    unit_bmap,
)
from .extended import ExtCoeffs, PerturbedProblem, bigstar, ext_bracket, flow_coeffs, xi_big, xi_small
from .polynomials import Poly, PolyMap
from .splitting import (
    LIE_TROTTER,
    STRANG,
    ResonanceError,
    SplittingScheme,
    detect_resonances,
    exp_modified,
    modified_system,
    splitting_coeffs,
)
from .trees import EMPTY, LEAF, Forest, RootedTree, butcher_product, coproduct, density, enumerate_trees, symmetry
from .vectorfields import (
    bseries_eval,
    dsw_eval,
    elementary_differential,
    hamiltonian_vector_field,
    hamiltonian_word,
    jacobi_bracket,
    poisson_bracket,
    word_basis,
    wordseries_eval,
)
from .words import (
    LambdaSpec,
    WMap,
    antipode_inverse,
    convolution,
    is_group_element,
    is_lie_element,
    iterated_integral_coeffs,
    lie_bracket,
    shuffle,
)

__version__ = "0.1.0"

__all__ = [
    "BMap",
    "CheckResult",
    "EULER",
    "EXPLICIT_MIDPOINT",
    "HEUN",
    "IMPLICIT_MIDPOINT",
    "RK4",
    "RKTableau",
    "adjoint",
    "compose",
    "condition_text",
    "conjugate",
    "effective_order",
    "elementary_weights",
    "exact_flow_bmap",
    "exp_star",
    "inverse",
    "is_hamiltonian_field_coeffs",
    "is_symplectic_coeffs",
    "is_symplectic_tableau",
    "log_star",
    "order_conditions",
    "order_of",
    "unit_bmap",
    "ExtCoeffs",
    "PerturbedProblem",
    "bigstar",
    "ext_bracket",
    "flow_coeffs",
    "xi_big",
    "xi_small",
    "Poly",
    "PolyMap",
    "LIE_TROTTER",
    "STRANG",
    "ResonanceError",
    "SplittingScheme",
    "detect_resonances",
    "exp_modified",
    "modified_system",
    "splitting_coeffs",
    "EMPTY",
    "LEAF",
    "Forest",
    "RootedTree",
    "butcher_product",
    "coproduct",
    "density",
    "enumerate_trees",
    "symmetry",
    "bseries_eval",
    "dsw_eval",
    "elementary_differential",
    "hamiltonian_vector_field",
    "hamiltonian_word",
    "jacobi_bracket",
    "poisson_bracket",
    "word_basis",
    "wordseries_eval",
    "LambdaSpec",
    "WMap",
    "antipode_inverse",
    "convolution",
    "is_group_element",
    "is_lie_element",
    "iterated_integral_coeffs",
    "lie_bracket",
    "shuffle",
]
