# flake8: noqa

__version__ = "0.1.0"

from .settings import Settings, get_settings, initialize

from .exactmath import Rat, RatMatrix, RatPoly, rat, rat_str, mat_mul, mat_pow, char_poly, min_poly, cyclotomic

from .stochastic import (
    PFA,
    Letter,
    LimitSystem,
    DecayCert,
    make_pfa,
    validate_pfa,
    check_pfa,
    pfa_value,
    dominant_period,
    power_projection,
    decay_certificate,
    limit_system,
    limit_matrix,
    err_bound,
)

from .semilinear import LinearSet, SemilinearSet, free_indices, fix_coordinate, is_stratified, enumerate_points

from .grammar import Grammar, parse_grammar, validate_letter_bounded, parikh_image

from .isolation import (
    Problem,
    FiniteWitness,
    LimitWitness,
    Isolated,
    NonIsolated,
    IsolationEngine,
    limit_value_set,
    branch_constant,
    decide,
    decide_isolation,
    verify_witness,
)

from .applications import (
    SubsetSumInstance,
    Empty,
    NonEmpty,
    NotIsolated,
    subset_sum_gadget,
    emptiness_if_isolated,
    value_one,
    bounded_alternation_isolation,
)

from .document import BaseDocument, ProblemDocument

from .property import (
    BaseProperty,
    IntegerProperty,
    RationalProperty,
    RationalVectorProperty,
    RationalMatrixProperty,
    JsonProperty,
)

from .exceptions import (
    IsoldeException,
    IsoldeValidationError,
    IsoldeProgrammingError,
    IsoldeCapacityError,
    IsoldeResourceError,
)
