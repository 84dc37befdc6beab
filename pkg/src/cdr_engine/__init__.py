"""Exact computations with the chiral de Rham complex of the plane and its A_N quotients."""

from .character import (
    CharacterReport,
    GAction,
    GradedSlice,
    compare,
    enumerate_invariant_slice,
    formula_length,
    formula_length_multichoose,
    minimal_generators,
    partitions_at_most,
)
from .coordinates import (
    ConstraintViolation,
    CoordTransform1,
    CoordTransform2,
    compose2,
    invert2,
    transform_fields1,
    unit_factor,
    validate2,
    verify_tilde_ope,
    verify_virasoro_invariance,
)
from .modes import Kind, Mode, StateVector, apply_mode, format_state, parse_state
from .monoid import (
    AbelianGroupData,
    FinGenMonoid,
    MonoidHom,
    an_chart,
    an_monoid,
    clifford_generators,
    etale_check,
    groupify,
    is_saturated,
    log_differentials,
    membership,
    smoothness_check,
)
from .series import TruncatedSeries1, TruncatedSeries2, comp_invert1, compose1, derive, unit_invert
from .vertex import (
    distinguished_states,
    nth_product,
    ope_singular,
    translate,
)

__version__ = "0.1.0"
