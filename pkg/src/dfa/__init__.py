"""Operator algebra with displacement operators.

The package normal orders polynomials in creation, annihilation and
displacement operators, evaluates vacuum and displaced states on them, and
provides the closed-form characteristic functions and probability densities
of the resulting field measurements, with the special functions they need.
"""
from .algebra import (
    DisplacementExponent,
    Polynomial,
    Word,
    a,
    ad,
    adjoint,
    build_field,
    commutator,
    d,
    exp_graded,
    exp_truncated,
    multiply,
    normal_form,
    number_op_discrepancy,
    power,
    rewrite_normal_form,
    scalar,
)
from .coeffs import GaussianRational
from .errors import (
    DeclarationError,
    DFAError,
    DomainError,
    InvalidStateError,
    MissingParameterError,
    ModelError,
    ModelMismatchError,
    NoiseFloorError,
    NonConvergenceError,
    ParseError,
    TermCountError,
)
from .model import ModelContext
from .parser import format_canonical, load_model, parse, parse_expr, parse_model
from .states import (
    StateFunctional,
    canonical_words,
    conjugated,
    displaced,
    expect,
    gram_psd_check,
    mixture,
    moment,
    vacuum,
    vacuum_expect,
)

__all__ = [
    "DisplacementExponent",
    "Polynomial",
    "Word",
    "a",
    "ad",
    "adjoint",
    "build_field",
    "commutator",
    "d",
    "exp_graded",
    "exp_truncated",
    "multiply",
    "normal_form",
    "number_op_discrepancy",
    "power",
    "rewrite_normal_form",
    "scalar",
    "GaussianRational",
    "DeclarationError",
    "DFAError",
    "DomainError",
    "InvalidStateError",
    "MissingParameterError",
    "ModelError",
    "ModelMismatchError",
    "NoiseFloorError",
    "NonConvergenceError",
    "ParseError",
    "TermCountError",
    "ModelContext",
    "format_canonical",
    "load_model",
    "parse",
    "parse_expr",
    "parse_model",
    "StateFunctional",
    "canonical_words",
    "conjugated",
    "displaced",
    "expect",
    "gram_psd_check",
    "mixture",
    "moment",
    "vacuum",
    "vacuum_expect",
]

__version__ = "0.1.0"
