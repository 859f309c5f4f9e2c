"""Locally optimal designs for two-parameter models."""

from ._ldopt import (
    DomainError,
    Error,
    Model,
    NumericalError,
    ParseError,
    PreconditionError,
    UnclassifiableRegion,
    c_matrix,
    classify,
    find_breakpoints,
    loewner_compare,
    merge_pair,
    optimize,
    reduce,
    run_cli,
    verify_equivalence_D,
)

__all__ = [
    "DomainError",
    "Error",
    "Model",
    "NumericalError",
    "ParseError",
    "PreconditionError",
    "UnclassifiableRegion",
    "c_matrix",
    "classify",
    "find_breakpoints",
    "loewner_compare",
    "merge_pair",
    "optimize",
    "reduce",
    "run_cli",
    "verify_equivalence_D",
]
