"""Simulator for verifiable entanglement-free (t, n) quantum secret sharing."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetError,
    ConfigError,
    DimensionMismatch,
    InvalidEvaluationPoints,
    ModulusMismatch,
    NotActive,
    NotNormalized,
    PrematureRecovery,
    QSSError,
    WriteOnceViolation,
    WrongBasis,
    ZeroInverse,
)
from .field import FieldElement, Polynomial, PrimeModulus, lagrange_weight, mod_inverse, poly_eval  # noqa: E402
from .protocol import Mode, ProtocolConfig, Transcript, Verdict, run_round, share_unknown_state  # noqa: E402

__all__ = [
    "BudgetError",
    "ConfigError",
    "DimensionMismatch",
    "FieldElement",
    "InvalidEvaluationPoints",
    "Mode",
    "ModulusMismatch",
    "NotActive",
    "NotNormalized",
    "Polynomial",
    "PrematureRecovery",
    "PrimeModulus",
    "ProtocolConfig",
    "QSSError",
    "Transcript",
    "Verdict",
    "WriteOnceViolation",
    "WrongBasis",
    "ZeroInverse",
    "lagrange_weight",
    "mod_inverse",
    "poly_eval",
    "run_round",
    "share_unknown_state",
]
