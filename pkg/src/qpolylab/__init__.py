"""Exact verification of the Q-polynomial structure of the subspace lattice L_N(q)."""

from .checks import CheckResult
from .gfspace import FieldSpec, gaussian_binomial, q_integer
from .operators import build_operators
from .poset import build_geometry
from .report import RunConfig, VerificationReport, emit_json, parse_report, run

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "FieldSpec",
    "RunConfig",
    "VerificationReport",
    "build_geometry",
    "build_operators",
    "emit_json",
    "gaussian_binomial",
    "parse_report",
    "q_integer",
    "run",
]
