"""Numerical checks of the uniqueness proof: zeros, phase rigidity, completeness."""

from .counterexample import counterexample_pair
from .hadamard import PhaseCheckResult, hadamard_phase_check
from .zalik import ZalikReport, zalik_centers, zalik_report
from .zeros import (
    Strip,
    ZeroSet,
    find_zeros,
    match_zero_sets,
    multiplicity_periodicity_check,
    reflection_identity_check,
    winding_number,
)

__all__ = [
    "Strip",
    "ZeroSet",
    "winding_number",
    "find_zeros",
    "match_zero_sets",
    "multiplicity_periodicity_check",
    "reflection_identity_check",
    "PhaseCheckResult",
    "hadamard_phase_check",
    "ZalikReport",
    "zalik_centers",
    "zalik_report",
    "counterexample_pair",
]
