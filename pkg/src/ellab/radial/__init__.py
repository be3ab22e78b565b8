"""
Radial ODE shooting, explicit radial solutions and Pohozaev-type identities.
"""

from .closed_forms import (
    BenchmarkSolution,
    ClosedForm,
    ResidualReport,
    UkBound,
    UkFamily,
    benchmark_solution,
    bubble,
    bubble_nonlinearity,
    uk_family,
    uk_nonexistence_bound,
    verify_closed_form,
)
from .pohozaev import IdentityResidual, PsiRange, pohozaev_psi, psi_positive_range, rellich_pohozaev_residual, surface_area
from .profile import Provenance, RadialProfile, profile_to_rows
from .shooting import OutcomeTag, ShootOutcome, shoot, shoot_to_radius

__all__ = [
    "BenchmarkSolution",
    "ClosedForm",
    "IdentityResidual",
    "OutcomeTag",
    "Provenance",
    "PsiRange",
    "RadialProfile",
    "ResidualReport",
    "ShootOutcome",
    "UkBound",
    "UkFamily",
    "benchmark_solution",
    "bubble",
    "bubble_nonlinearity",
    "pohozaev_psi",
    "profile_to_rows",
    "psi_positive_range",
    "rellich_pohozaev_residual",
    "shoot",
    "shoot_to_radius",
    "surface_area",
    "uk_family",
    "uk_nonexistence_bound",
    "verify_closed_form",
]
