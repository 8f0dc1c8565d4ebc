"""Desk-scale numerical checks for spin geometry, Dirac operators under
metric perturbation, Seiberg-Witten linearizations, and the Kahler kernel
system on a discretized flat 4-torus."""

from .fields import Grid, read_field, write_field, write_matrix
from .dirac import SpincFrame, dirac, dirac_variation
from .functional import (
    Configuration,
    ObstructionCovector,
    SWValue,
    TangentVector,
    sw_adjoint,
    sw_differential,
    sw_functional,
)
from .suites import SuiteConfig, convergence_study, run_suite

__all__ = [
    "Grid",
    "SpincFrame",
    "Configuration",
    "ObstructionCovector",
    "SWValue",
    "TangentVector",
    "SuiteConfig",
    "convergence_study",
    "dirac",
    "dirac_variation",
    "read_field",
    "run_suite",
    "sw_adjoint",
    "sw_differential",
    "sw_functional",
    "write_field",
    "write_matrix",
]

__version__ = "0.1.0"
