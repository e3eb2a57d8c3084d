"""Numerics for mass-constrained focusing NLS on product domains R^N x M^k:
closed-form soliton data, Gagliardo-Nirenberg threshold calculus, sphere
criteria, and a circle-waveguide gradient-flow solver for the trivial-to-
nontrivial bifurcation."""

from .errors import DomainError, NumericError
from .ground_state import GroundStateData, ProblemParams, ground_state_data
from .gn_constants import GNConstants, ManifoldSpec, constants_for
from .thresholds import ThresholdReport, threshold_report
from .field_solver import Field, FlowConfig, Grid, ScanConfig

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "NumericError",
    "ProblemParams",
    "GroundStateData",
    "ground_state_data",
    "GNConstants",
    "ManifoldSpec",
    "constants_for",
    "ThresholdReport",
    "threshold_report",
    "Grid",
    "Field",
    "FlowConfig",
    "ScanConfig",
    "__version__",
]
