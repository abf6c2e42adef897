"""Series solution and identity certification for the wave equation on a
uniformly translating interval (axially moving string between two pinned
supports)."""

__version__ = "0.1.0"

from .coefficients import (
    ParsevalSums,
    SpectralSolution,
    coefficients_minus,
    coefficients_plus,
    parseval_sum,
    solve,
)
from .domain import (
    DerivedConstants,
    InitialData,
    InitialDataSpec,
    QuadratureSpec,
    StringConfig,
    build_initial_data,
    derive_constants,
    initial_data,
    load_config,
    moving_interval,
)
from .energy import (
    EnergyReport,
    energy_at,
    energy_report,
    initial_energies,
    spectral_energy,
)
from .errors import ConfigurationError, NumericError
from .extension import ExtensionField, extend_slope, extend_velocity
from .observability import (
    ObservabilityReport,
    SharpnessReport,
    observe_both_endpoints,
    observe_horizon,
    observe_one_endpoint,
    sharpness_probe,
    velocity_trace_equivalent,
)
from .oracle import (
    CharacteristicSolver,
    CrossValidation,
    FrozenFrameFD,
    cross_validate,
    fd_solve,
)
from .quadrature import Panelization, integrate
from .series import (
    FieldSample,
    TraceSeries,
    boundary_trace,
    check_periodicity,
    eval_field,
    field_components,
    velocity_trace,
)

__all__ = [
    "__version__",
    "CharacteristicSolver",
    "ConfigurationError",
    "CrossValidation",
    "DerivedConstants",
    "EnergyReport",
    "ExtensionField",
    "FieldSample",
    "FrozenFrameFD",
    "InitialData",
    "InitialDataSpec",
    "NumericError",
    "ObservabilityReport",
    "Panelization",
    "ParsevalSums",
    "QuadratureSpec",
    "SharpnessReport",
    "SpectralSolution",
    "StringConfig",
    "TraceSeries",
    "boundary_trace",
    "build_initial_data",
    "check_periodicity",
    "coefficients_minus",
    "coefficients_plus",
    "cross_validate",
    "derive_constants",
    "energy_at",
    "energy_report",
    "eval_field",
    "extend_slope",
    "extend_velocity",
    "fd_solve",
    "field_components",
    "initial_data",
    "initial_energies",
    "integrate",
    "load_config",
    "moving_interval",
    "observe_both_endpoints",
    "observe_horizon",
    "observe_one_endpoint",
    "parseval_sum",
    "sharpness_probe",
    "solve",
    "spectral_energy",
    "velocity_trace",
    "velocity_trace_equivalent",
]
