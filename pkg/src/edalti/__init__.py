"""Skin-conductance modeling toolkit.

Fits a per-recording discrete LTI model with nonzero initial state,
estimates the sparse nonnegative sudomotor drive by L1-regularized
quadratic programming, and decomposes the recording into tonic and phasic
components.
"""

__version__ = "0.1.0"

from .series import (
    EventSchedule,
    ScreeningConfig,
    UniformSeries,
    ValidityReport,
    butterworth_lowpass,
    decimate,
    screen_validity,
    trim,
)
from .lti import (
    DiscreteTransferFunction,
    FirstOrderSubsystem,
    InitialState,
    SubsystemSet,
    forced_response,
    free_response,
    impulse_response,
    partial_fractions,
    poles,
    prune,
    simulate,
    time_constant,
)

__all__ = [
    "__version__",
    "UniformSeries",
    "EventSchedule",
    "ValidityReport",
    "ScreeningConfig",
    "butterworth_lowpass",
    "decimate",
    "trim",
    "screen_validity",
    "DiscreteTransferFunction",
    "InitialState",
    "FirstOrderSubsystem",
    "SubsystemSet",
    "simulate",
    "free_response",
    "forced_response",
    "impulse_response",
    "poles",
    "partial_fractions",
    "prune",
    "time_constant",
]
