"""Noncommutative particle mechanics: gauge series, dynamics and Darboux reduction."""

from ._core import (
    DimensionError,
    GaugeSeries,
    InvalidArgumentError,
    ModeError,
    NcmechError,
    Polynomial,
    RangeError,
    SingularError,
    bracket,
    build_series,
    constant_b_closed_form,
    critical_theta,
    invariance_holds,
    kappa,
    resolve_orientation,
    rotation_frequency,
    run,
    scenario_names,
    simulate,
)

__all__ = [
    "DimensionError",
    "GaugeSeries",
    "InvalidArgumentError",
    "ModeError",
    "NcmechError",
    "Polynomial",
    "RangeError",
    "SingularError",
    "bracket",
    "build_series",
    "constant_b_closed_form",
    "critical_theta",
    "invariance_holds",
    "kappa",
    "resolve_orientation",
    "rotation_frequency",
    "run",
    "scenario_names",
    "simulate",
]
