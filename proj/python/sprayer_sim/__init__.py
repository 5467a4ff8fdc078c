"""Deterministic simulator for a solar-powered sprayer/mower robot."""

from ._core import (
    TELEMETRY_SCHEMA,
    ConfigError,
    ModeError,
    ScriptError,
    Simulation,
    UsageError,
    calc_kinds,
    calculate as _calculate,
    config_schema,
    normalize_config,
    normalize_script,
    preset_names,
    quantize_time,
    run_script,
    validate_frame,
)


def calculate(kind, *params):
    """Runs a closed-form calculator, e.g. ``calculate("backup", 4.5, 0.62)``."""
    return _calculate(kind, [str(p) for p in params])


__all__ = [
    "TELEMETRY_SCHEMA",
    "ConfigError",
    "ModeError",
    "ScriptError",
    "Simulation",
    "UsageError",
    "calc_kinds",
    "calculate",
    "config_schema",
    "normalize_config",
    "normalize_script",
    "preset_names",
    "quantize_time",
    "run_script",
    "validate_frame",
]
