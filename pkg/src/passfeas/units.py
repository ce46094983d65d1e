"""Unit conversions used at configuration boundaries.

Everything inside the library is SI (metres, seconds, m/s).  Speeds may
enter configuration files in mph and are converted exactly once, here.
"""
from __future__ import annotations

MPS_PER_MPH = 0.44704  # exact by definition (1 mile = 1609.344 m)


def mph_to_mps(value: float) -> float:
    return value * MPS_PER_MPH


def speed_to_mps(value: float, unit: str) -> float:
    """Convert a speed given in ``unit`` ("mph" or "mps") to m/s."""
    if unit == "mps":
        return float(value)
    if unit == "mph":
        return mph_to_mps(float(value))
    raise ValueError(f"unknown speed unit {unit!r}; expected 'mph' or 'mps'")
