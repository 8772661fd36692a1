"""Discrete 16-bin coloring of simulation fields.

Sixteen bins mirror the sixteen block colors the in-world display can
show.  The palette below runs white -> yellow -> orange -> red and is the
single source of truth: the browser editor vendors a generated copy and
must never re-derive bins or colors on its own.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import SimulationResult

MODES = ("stress", "position")

# bin 0 (cold) .. bin 15 (hot); hex sRGB
PALETTE: tuple[str, ...] = (
    "#ffffff",
    "#fdf5d9",
    "#fbecb3",
    "#f9e28e",
    "#f7d868",
    "#f5ce42",
    "#f3c41c",
    "#f1ba17",
    "#efa90f",
    "#ed9807",
    "#eb8700",
    "#e06c00",
    "#d55200",
    "#ca3700",
    "#bf1d00",
    "#b40202",
)


@dataclass
class HeatMap:
    """Per-particle bin assignment plus the normalization maximum."""

    mode: str
    bins: np.ndarray  # (N,) ints in [0, 15]
    scale_max: float  # Pa for stress mode, m for position mode
    exceeds_ultimate: np.ndarray  # (N,) bool, von Mises above the limit


def bin_values(values: np.ndarray, scale_max: float) -> np.ndarray:
    """min(15, floor(16 v / scale_max)); an all-zero field maps to bin 0."""
    values = np.asarray(values, dtype=float)
    if scale_max <= 0.0:
        return np.zeros(values.shape, dtype=int)
    return np.minimum(15, np.floor(16.0 * values / scale_max).astype(int))


def colorize(result: SimulationResult, mode: str, ult_stress: float) -> HeatMap:
    """Bin the stress or displacement field of a finished run."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "stress":
        values = result.von_mises
        scale = float(result.max_von_mises)
    else:
        values = np.linalg.norm(result.displacements, axis=1)
        scale = float(values.max()) if len(values) else 0.0
    return HeatMap(
        mode=mode,
        bins=bin_values(values, scale),
        scale_max=scale,
        exceeds_ultimate=np.asarray(result.von_mises) > ult_stress,
    )
