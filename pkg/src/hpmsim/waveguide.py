"""Rectangular waveguide mode chart and TE10 conductor loss (WR-340 defaults)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C, COPPER_CONDUCTIVITY, ETA0, MU0, NEPER_TO_DB
from .physics import DomainError

MAX_MODE_INDEX = 5


class EvanescentModeError(DomainError):
    """Requested frequency is at or below the mode cutoff."""


@dataclass(frozen=True)
class WaveguideSpec:
    width_a: float = 0.08636
    height_b: float = 0.04318
    wall_conductivity: float = COPPER_CONDUCTIVITY

    def __post_init__(self) -> None:
        if not self.width_a > self.height_b > 0:
            raise DomainError("waveguide needs a > b > 0")
        if not self.wall_conductivity > 0:
            raise DomainError("wall_conductivity must be > 0")


@dataclass(frozen=True, order=True)
class ModeEntry:
    cutoff: float
    mode_family: str
    m: int
    n: int

    @property
    def label(self) -> str:
        return f"{self.mode_family}{self.m}{self.n}"


def _check_mode(family: str, m: int, n: int) -> None:
    if family not in ("TE", "TM"):
        raise DomainError(f"unknown mode family {family!r}")
    if m < 0 or n < 0 or int(m) != m or int(n) != n:
        raise DomainError(f"mode indices must be non-negative integers, got ({m}, {n})")
    if family == "TE" and m == 0 and n == 0:
        raise DomainError("TE00 does not exist")
    if family == "TM" and (m < 1 or n < 1):
        raise DomainError(f"TM{m}{n} does not exist; TM modes need m, n >= 1")


def cutoff_frequency(spec: WaveguideSpec, m: int, n: int, family: str = "TE") -> float:
    """``(c/2) * sqrt((m/a)**2 + (n/b)**2)`` in Hz."""
    _check_mode(family, m, n)
    return 0.5 * C * math.hypot(m / spec.width_a, n / spec.height_b)


def mode_chart(spec: WaveguideSpec, f_max: float) -> list[ModeEntry]:
    """Every TE/TM mode (indices up to 5) with cutoff <= ``f_max``, lowest first."""
    if not f_max > 0:
        raise DomainError("f_max must be > 0")
    modes = []
    for family in ("TE", "TM"):
        for m in range(MAX_MODE_INDEX + 1):
            for n in range(MAX_MODE_INDEX + 1):
                try:
                    fc = cutoff_frequency(spec, m, n, family)
                except DomainError:
                    continue
                if fc <= f_max:
                    modes.append(ModeEntry(fc, family, m, n))
    # TE before TM on degenerate cutoffs
    modes.sort(key=lambda e: (e.cutoff, e.mode_family, e.m, e.n))
    return modes


def surface_resistance(frequency, conductivity: float):
    """Conductor surface resistance ``sqrt(pi f mu0 / sigma)`` in ohms."""
    f = np.asarray(frequency, dtype=float)
    if np.any(f <= 0) or not conductivity > 0:
        raise DomainError("frequency and conductivity must be > 0")
    rs = np.sqrt(math.pi * f * MU0 / conductivity)
    return float(rs) if rs.ndim == 0 else rs


def te10_attenuation_np(spec: WaveguideSpec, frequency):
    """TE10 wall-loss attenuation in Np/m.

    ``alpha = Rs / (a b eta0 sqrt(1 - x**2)) * (2 b x**2 + a (1 - x**2))``
    with ``x = fc / f``. The phase constant enters through its normalised form
    ``beta / k = sqrt(1 - x**2)``.
    """
    f = np.asarray(frequency, dtype=float)
    fc = cutoff_frequency(spec, 1, 0)
    if np.any(f <= fc):
        raise EvanescentModeError(f"TE10 is evanescent at or below {fc:.6g} Hz")
    a, b = spec.width_a, spec.height_b
    x2 = (fc / f) ** 2
    rs = surface_resistance(f, spec.wall_conductivity)
    alpha = rs / (a * b * ETA0 * np.sqrt(1.0 - x2)) * (2.0 * b * x2 + a * (1.0 - x2))
    return float(alpha) if np.ndim(alpha) == 0 else alpha


def te10_attenuation(spec: WaveguideSpec, frequency):
    """TE10 wall-loss attenuation in dB/m."""
    return te10_attenuation_np(spec, frequency) * NEPER_TO_DB


def run_loss_fraction(attenuation_db_per_m: float, length: float) -> float:
    """Fraction of power lost over ``length`` metres of guide."""
    return 1.0 - 10.0 ** (-attenuation_db_per_m * length / 10.0)
