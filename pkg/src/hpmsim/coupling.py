"""Field-to-wire coupling: short-dipole pickup with a Gaussian half-wave resonance."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .physics import DomainError


@dataclass(frozen=True)
class CouplingParams:
    """Geometry and loss terms for one victim conductor.

    ``orientation_factor`` is the projection of the wire axis onto the incident
    E-vector, see :func:`orientation_factor`. ``resonance_width`` is the
    Gaussian width (metres) of the enhancement around ``lambda / 2``.
    """

    wire_length: float
    orientation_factor: float = 1.0
    polarization_efficiency: float = 1.0
    quality_factor: float = 10.0
    resonance_width: float = 0.02

    def __post_init__(self) -> None:
        if not self.wire_length > 0:
            raise DomainError(f"wire_length must be > 0, got {self.wire_length!r}")
        if not 0.0 <= self.orientation_factor <= 1.0:
            raise DomainError("orientation_factor must lie in [0, 1]")
        if not 0.0 < self.polarization_efficiency <= 1.0:
            raise DomainError("polarization_efficiency must lie in (0, 1]")
        if not self.quality_factor >= 1.0:
            raise DomainError("quality_factor must be >= 1")
        if not self.resonance_width > 0:
            raise DomainError("resonance_width must be > 0")


def orientation_factor(theta_wire: float) -> float:
    """Dipole projection ``|sin(theta)|``; theta is wire-axis to E-vector, radians."""
    return abs(math.sin(theta_wire))


def induced_voltage(efield, params: CouplingParams):
    """Open-circuit voltage ``E * (L/2) * F * sqrt(eta_pol)``."""
    e = np.asarray(efield, dtype=float)
    if np.any(e < 0):
        raise DomainError("efield must be >= 0")
    v = e * (params.wire_length / 2.0) * params.orientation_factor * math.sqrt(
        params.polarization_efficiency
    )
    return float(v) if v.ndim == 0 else v


def resonance_factor(wire_length, wavelength: float, q: float = 10.0, sigma_l: float = 0.02):
    """Enhancement ``1 + (Q-1) exp(-(L - lambda/2)**2 / (2 sigma_L**2))``.

    Peaks at exactly ``q`` for a half-wave wire and tends to 1 away from it.
    """
    length = np.asarray(wire_length, dtype=float)
    if np.any(length <= 0) or wavelength <= 0 or q <= 0 or sigma_l <= 0:
        raise DomainError("resonance_factor inputs must be > 0")
    detune = length - wavelength / 2.0
    f = 1.0 + (q - 1.0) * np.exp(-(detune**2) / (2.0 * sigma_l**2))
    return float(f) if f.ndim == 0 else f


def coupled_voltage(efield, params: CouplingParams, wavelength: float):
    """Resonance-enhanced induced voltage.

    The short-dipole effective length ``L/2`` is kept for every length,
    including wires longer than a half wave.
    """
    return induced_voltage(efield, params) * resonance_factor(
        params.wire_length, wavelength, params.quality_factor, params.resonance_width
    )


def mean_resonance_factor(
    low: float, high: float, wavelength: float, q: float = 10.0, sigma_l: float = 0.02
) -> float:
    """Average of :func:`resonance_factor` for a length uniform on ``[low, high]``."""
    if not 0 < low <= high:
        raise DomainError("need 0 < low <= high")
    if high == low:
        return resonance_factor(low, wavelength, q, sigma_l)
    centre = wavelength / 2.0
    scale = sigma_l * math.sqrt(2.0)
    gauss_area = (
        sigma_l
        * math.sqrt(math.pi / 2.0)
        * (math.erf((high - centre) / scale) - math.erf((low - centre) / scale))
    )
    return 1.0 + (q - 1.0) * gauss_area / (high - low)
