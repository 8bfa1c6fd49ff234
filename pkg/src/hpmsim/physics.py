"""Free-space propagation, reflector antenna and pointing/polarization math.

All external angles are in degrees; trig is done in radians internally.
Functions that take a range accept either a float or a numpy array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .constants import C, ETA0, F0

# Gaussian-beam pointing-loss coefficient (4 ln 2 ~= 2.77, rounded).
POINTING_LOSS_COEFF = 2.76
POLARIZATION_FLOOR = 0.1
BEAMWIDTH_CONSTANT = 70.0  # degrees * D / lambda


class DomainError(ValueError):
    """An input lies outside the domain of a physical formula."""


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not np.all(np.asarray(value) > 0):
            raise DomainError(f"{name} must be > 0, got {value!r}")


def _require_fraction(name: str, value: float) -> None:
    if not 0.0 < value <= 1.0:
        raise DomainError(f"{name} must lie in (0, 1], got {value!r}")


@dataclass(frozen=True)
class SystemConfig:
    """Transmitter, antenna and line parameters for one scenario.

    ``transmit_power`` is the CW or average RF power at the magnetron output.
    Pulsed operation is described by ``duty_cycle``; the peak power is
    ``transmit_power / duty_cycle``.
    """

    transmit_power: float = 25e3
    dish_diameter: float = 0.60
    frequency: float = F0
    aperture_efficiency: float = 0.55
    line_efficiency_waveguide: float = 0.98
    line_efficiency_feed: float = 0.97
    line_efficiency_radome: float = 1.0
    duty_cycle: float = 1.0

    def __post_init__(self) -> None:
        _require_positive(
            transmit_power=self.transmit_power,
            dish_diameter=self.dish_diameter,
            frequency=self.frequency,
        )
        _require_fraction("aperture_efficiency", self.aperture_efficiency)
        _require_fraction("line_efficiency_waveguide", self.line_efficiency_waveguide)
        _require_fraction("line_efficiency_feed", self.line_efficiency_feed)
        _require_fraction("line_efficiency_radome", self.line_efficiency_radome)
        _require_fraction("duty_cycle", self.duty_cycle)

    @property
    def wavelength(self) -> float:
        return C / self.frequency

    @property
    def line_efficiency(self) -> float:
        return (
            self.line_efficiency_waveguide
            * self.line_efficiency_feed
            * self.line_efficiency_radome
        )

    @property
    def peak_power(self) -> float:
        return pulsed_peak_power(self.transmit_power, self.duty_cycle)

    @property
    def gain(self) -> float:
        return antenna_gain(self.dish_diameter, self.wavelength, self.aperture_efficiency)

    @property
    def beamwidth_3db(self) -> float:
        return half_power_beamwidth(self.dish_diameter, self.wavelength)

    @property
    def far_field_distance(self) -> float:
        return far_field_distance(self.dish_diameter, self.wavelength)

    def with_(self, **changes) -> "SystemConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class PropagationResult:
    range: float
    power_density: float
    efield: float
    gain_linear: float
    gain_dbi: float
    beamwidth_3db: float
    far_field: bool


@dataclass(frozen=True)
class PointingModel:
    error_angle: float
    beamwidth_3db: float

    @property
    def loss(self) -> float:
        return pointing_loss(self.error_angle, self.beamwidth_3db)


def antenna_gain(diameter: float, wavelength: float, aperture_efficiency: float) -> float:
    """Linear gain of a parabolic reflector, ``eta_ap * (pi D / lambda)**2``."""
    _require_positive(diameter=diameter, wavelength=wavelength)
    _require_fraction("aperture_efficiency", aperture_efficiency)
    return aperture_efficiency * (math.pi * diameter / wavelength) ** 2


def to_dbi(gain: float) -> float:
    _require_positive(gain=gain)
    return 10.0 * math.log10(gain)


def half_power_beamwidth(diameter: float, wavelength: float) -> float:
    """-3 dB beamwidth in degrees (``70 lambda / D`` rule of thumb)."""
    _require_positive(diameter=diameter, wavelength=wavelength)
    return BEAMWIDTH_CONSTANT * wavelength / diameter


def far_field_distance(diameter: float, wavelength: float) -> float:
    """Fraunhofer distance ``2 D**2 / lambda``; zero diameter gives zero."""
    if diameter < 0:
        raise DomainError(f"diameter must be >= 0, got {diameter!r}")
    _require_positive(wavelength=wavelength)
    return 2.0 * diameter**2 / wavelength


def power_density(config: SystemConfig, range, *, include_line_loss: bool, peak: bool = False):
    """Boresight power density in W/m^2 at ``range`` metres.

    Args:
        config: scenario parameters.
        range: distance(s) from the antenna, > 0.
        include_line_loss: apply the waveguide/feed/radome efficiency product.
            There is deliberately no default.
        peak: use the pulse peak power instead of the average power.
    """
    _require_positive(range=range)
    power = config.peak_power if peak else config.transmit_power
    eta_line = config.line_efficiency if include_line_loss else 1.0
    r = np.asarray(range, dtype=float)
    s = power * eta_line * config.gain / (4.0 * math.pi * r**2)
    return float(s) if s.ndim == 0 else s


def efield(power_density):
    """Plane-wave field magnitude ``sqrt(S * eta0)`` in V/m."""
    s = np.asarray(power_density, dtype=float)
    if np.any(s < 0):
        raise DomainError("power density must be >= 0")
    e = np.sqrt(s * ETA0)
    return float(e) if e.ndim == 0 else e


def field_at(config: SystemConfig, range, *, include_line_loss: bool, peak: bool = False):
    """Shorthand for ``efield(power_density(...))``."""
    return efield(power_density(config, range, include_line_loss=include_line_loss, peak=peak))


def propagate(
    config: SystemConfig, range: float, *, include_line_loss: bool, peak: bool = False
) -> PropagationResult:
    s = power_density(config, range, include_line_loss=include_line_loss, peak=peak)
    g = config.gain
    return PropagationResult(
        range=float(range),
        power_density=s,
        efield=efield(s),
        gain_linear=g,
        gain_dbi=to_dbi(g),
        beamwidth_3db=config.beamwidth_3db,
        far_field=range >= config.far_field_distance,
    )


def pointing_loss(error_angle, beamwidth_3db: float):
    """Gaussian main-lobe loss ``exp(-2.76 * (err / (bw/2))**2)``.

    Both angles in degrees. Accepts arrays for ``error_angle``.
    """
    _require_positive(beamwidth_3db=beamwidth_3db)
    err = np.asarray(error_angle, dtype=float)
    if np.any(err < 0):
        raise DomainError("pointing error must be >= 0")
    theta_norm = err / (beamwidth_3db / 2.0)
    loss = np.exp(-POINTING_LOSS_COEFF * theta_norm**2)
    return float(loss) if loss.ndim == 0 else loss


def polarization_efficiency(angle):
    """``max(cos(angle)**2, 0.1)`` for a mismatch angle in radians."""
    eff = np.maximum(np.cos(np.asarray(angle, dtype=float)) ** 2, POLARIZATION_FLOOR)
    return float(eff) if eff.ndim == 0 else eff


def pulsed_peak_power(average_power: float, duty_cycle: float) -> float:
    _require_fraction("duty_cycle", duty_cycle)
    return average_power / duty_cycle


def beam_footprint(range, beamwidth_3db: float):
    """-3 dB beam diameter in metres at ``range``."""
    if not 0.0 < beamwidth_3db < 180.0:
        raise DomainError(f"beamwidth must lie in (0, 180) degrees, got {beamwidth_3db!r}")
    r = np.asarray(range, dtype=float)
    if np.any(r < 0):
        raise DomainError("range must be >= 0")
    d = 2.0 * r * math.tan(math.radians(beamwidth_3db) / 2.0)
    return float(d) if d.ndim == 0 else d
