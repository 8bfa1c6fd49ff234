"""Logistic damage model per subsystem and any-subsystem system kill."""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

import numpy as np

from . import _toml
from .physics import DomainError, SystemConfig, field_at

# exp() overflows near 709; the logistic is already 0/1 to double precision here.
EXPONENT_CLAMP = 500.0
MAX_SEARCH_RANGE = 10_000.0


@dataclass(frozen=True)
class SubsystemModel:
    name: str
    e50: float
    sigma_e: float

    def __post_init__(self) -> None:
        if not self.e50 > 0 or not self.sigma_e > 0:
            raise DomainError(f"subsystem {self.name!r}: e50 and sigma_e must be > 0")


@dataclass(frozen=True)
class DroneModel:
    subsystems: tuple[SubsystemModel, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "subsystems", tuple(self.subsystems))
        if not self.subsystems:
            raise DomainError("a drone needs at least one subsystem")
        names = [s.name for s in self.subsystems]
        if len(set(names)) != len(names):
            raise DomainError(f"duplicate subsystem names in {names}")

    @classmethod
    def from_mapping(cls, mapping: dict) -> "DroneModel":
        """Build from ``{name: [e50, sigma_e]}``."""
        subs = []
        for name, pair in mapping.items():
            try:
                e50, sigma = (float(x) for x in pair)
            except (TypeError, ValueError):
                raise DomainError(
                    f"drone.{name}: expected [e50, sigma_e], got {pair!r}"
                ) from None
            subs.append(SubsystemModel(name, e50, sigma))
        return cls(tuple(subs))

    @property
    def e50s(self) -> np.ndarray:
        return np.array([s.e50 for s in self.subsystems])

    @property
    def sigmas(self) -> np.ndarray:
        return np.array([s.sigma_e for s in self.subsystems])

    def __len__(self) -> int:
        return len(self.subsystems)


def default_drone() -> DroneModel:
    """The shipped five-subsystem profile (``data/drone_default.toml``)."""
    text = resources.files("hpmsim").joinpath("data/drone_default.toml").read_text()
    return DroneModel.from_mapping(_toml.loads(text)["drone"])


def sigmoid(efield, e50, sigma_e):
    """Logistic ``1 / (1 + exp(-(E - E50) / sigma))`` with a clamped exponent.

    Broadcasts over numpy arrays.
    """
    z = np.clip(-(np.asarray(efield, dtype=float) - e50) / sigma_e, -EXPONENT_CLAMP, EXPONENT_CLAMP)
    p = 1.0 / (1.0 + np.exp(z))
    return float(p) if p.ndim == 0 else p


def subsystem_kill_prob(efield, model: SubsystemModel):
    if np.any(np.asarray(efield) < 0):
        raise DomainError("efield must be >= 0")
    return sigmoid(efield, model.e50, model.sigma_e)


def system_kill_prob_params(efield, e50s, sigmas):
    """``1 - prod(1 - p_i)`` over the last axis of ``e50s``/``sigmas``.

    ``efield`` broadcasts against the leading axes, so per-trial parameter
    matrices of shape ``(n, k)`` pair with an ``(n,)`` field vector.
    """
    e = np.asarray(efield, dtype=float)[..., None]
    p = np.asarray(sigmoid(e, np.asarray(e50s, dtype=float), np.asarray(sigmas, dtype=float)))
    if p.shape[-1] == 1:
        # a lone sigmoid is returned as is; 1 - (1 - p) would cost a few ulps
        out = p[..., 0]
    else:
        out = 1.0 - np.prod(1.0 - p, axis=-1)
    return float(out) if out.ndim == 0 else out


def system_kill_prob(efield, drone: DroneModel):
    """Probability that at least one subsystem fails (independent failures)."""
    if np.any(np.asarray(efield) < 0):
        raise DomainError("efield must be >= 0")
    return system_kill_prob_params(efield, drone.e50s, drone.sigmas)


@dataclass(frozen=True)
class KillRange:
    """Outcome of a kill-range inversion.

    ``status`` is ``"ok"``, ``"below_envelope"`` (target not reached even at the
    far-field boundary) or ``"above_envelope"`` (target still exceeded at the
    outer search limit). ``range`` is NaN unless the status is ``"ok"``.
    """

    range: float
    status: str
    target_prob: float
    residual: float = math.nan

    @property
    def reachable(self) -> bool:
        return self.status == "ok"


def kill_range(
    config: SystemConfig,
    drone: DroneModel,
    target_prob: float,
    *,
    include_line_loss: bool,
    peak: bool = False,
    r_max: float = MAX_SEARCH_RANGE,
    rtol: float = 1e-12,
) -> KillRange:
    """Range at which the system kill probability falls to ``target_prob``.

    Bisection between the far-field distance and ``r_max``; kill probability
    is strictly decreasing in range so the crossing is unique. Iteration stops
    once the bracket is narrower than ``rtol`` relative (well under 1 mm).
    """
    if not 0.0 < target_prob < 1.0:
        raise DomainError(f"target_prob must lie in (0, 1), got {target_prob!r}")

    def excess(r: float) -> float:
        e = field_at(config, r, include_line_loss=include_line_loss, peak=peak)
        return system_kill_prob(e, drone) - target_prob

    lo = config.far_field_distance
    hi = r_max
    if excess(lo) < 0:
        return KillRange(math.nan, "below_envelope", target_prob)
    if excess(hi) >= 0:
        return KillRange(math.nan, "above_envelope", target_prob)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if excess(mid) >= 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rtol * hi:
            break
    r = 0.5 * (lo + hi)
    return KillRange(r, "ok", target_prob, residual=excess(r))


def susceptibility_order(drone: DroneModel, efield: float) -> Sequence[str]:
    """Subsystem names from most to least likely to fail at ``efield``."""
    probs = [(subsystem_kill_prob(efield, s), s.name) for s in drone.subsystems]
    return [name for _, name in sorted(probs, key=lambda t: -t[0])]
