"""Composite studies built on the physics, damage and coupling kernels.

Each function returns plain Python data (lists of dicts or small dataclasses)
that the CLI turns into result tables.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import damage
from .physics import (
    DomainError,
    SystemConfig,
    antenna_gain,
    beam_footprint,
    field_at,
    half_power_beamwidth,
    power_density,
    to_dbi,
)

# Nominal single-logistic model (gate-oxide row) used alongside the any-failure model.
SINGLE_SIGMOID = damage.SubsystemModel("single_sigmoid", 300.0, 60.0)

LIQUID_COOLING_THRESHOLD = 5e3  # W of average heat
J_PER_CM2_TO_J_PER_M2 = 1e4


@dataclass(frozen=True)
class SafetyLimits:
    occupational: float = 50.0
    general_public: float = 10.0

    def __post_init__(self) -> None:
        if not self.occupational > self.general_public > 0:
            raise DomainError("need occupational > general_public > 0")


@dataclass(frozen=True)
class Stage:
    name: str
    efficiency: float


def _default_stages() -> tuple[Stage, ...]:
    return (
        Stage("psu", 0.90),
        Stage("magnetron", 0.70),
        Stage("waveguide", 0.98),
        Stage("feed", 0.97),
        Stage("radome", 1.0),
    )


@dataclass(frozen=True)
class EfficiencyChain:
    """Wall-plug to radiated-RF conversion stages, in power-flow order."""

    stages: tuple[Stage, ...] = field(default_factory=_default_stages)
    rf_source: str = "magnetron"

    def __post_init__(self) -> None:
        for s in self.stages:
            if not 0.0 < s.efficiency <= 1.0:
                raise DomainError(f"stage {s.name!r}: efficiency must lie in (0, 1]")
        if self.rf_source not in [s.name for s in self.stages]:
            raise DomainError(f"rf_source {self.rf_source!r} is not a stage")

    @classmethod
    def from_config(cls, config: SystemConfig, psu: float = 0.90, magnetron: float = 0.70) -> "EfficiencyChain":
        return cls(
            (
                Stage("psu", psu),
                Stage("magnetron", magnetron),
                Stage("waveguide", config.line_efficiency_waveguide),
                Stage("feed", config.line_efficiency_feed),
                Stage("radome", config.line_efficiency_radome),
            )
        )

    @property
    def overall(self) -> float:
        return math.prod(s.efficiency for s in self.stages)

    def source_index(self) -> int:
        return [s.name for s in self.stages].index(self.rf_source)


@dataclass(frozen=True)
class DwellParams:
    fluence_threshold: float = 0.1  # J/cm^2

    def __post_init__(self) -> None:
        if not self.fluence_threshold > 0:
            raise DomainError("fluence_threshold must be > 0")


@dataclass
class TradespaceMap:
    """Kill range over a (power, diameter) grid.

    ``r_grid[i, j]`` belongs to ``power_axis[i]`` and ``diameter_axis[j]``;
    cells where the target is out of envelope hold NaN and their reason in
    ``status_grid``.
    """

    power_axis: list[float]
    diameter_axis: list[float]
    r_grid: np.ndarray
    status_grid: np.ndarray
    target_prob: float

    @property
    def reachable(self) -> np.ndarray:
        return self.status_grid == "ok"


def kill_curve(
    config: SystemConfig,
    drone: damage.DroneModel,
    range_grid,
    *,
    include_line_loss: bool,
) -> list[dict]:
    """Kill probability versus range under both damage models.

    Damage is driven by the pulse peak field; for CW (duty 1) peak equals average.
    """
    ranges = np.asarray(range_grid, dtype=float)
    e = np.atleast_1d(field_at(config, ranges, include_line_loss=include_line_loss, peak=True))
    p_sys = np.atleast_1d(damage.system_kill_prob(e, drone))
    p_single = np.atleast_1d(damage.subsystem_kill_prob(e, SINGLE_SIGMOID))
    ff = config.far_field_distance
    return [
        {
            "range": float(r),
            "efield": float(ei),
            "system_kill": float(ps),
            "single_sigmoid_kill": float(pk),
            "far_field": bool(r >= ff),
        }
        for r, ei, ps, pk in zip(np.atleast_1d(ranges), e, p_sys, p_single)
    ]


def pulsed_cw_compare(
    average_power: float,
    duty_cycles,
    config: SystemConfig,
    range_grid,
    drone: damage.DroneModel | None = None,
    *,
    include_line_loss: bool = False,
) -> list[dict]:
    """Peak field and kill probability per duty cycle at fixed average power."""
    drone = drone or damage.default_drone()
    rows = []
    for d in duty_cycles:
        cfg = config.with_(transmit_power=average_power, duty_cycle=d)
        for row in kill_curve(cfg, drone, range_grid, include_line_loss=include_line_loss):
            rows.append({"duty_cycle": float(d), "peak_power": cfg.peak_power, **row})
    return rows


def tradespace_map(
    power_axis,
    diameter_axis,
    drone: damage.DroneModel,
    target_prob: float = 0.9,
    *,
    base: SystemConfig | None = None,
    include_line_loss: bool = False,
    workers: int = 1,
) -> TradespaceMap:
    """Kill range at ``target_prob`` for every (peak power, dish diameter) cell."""
    base = base or SystemConfig()
    powers = [float(p) for p in power_axis]
    diameters = [float(d) for d in diameter_axis]
    if not powers or not diameters or min(powers) <= 0 or min(diameters) <= 0:
        raise DomainError("tradespace axes must be non-empty and positive")

    cells = [(p, d) for p in powers for d in diameters]

    def solve(cell):
        p, d = cell
        cfg = base.with_(transmit_power=p, dish_diameter=d, duty_cycle=1.0)
        return damage.kill_range(cfg, drone, target_prob, include_line_loss=include_line_loss)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve, cells))
    else:
        results = [solve(c) for c in cells]
    shape = (len(powers), len(diameters))
    r = np.array([k.range for k in results]).reshape(shape)
    status = np.array([k.status for k in results], dtype=object).reshape(shape)
    return TradespaceMap(powers, diameters, r, status, target_prob)


def safety_distance(
    config: SystemConfig,
    limit: float,
    *,
    include_line_loss: bool = False,
) -> float:
    """Boresight distance where the time-averaged power density equals ``limit``.

    Uses the average power, so pulsed operation is handled through
    ``config.transmit_power`` alone.
    """
    if not limit > 0:
        raise DomainError("exposure limit must be > 0")
    eta = config.line_efficiency if include_line_loss else 1.0
    return math.sqrt(config.transmit_power * eta * config.gain / (4.0 * math.pi * limit))


def thermal_budget(rf_power: float, chain: EfficiencyChain | None = None, duty_cycle: float = 1.0) -> dict:
    """Heat dissipated in each stage when the RF source emits ``rf_power`` (peak).

    Stages upstream of the source are back-propagated from its input power,
    downstream stages lose their share of the forward power. Average heat is
    the CW figure scaled by ``duty_cycle``.
    """
    if not rf_power > 0:
        raise DomainError("rf_power must be > 0")
    if not 0.0 <= duty_cycle <= 1.0:
        raise DomainError("duty_cycle must lie in [0, 1]")
    chain = chain or EfficiencyChain()
    src = chain.source_index()
    heat: dict[str, float] = {}

    p_out = rf_power
    for s in reversed(chain.stages[: src + 1]):
        p_in = p_out / s.efficiency
        heat[s.name] = p_in - p_out
        p_out = p_in
    wall = p_out
    p_in = rf_power
    for s in chain.stages[src + 1 :]:
        p_out = p_in * s.efficiency
        heat[s.name] = p_in - p_out
        p_in = p_out

    ordered = {s.name: heat[s.name] for s in chain.stages}
    total_cw = sum(ordered.values())
    avg = total_cw * duty_cycle
    return {
        "stage_heat_cw": ordered,
        "total_heat_cw": total_cw,
        "wall_power_cw": wall,
        "radiated_power_cw": p_in,
        "duty_cycle": duty_cycle,
        "average_heat": avg,
        "cooling": "liquid" if avg > LIQUID_COOLING_THRESHOLD else "forced-air",
        "liquid_cooling_duty_threshold": min(1.0, LIQUID_COOLING_THRESHOLD / total_cw),
    }


def efficiency_chain_report(wall_power: float, chain: EfficiencyChain | None = None) -> list[dict]:
    """Power after each stage and cumulative efficiency from the wall plug."""
    if not wall_power > 0:
        raise DomainError("wall_power must be > 0")
    chain = chain or EfficiencyChain()
    rows = [{"stage": "wall", "efficiency": 1.0, "power": wall_power, "cumulative": 1.0}]
    p = wall_power
    cumulative = 1.0
    for s in chain.stages:
        p *= s.efficiency
        cumulative *= s.efficiency
        rows.append({"stage": s.name, "efficiency": s.efficiency, "power": p, "cumulative": cumulative})
    return rows


def dwell_time(
    config: SystemConfig,
    range,
    *,
    include_line_loss: bool,
    params: DwellParams | None = None,
):
    """Seconds of CW illumination needed to reach the fluence threshold."""
    params = params or DwellParams()
    s = power_density(config, range, include_line_loss=include_line_loss)
    return params.fluence_threshold * J_PER_CM2_TO_J_PER_M2 / s


def energy_accumulation(power_density, time):
    """Fluence in J/cm^2 after ``time`` seconds at ``power_density`` W/m^2."""
    return np.asarray(power_density) * np.asarray(time) / J_PER_CM2_TO_J_PER_M2


# Mechanical data per dish diameter (cm): weight range kg, wind load N.
DISH_MECHANICAL = {
    40: ((2.0, 3.0), 40.0),
    60: ((4.0, 6.0), 90.0),
    80: ((8.0, 12.0), 160.0),
    100: ((12.0, 18.0), 250.0),
}


def dish_trade_table(diameters, config: SystemConfig, footprint_range: float = 30.0) -> list[dict]:
    rows = []
    lam = config.wavelength
    for d in diameters:
        if not d > 0:
            raise DomainError("dish diameters must be > 0")
        bw = half_power_beamwidth(d, lam)
        mech = DISH_MECHANICAL.get(round(d * 100)) if math.isclose(d * 100, round(d * 100)) else None
        (w_lo, w_hi), wind = mech if mech else ((math.nan, math.nan), math.nan)
        rows.append(
            {
                "diameter": float(d),
                "gain_dbi": to_dbi(antenna_gain(d, lam, config.aperture_efficiency)),
                "beamwidth": bw,
                "footprint": beam_footprint(footprint_range, bw),
                "weight_min": w_lo,
                "weight_max": w_hi,
                "wind_load": wind,
            }
        )
    return rows


def field_threshold_crossing(config: SystemConfig, threshold: float, *, include_line_loss: bool) -> float:
    """Range at which the boresight field drops to ``threshold`` V/m (closed form)."""
    e1 = field_at(config, 1.0, include_line_loss=include_line_loss)
    return e1 / threshold
