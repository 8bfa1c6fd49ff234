"""Monte Carlo kill-probability campaigns.

Each trial draws its parameters from its own counter-based stream, so a
campaign is a pure function of ``(spec, config, range, n_trials, seed,
variant)`` regardless of how trials are split across workers.

Draw order within a trial (Philox ``slot`` numbers; each slot is one
block = two uniforms, ``attempt`` increments on truncation rejects):

    0 transmit power     normal (Box-Muller)
    1 dish diameter      normal
    2 aperture eff.      uniform
    3 pointing error     Rayleigh
    4 polarization angle uniform
    5 wire length        uniform
    6 kill decision      uniform (Bernoulli against p_kill)
    7 + 2i               E50 of subsystem i, normal
    8 + 2i               sigma_E of subsystem i, normal, floored

Variants:

``listing2``
    one logistic with sampled E50 ~ N(300, 45) and sigma ~ N(60, 9);
    wire length is drawn and ignored.
``full``
    the five-subsystem any-failure model with every E50/sigma perturbed by
    15 %; the incident field is weighted by the wire's resonance factor
    normalised to its mean over the wire-length distribution (a modelling
    extension, so the mean coupling weight is 1).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np

from . import coupling, damage
from .constants import C, ETA0, F0
from .physics import (
    BEAMWIDTH_CONSTANT,
    POINTING_LOSS_COEFF,
    POLARIZATION_FLOOR,
    DomainError,
    SystemConfig,
)
from .rng import TrialStream, uniform_pair
from .stats import clopper_pearson

Variant = Literal["listing2", "full"]
VARIANTS = ("listing2", "full")
VARIANT_LABELS = {"listing2": "single-sigmoid", "full": "full-drone"}

MAX_REJECTIONS = 1000
CHUNK_SIZE = 4096

SLOT_POWER, SLOT_DISH, SLOT_APERTURE, SLOT_POINTING, SLOT_POL, SLOT_WIRE, SLOT_KILL = range(7)
SLOT_SUBSYSTEM_BASE = 7


@dataclass(frozen=True)
class McDistributionSpec:
    """Sampling distributions for one campaign.

    Normals are ``(mean, sigma)``, uniforms ``[low, high]``; the pointing error
    is Rayleigh with scale ``pointing_sigma`` degrees. Normals are truncated by
    rejection to ``*_bounds`` (exclusive low, inclusive high); sampled sigma_E
    values are floored at ``sigma_e_floor``.
    """

    power_mean: float = 25e3
    power_sigma: float = 1250.0
    power_bounds: tuple[float, float] = (0.0, math.inf)
    dish_mean: float = 0.60
    dish_sigma: float = 0.005
    dish_bounds: tuple[float, float] = (0.0, math.inf)
    aperture_eff_low: float = 0.50
    aperture_eff_high: float = 0.60
    pointing_sigma: float = 1.0
    pol_angle_low: float = 0.0
    pol_angle_high: float = math.pi
    wire_length_low: float = 0.05
    wire_length_high: float = 0.25
    e50_relative_sigma: float = 0.15
    sigma_e_relative_sigma: float = 0.15
    sigma_e_floor: float = 10.0
    single_e50: float = 300.0
    single_sigma_e: float = 60.0
    beamwidth_mode: Literal["fixed", "sampled"] = "fixed"
    fixed_beamwidth: float = 14.3
    quality_factor: float = 10.0
    resonance_width: float = 0.02

    def __post_init__(self) -> None:
        for name in (
            "power_sigma",
            "dish_sigma",
            "pointing_sigma",
            "e50_relative_sigma",
            "sigma_e_relative_sigma",
        ):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0")
        for low, high in (
            ("aperture_eff_low", "aperture_eff_high"),
            ("pol_angle_low", "pol_angle_high"),
            ("wire_length_low", "wire_length_high"),
        ):
            if getattr(self, low) > getattr(self, high):
                raise DomainError(f"{low} must not exceed {high}")
        for name in ("power_bounds", "dish_bounds"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise DomainError(f"{name} must be ordered (low < high)")
        if not (0.0 < self.aperture_eff_low and self.aperture_eff_high <= 1.0):
            raise DomainError("aperture efficiency bounds must lie in (0, 1]")
        if not self.wire_length_low > 0:
            raise DomainError("wire_length_low must be > 0")
        if not self.sigma_e_floor > 0:
            raise DomainError("sigma_e_floor must be > 0")
        if not self.single_e50 > 0 or not self.single_sigma_e > 0:
            raise DomainError("single_e50 and single_sigma_e must be > 0")
        if self.beamwidth_mode not in ("fixed", "sampled"):
            raise DomainError("beamwidth_mode must be 'fixed' or 'sampled'")
        if not self.fixed_beamwidth > 0:
            raise DomainError("fixed_beamwidth must be > 0")
        if self.quality_factor < 1 or not self.resonance_width > 0:
            raise DomainError("quality_factor >= 1 and resonance_width > 0 required")


@dataclass
class TrialInputs:
    """Sampled parameters for a batch of trials (struct of arrays).

    ``e50`` and ``sigma_e`` have shape ``(n, k)``: one column per damage
    sigmoid (``k = 1`` for the single-sigmoid variant).
    """

    trial_index: np.ndarray
    power: np.ndarray
    dish: np.ndarray
    aperture_eff: np.ndarray
    pointing_error: np.ndarray
    pol_angle: np.ndarray
    wire_length: np.ndarray
    kill_uniform: np.ndarray
    e50: np.ndarray
    sigma_e: np.ndarray

    def __len__(self) -> int:
        return len(self.trial_index)


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    power: float
    dish: float
    aperture_eff: float
    pointing_error: float
    pol_angle: float
    wire_length: float
    e50: tuple[float, ...]
    sigma_e: tuple[float, ...]
    efield: float
    p_kill: float
    kill: bool


@dataclass(frozen=True)
class McSummary:
    n_trials: int
    n_kills: int
    kill_prob: float
    ci_low: float
    ci_high: float
    efield_mean: float
    efield_std: float
    efield_sum: float
    seed: int
    model_variant: str
    range: float
    include_line_loss: bool

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class _BatchResult:
    efield: np.ndarray
    p_kill: np.ndarray
    kill: np.ndarray


def _damage_nominals(variant: str, spec: McDistributionSpec, drone: damage.DroneModel | None):
    if variant == "listing2":
        return np.array([spec.single_e50]), np.array([spec.single_sigma_e])
    if variant == "full":
        drone = drone or damage.default_drone()
        return drone.e50s, drone.sigmas
    raise DomainError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def _normal(seed, idx, slot, mean, sigma, attempt):
    u1, u2 = uniform_pair(seed, idx, slot, attempt)
    return mean + sigma * np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * math.pi * u2)


def _truncated_normal(seed, idx, slot, mean, sigma, bounds):
    """Normal draws redrawn (next ``attempt``) until inside ``(low, high]``."""
    lo, hi = bounds
    mean = np.broadcast_to(np.asarray(mean, dtype=float), idx.shape)
    out = _normal(seed, idx, slot, mean, sigma, 0)
    bad = ~((out > lo) & (out <= hi))
    attempt = 0
    while bad.any():
        attempt += 1
        if attempt > MAX_REJECTIONS:
            raise DomainError(
                f"slot {slot}: more than {MAX_REJECTIONS} consecutive truncation rejections; "
                "check the distribution bounds"
            )
        out[bad] = _normal(seed, idx[bad], slot, mean[bad], sigma, attempt)
        bad = ~((out > lo) & (out <= hi))
    return out


def _uniform(seed, idx, slot, low, high):
    u, _ = uniform_pair(seed, idx, slot)
    return low + (high - low) * u


def sample_trials(
    seed: int,
    trial_indices,
    spec: McDistributionSpec,
    variant: Variant = "listing2",
    drone: damage.DroneModel | None = None,
) -> TrialInputs:
    """Draw the inputs for the given trial indices (vectorised)."""
    idx = np.atleast_1d(np.asarray(trial_indices, dtype=np.uint64))
    e50_nom, sigma_nom = _damage_nominals(variant, spec, drone)

    power = _truncated_normal(seed, idx, SLOT_POWER, spec.power_mean, spec.power_sigma, spec.power_bounds)
    dish = _truncated_normal(seed, idx, SLOT_DISH, spec.dish_mean, spec.dish_sigma, spec.dish_bounds)
    aperture = _uniform(seed, idx, SLOT_APERTURE, spec.aperture_eff_low, spec.aperture_eff_high)
    u, _ = uniform_pair(seed, idx, SLOT_POINTING)
    pointing = spec.pointing_sigma * np.sqrt(-2.0 * np.log(u))
    pol = _uniform(seed, idx, SLOT_POL, spec.pol_angle_low, spec.pol_angle_high)
    wire = _uniform(seed, idx, SLOT_WIRE, spec.wire_length_low, spec.wire_length_high)
    kill_u, _ = uniform_pair(seed, idx, SLOT_KILL)

    k = len(e50_nom)
    e50 = np.empty((len(idx), k))
    sig = np.empty((len(idx), k))
    for i in range(k):
        base = SLOT_SUBSYSTEM_BASE + 2 * i
        e50[:, i] = _truncated_normal(
            seed, idx, base, e50_nom[i], spec.e50_relative_sigma * e50_nom[i], (0.0, math.inf)
        )
        sig[:, i] = np.maximum(
            _normal(seed, idx, base + 1, sigma_nom[i], spec.sigma_e_relative_sigma * sigma_nom[i], 0),
            spec.sigma_e_floor,
        )
    return TrialInputs(idx, power, dish, aperture, pointing, pol, wire, kill_u, e50, sig)


def sample_trial(
    stream: TrialStream,
    spec: McDistributionSpec,
    variant: Variant = "listing2",
    drone: damage.DroneModel | None = None,
) -> TrialInputs:
    """Inputs for the single trial owned by ``stream`` (arrays of length 1)."""
    return sample_trials(stream.seed, [stream.trial_index], spec, variant, drone)


def _evaluate(
    inputs: TrialInputs,
    range: float,
    variant: str,
    spec: McDistributionSpec,
    config: SystemConfig,
    include_line_loss: bool,
) -> _BatchResult:
    wavelength = C / config.frequency
    gain = inputs.aperture_eff * (math.pi * inputs.dish / wavelength) ** 2
    if spec.beamwidth_mode == "fixed":
        beamwidth = spec.fixed_beamwidth
    else:
        beamwidth = BEAMWIDTH_CONSTANT * wavelength / inputs.dish
    theta_norm = inputs.pointing_error / (beamwidth / 2.0)
    g_point = np.exp(-POINTING_LOSS_COEFF * theta_norm**2)
    pol_loss = np.maximum(np.cos(inputs.pol_angle) ** 2, POLARIZATION_FLOOR)
    eta_line = config.line_efficiency if include_line_loss else 1.0
    eirp = inputs.power * eta_line * gain * g_point * pol_loss
    e = np.sqrt(np.maximum(eirp / (4.0 * math.pi * range**2), 0.0) * ETA0)

    if variant == "listing2":
        p_kill = damage.sigmoid(e, inputs.e50[:, 0], inputs.sigma_e[:, 0])
    else:
        weight = coupling.resonance_factor(
            inputs.wire_length, wavelength, spec.quality_factor, spec.resonance_width
        ) / coupling.mean_resonance_factor(
            spec.wire_length_low, spec.wire_length_high, wavelength, spec.quality_factor, spec.resonance_width
        )
        p_kill = damage.system_kill_prob_params(e * weight, inputs.e50, inputs.sigma_e)
    p_kill = np.atleast_1d(p_kill)
    return _BatchResult(e, p_kill, inputs.kill_uniform < p_kill)


def run_trial(
    inputs: TrialInputs,
    range: float,
    variant: Variant = "listing2",
    spec: McDistributionSpec | None = None,
    config: SystemConfig | None = None,
    include_line_loss: bool = True,
) -> TrialRecord:
    """Evaluate one sampled trial (``inputs`` of length 1) at ``range``."""
    if not range > 0:
        raise DomainError("range must be > 0")
    if len(inputs) != 1:
        raise ValueError("run_trial takes a single trial; use run_campaign for batches")
    res = _evaluate(inputs, range, variant, spec or McDistributionSpec(), config or SystemConfig(), include_line_loss)
    return TrialRecord(
        trial_index=int(inputs.trial_index[0]),
        power=float(inputs.power[0]),
        dish=float(inputs.dish[0]),
        aperture_eff=float(inputs.aperture_eff[0]),
        pointing_error=float(inputs.pointing_error[0]),
        pol_angle=float(inputs.pol_angle[0]),
        wire_length=float(inputs.wire_length[0]),
        e50=tuple(float(x) for x in inputs.e50[0]),
        sigma_e=tuple(float(x) for x in inputs.sigma_e[0]),
        efield=float(res.efield[0]),
        p_kill=float(res.p_kill[0]),
        kill=bool(res.kill[0]),
    )


def _run_chunk(seed, indices, spec, variant, drone, range, config, include_line_loss) -> _BatchResult:
    inputs = sample_trials(seed, indices, spec, variant, drone)
    return _evaluate(inputs, range, variant, spec, config, include_line_loss)


def run_campaign_trials(
    spec: McDistributionSpec,
    range: float,
    n_trials: int,
    seed: int = 42,
    variant: Variant = "listing2",
    *,
    config: SystemConfig | None = None,
    drone: damage.DroneModel | None = None,
    include_line_loss: bool = True,
    workers: int = 1,
    chunk_size: int = CHUNK_SIZE,
) -> _BatchResult:
    """Per-trial fields, kill probabilities and outcomes in trial order."""
    if int(n_trials) != n_trials or n_trials < 1:
        raise DomainError(f"n_trials must be a positive integer, got {n_trials!r}")
    if not range > 0:
        raise DomainError("range must be > 0")
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    config = config or SystemConfig(frequency=F0)
    chunks = [np.arange(s, min(s + chunk_size, n_trials), dtype=np.uint64) for s in np.arange(0, n_trials, chunk_size)]
    args = (spec, variant, drone, range, config, include_line_loss)
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _run_chunk(seed, c, *args), chunks))
    else:
        parts = [_run_chunk(seed, c, *args) for c in chunks]
    return _BatchResult(
        np.concatenate([p.efield for p in parts]),
        np.concatenate([p.p_kill for p in parts]),
        np.concatenate([p.kill for p in parts]),
    )


def run_campaign(
    spec: McDistributionSpec,
    range: float,
    n_trials: int = 10_000,
    seed: int = 42,
    variant: Variant = "listing2",
    *,
    config: SystemConfig | None = None,
    drone: damage.DroneModel | None = None,
    include_line_loss: bool = True,
    workers: int = 1,
    confidence: float = 0.95,
) -> McSummary:
    """Run ``n_trials`` independent trials at ``range`` and summarise them.

    Field moments use exactly rounded sums (``math.fsum``) so the summary is
    bit-identical for any ``workers``.
    """
    res = run_campaign_trials(
        spec, range, n_trials, seed, variant,
        config=config, drone=drone, include_line_loss=include_line_loss, workers=workers,
    )
    n = int(n_trials)
    kills = int(np.count_nonzero(res.kill))
    e_sum = math.fsum(res.efield.tolist())
    mean = e_sum / n
    var = math.fsum(((res.efield - mean) ** 2).tolist()) / (n - 1) if n > 1 else 0.0
    low, high = clopper_pearson(kills, n, confidence)
    return McSummary(
        n_trials=n,
        n_kills=kills,
        kill_prob=kills / n,
        ci_low=low,
        ci_high=high,
        efield_mean=mean,
        efield_std=math.sqrt(var),
        efield_sum=e_sum,
        seed=int(seed),
        model_variant=variant,
        range=float(range),
        include_line_loss=include_line_loss,
    )
