"""Subcommand implementations: scenario + options -> result tables."""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from . import __version__, analyses, coupling, damage, montecarlo, waveguide
from .physics import DomainError, SystemConfig, beam_footprint, field_at, half_power_beamwidth, power_density
from .scenario import Scenario
from .tables import ResultTable

COMMANDS = (
    "efield",
    "killcurve",
    "montecarlo",
    "tradespace",
    "waveguide",
    "coupling",
    "safety",
    "thermal",
    "dwell",
    "pulsed",
    "dish",
)


@dataclass(frozen=True)
class RunOptions:
    """Command-line overrides; ``None`` means scenario value or command default."""

    range: tuple[float, float] | None = None
    step: float | None = None
    duty: float | None = None
    line_loss: bool | None = None
    variant: str | None = None
    seed: int | None = None
    trials: int | None = None
    workers: int = 1
    target: float = 0.9
    timestamp: bool = True


def range_grid(opts: RunOptions, default: tuple[float, float, float]) -> np.ndarray:
    lo, hi = opts.range if opts.range is not None else default[:2]
    step = opts.step if opts.step is not None else default[2]
    if not lo > 0 or hi < lo:
        raise DomainError(f"range must satisfy 0 < start <= stop, got {lo}..{hi}")
    if not step > 0:
        raise DomainError("step must be > 0")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(count), 12)


def _config(sc: Scenario, opts: RunOptions) -> SystemConfig:
    cfg = sc.system
    if opts.duty is not None:
        cfg = cfg.with_(duty_cycle=opts.duty)
    return cfg


def _line_loss(sc: Scenario, opts: RunOptions, default: bool) -> bool:
    return opts.line_loss if opts.line_loss is not None else sc.line_loss(default)


def _meta(sc: Scenario, opts: RunOptions, **extra) -> dict:
    meta = {
        "scenario_hash": sc.digest(),
        "seed": opts.seed if opts.seed is not None else sc.seed,
        "version": __version__,
    }
    if opts.timestamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    meta.update(extra)
    return meta


def cmd_efield(sc: Scenario, opts: RunOptions) -> list[ResultTable]:
    cfg = _config(sc, opts)
    ll = _line_loss(sc, opts, False)
    ranges = range_grid(opts, (5.0, 100.0, 1.0))
    s = power_density(cfg, ranges, include_line_loss=ll)
    e = field_at(cfg, ranges, include_line_loss=ll)
    e_pk = field_at(cfg, ranges, include_line_loss=ll, peak=True)
    ff = cfg.far_field_distance
    records = [
        {"r": r, "s": si, "e": ei, "ep": pi, "ff": r >= ff}
        for r, si, ei, pi in zip(ranges, np.atleast_1d(s), np.atleast_1d(e), np.atleast_1d(e_pk))
    ]
    spec = [
        ("range_m", "m", "r"),
        ("power_density_wpm2", "W/m^2", "s"),
        ("efield_vpm", "V/m", "e"),
        ("peak_efield_vpm", "V/m", "ep"),
        ("far_field", "bool", "ff"),
    ]
    meta = _meta(
        sc, opts, include_line_loss=ll, transmit_power_w=cfg.transmit_power,
        gain_dbi=round(10 * math.log10(cfg.gain), 6), far_field_distance_m=ff,
    )
    return [ResultTable.from_records("efield", spec, records, meta)]


def cmd_killcurve(sc: Scenario, opts: RunOptions) -> list[ResultTable]:
    cfg = _config(sc, opts)
    ll = _line_loss(sc, opts, False)
    ranges = range_grid(opts, (5.0, 100.0, 1.0))
    rows = analyses.kill_curve(cfg, sc.drone, ranges, include_line_loss=ll)
    spec = [
        ("range_m", "m", "range"),
        ("peak_efield_vpm", "V/m", "efield"),
        ("system_kill", "1", "system_kill"),
        ("single_sigmoid_kill", "1", "single_sigmoid_kill"),
        ("far_field", "bool", "far_field"),
    ]
    meta = _meta(sc, opts, include_line_loss=ll, peak_power_w=cfg.peak_power)
    curve = ResultTable.from_records("killcurve", spec, rows, meta)
    kr_rows = []
    for target in sorted({0.5, opts.target}):
        k = damage.kill_range(cfg, sc.drone, target, include_line_loss=ll, peak=True)
        kr_rows.append({"t": target, "r": k.range, "status": k.status})
    kr = ResultTable.from_records(
        "kill_range", [("target_prob", "1", "t"), ("range_m", "m", "r"), ("status", "-", "status")], kr_rows, meta
    )
    return [curve, kr]


def montecarlo_table(sc: Scenario, opts: RunOptions, ranges, name: str = "montecarlo") -> ResultTable:
    """Campaign summary per range, alongside both deterministic models."""
    cfg = _config(sc, opts)
    ll = _line_loss(sc, opts, True)
    variant = opts.variant or sc.variant
    seed = opts.seed if opts.seed is not None else sc.seed
    n = opts.trials if opts.trials is not None else sc.n_trials
    rows = []
    for r in ranges:
        summary = montecarlo.run_campaign(
            sc.mc, float(r), n, seed, variant,
            config=cfg, drone=sc.drone, include_line_loss=ll, workers=opts.workers,
        )
        e_det = field_at(cfg, float(r), include_line_loss=ll)
        rows.append(
            {
                "range": float(r),
                "n": summary.n_trials,
                "k": summary.n_kills,
                "mc": 100 * summary.kill_prob,
                "lo": 100 * summary.ci_low,
                "hi": 100 * summary.ci_high,
                "det": 100 * damage.system_kill_prob(e_det, sc.drone),
                "det1": 100 * damage.subsystem_kill_prob(e_det, analyses.SINGLE_SIGMOID),
                "emean": summary.efield_mean,
                "estd": summary.efield_std,
            }
        )
    spec = [
        ("range_m", "m", "range"),
        ("n_trials", "count", "n"),
        ("n_kills", "count", "k"),
        ("mc_kill_pct", "%", "mc"),
        ("ci_low_pct", "%", "lo"),
        ("ci_high_pct", "%", "hi"),
        ("det_kill_pct", "%", "det"),
        ("det_single_sigmoid_pct", "%", "det1"),
        ("efield_mean_vpm", "V/m", "emean"),
        ("efield_std_vpm", "V/m", "estd"),
    ]
    meta = _meta(
        sc, opts, include_line_loss=ll, variant=variant,
        model=montecarlo.VARIANT_LABELS[variant], n_trials=n, confidence=0.95,
    )
    return ResultTable.from_records(name, spec, rows, meta)


def efield_histogram(sc: Scenario, opts: RunOptions, range_m: float, bins: int = 40) -> ResultTable:
    cfg = _config(sc, opts)
    ll = _line_loss(sc, opts, True)
    variant = opts.variant or sc.variant
    seed = opts.seed if opts.seed is not None else sc.seed
    n = opts.trials if opts.trials is not None else sc.n_trials
    res = montecarlo.run_campaign_trials(
        sc.mc, range_m, n, seed, variant, config=cfg, drone=sc.drone, include_line_loss=ll
    )
    counts, edges = np.histogram(res.efield, bins=bins)
    rows = [{"lo": edges[i], "hi": edges[i + 1], "c": counts[i]} for i in range(bins)]
    spec = [("bin_low_vpm", "V/m", "lo"), ("bin_high_vpm", "V/m", "hi"), ("count", "count", "c")]
    return ResultTable.from_records(
        "efield_histogram", spec, rows, _meta(sc, opts, include_line_loss=ll, range_m=range_m, variant=variant)
    )


def cmd_montecarlo(sc: Scenario, opts: RunOptions) -> list[ResultTable]:
    return [montecarlo_table(sc, opts, range_grid(opts, (20.0, 40.0, 5.0)))]


def _log_axis(lo: float, hi: float, n: int) -> list[float]:
    return [float(x) for x in np.round(np.geomspace(lo, hi, n), 9)]


def cmd_tradespace(sc: Scenario, opts: RunOptions) -> list[ResultTable]:
    ll = _line_loss(sc, opts, False)
    powers = _log_axis(5e3, 500e3, 12)
    diameters = [float(x) for x in np.round(np.linspace(0.3, 1.2, 10), 9)]
    tmap = analyses.tradespace_map(
        powers, diameters, sc.drone, opts.target, base=sc.system, include_line_loss=ll, workers=opts.workers
    )
    rows = []
    for i, p in enumerate(tmap.power_axis):
        for j, d in enumerate(tmap.diameter_axis):
            rows.append({"p": p, "d": d, "r": float(tmap.r_grid[i, j]), "s": tmap.status_grid[i, j]})
    spec = [("peak_power_w", "W", "p"), ("diameter_m", "m", "d"), ("kill_range_m", "m", "r"), ("status", "-", "s")]
    meta = _meta(sc, opts, include_line_loss=ll, target_prob=opts.target)
    return [ResultTable.from_records("tradespace", spec, rows, meta)]


def cmd_waveguide(sc: Scenario, opts: RunOptions) -> list[ResultTable]:
    spec = waveguide.WaveguideSpec()
    f_op = sc.system.frequency
    modes = waveguide.mode_chart(spec, 6e9)
    mode_rows = [
        {"mode": m.label, "fam": m.mode_family, "m": m.m, "n": m.n, "fc": m.cutoff, "prop": m.cutoff < f_op}
        for m in modes
    ]
    mode_spec = [
        ("mode", "-", "mode"),
        ("family", "-", "fam"),
        ("m", "1", "m"),
        ("n", "1", "n"),
        ("cutoff_hz", "Hz", "fc"),
        ("propagates_at_operating_freq", "bool", "prop"),
    ]
    att_op = waveguide.te10_attenuation(spec, f_op)
    meta = _meta(
        sc, opts, operating_frequency_hz=f_op, te10_attenuation_db_per_m=att_op,
        loss_fraction_1m=waveguide.run_loss_fraction(att_op, 1.0),
    )
    fc10 = waveguide.cutoff_frequency(spec, 1, 0)
    freqs = np.linspace(1.02 * fc10, 2 * fc10, 100)
    att = waveguide.te10_attenuation(spec, freqs)
    att_rows = [{"f": f, "a": a} for f, a in zip(freqs, att)]
    return [
        ResultTable.from_records("waveguide_modes", mode_spec, mode_rows, meta),
        ResultTable.from_records(
            "waveguide_attenuation", [("frequency_hz", "Hz", "f"), ("attenuation_db_per_m", "dB/m", "a")], att_rows, meta
        ),
    ]


COUPLING_FIELDS = (100.0, 200.0, 300.0, 500.0)


def cmd_coupling(sc: Scenario, opts: RunOptions) -> list[ResultTable]:
    lam = sc.system.wavelength
    lengths = np.round(np.arange(0.01, 0.3001, 0.0025), 6)
    rows = []
    for e in COUPLING_FIELDS:
        for length in lengths:
            params = coupling.CouplingParams(
                float(length), quality_factor=sc.mc.quality_factor, resonance_width=sc.mc.resonance_width
            )
            rows.append(
                {
                    "e": e,
                    "l": float(length),
                    "rf": coupling.resonance_factor(length, lam, params.quality_factor, params.resonance_width),
                    "vi": coupling.induced_voltage(e, params),
                    "vc": coupling.coupled_voltage(e, params, lam),
                }
            )
    spec = [
        ("efield_vpm", "V/m", "e"),
        ("wire_length_m", "m", "l"),
        ("resonance_factor", "1", "rf"),
        ("induced_v", "V", "vi"),
        ("coupled_v", "V", "vc"),
    ]
    meta = _meta(sc, opts, orientation_factor=1.0, polarization_efficiency=1.0, half_wave_m=lam / 2)
    return [ResultTable.from_records("coupling", spec, rows, meta)]


def cmd_safety(sc: Scenario, opts: RunOptions) -> list[ResultTable]:
    cfg = _config(sc, opts)
    ll = _line_loss(sc, opts, False)
    limits = analyses.SafetyLimits()
    powers = sorted({*(float(p) for p in np.arange(1e3, 50e3 + 1, 1e3)), cfg.transmit_power})
    rows = []
    for p in powers:
        c = cfg.with_(transmit_power=p)
        rows.append(
            {
                "p": p,
                "occ": analyses.safety_distance(c, limits.occupational, include_line_loss=ll),
                "pub": analyses.safety_distance(c, limits.general_public, include_line_loss=ll),
            }
        )
    spec = [
        ("average_power_w", "W", "p"),
        ("occupational_m", "m", "occ"),
        ("general_public_m", "m", "pub"),
    ]
    meta = _meta(
        sc, opts, include_line_loss=ll, occupational_limit_wpm2=limits.occupational,
        general_public_limit_wpm2=limits.general_public,
        assumption="boresight, time-averaged power density" + ("" if ll else ", no line loss"),
    )
    return [ResultTable.from_records("safety", spec, rows, meta)]


def cmd_thermal(sc: Scenario, opts: RunOptions) -> list[ResultTable]:
    cfg = _config(sc, opts)
    chain = analyses.EfficiencyChain.from_config(cfg)
    peak = cfg.peak_power
    budget = analyses.thermal_budget(peak, chain, cfg.duty_cycle)
    meta = _meta(
        sc, opts, rf_power_w=peak, total_heat_cw_w=budget["total_heat_cw"],
        liquid_cooling_duty_threshold=budget["liquid_cooling_duty_threshold"],
        overall_efficiency=chain.overall,
    )
    stage_rows = [{"s": k, "h": v} for k, v in budget["stage_heat_cw"].items()]
    duty_rows = []
    for d in np.round(np.linspace(0.0, 1.0, 21), 6):
        b = analyses.thermal_budget(peak, chain, float(d))
        duty_rows.append({"d": float(d), "h": b["average_heat"], "liq": b["cooling"] == "liquid"})
    eff_rows = analyses.efficiency_chain_report(budget["wall_power_cw"], chain)
    return [
        ResultTable.from_records("thermal_budget", [("stage", "-", "s"), ("heat_cw_w", "W", "h")], stage_rows, meta),
        ResultTable.from_records(
            "thermal_duty",
            [("duty_cycle", "1", "d"), ("average_heat_w", "W", "h"), ("liquid_cooling", "bool", "liq")],
            duty_rows,
            meta,
        ),
        ResultTable.from_records(
            "efficiency_chain",
            [("stage", "-", "stage"), ("efficiency", "1", "efficiency"), ("power_w", "W", "power"), ("cumulative_efficiency", "1", "cumulative")],
            eff_rows,
            meta,
        ),
    ]


def cmd_dwell(sc: Scenario, opts: RunOptions) -> list[ResultTable]:
    cfg = _config(sc, opts)
    ll = _line_loss(sc, opts, False)
    params = analyses.DwellParams()
    ranges = range_grid(opts, (5.0, 100.0, 1.0))
    s = np.atleast_1d(power_density(cfg, ranges, include_line_loss=ll))
    t = np.atleast_1d(analyses.dwell_time(cfg, ranges, include_line_loss=ll, params=params))
    rows = [{"r": r, "s": si, "t": ti} for r, si, ti in zip(ranges, s, t)]
    meta = _meta(sc, opts, include_line_loss=ll, fluence_threshold_jpcm2=params.fluence_threshold)
    acc_rows = []
    times = np.round(np.linspace(0.0, 10.0, 51), 6)
    for r in (20.0, 25.0, 30.0, 35.0, 40.0):
        sr = power_density(cfg, r, include_line_loss=ll)
        for ti in times:
            acc_rows.append({"r": r, "t": float(ti), "f": float(analyses.energy_accumulation(sr, ti))})
    return [
        ResultTable.from_records(
            "dwell", [("range_m", "m", "r"), ("power_density_wpm2", "W/m^2", "s"), ("dwell_s", "s", "t")], rows, meta
        ),
        ResultTable.from_records(
            "energy_accumulation", [("range_m", "m", "r"), ("time_s", "s", "t"), ("fluence_jpcm2", "J/cm^2", "f")], acc_rows, meta
        ),
    ]


PULSED_DUTIES = (1.0, 0.5, 0.1, 0.05, 0.01)
PULSED_AVERAGE_POWER = 5e3


def cmd_pulsed(sc: Scenario, opts: RunOptions) -> list[ResultTable]:
    ll = _line_loss(sc, opts, False)
    duties = (opts.duty,) if opts.duty is not None else PULSED_DUTIES
    ranges = range_grid(opts, (5.0, 100.0, 1.0))
    rows = analyses.pulsed_cw_compare(PULSED_AVERAGE_POWER, duties, sc.system, ranges, sc.drone, include_line_loss=ll)
    spec = [
        ("duty_cycle", "1", "duty_cycle"),
        ("peak_power_w", "W", "peak_power"),
        ("range_m", "m", "range"),
        ("peak_efield_vpm", "V/m", "efield"),
        ("system_kill", "1", "system_kill"),
        ("single_sigmoid_kill", "1", "single_sigmoid_kill"),
    ]
    meta = _meta(sc, opts, include_line_loss=ll, average_power_w=PULSED_AVERAGE_POWER)
    kr_rows = []
    for d in duties:
        cfg = sc.system.with_(transmit_power=PULSED_AVERAGE_POWER, duty_cycle=d)
        k = damage.kill_range(cfg, sc.drone, opts.target, include_line_loss=ll, peak=True)
        kr_rows.append({"d": d, "p": cfg.peak_power, "r": k.range, "s": k.status})
    return [
        ResultTable.from_records("pulsed", spec, rows, meta),
        ResultTable.from_records(
            "pulsed_kill_range",
            [("duty_cycle", "1", "d"), ("peak_power_w", "W", "p"), ("kill_range_m", "m", "r"), ("status", "-", "s")],
            kr_rows,
            {**meta, "target_prob": opts.target},
        ),
    ]


DISH_DIAMETERS = (0.40, 0.60, 0.80, 1.00)


def cmd_dish(sc: Scenario, opts: RunOptions) -> list[ResultTable]:
    rows = analyses.dish_trade_table(DISH_DIAMETERS, sc.system)
    spec = [
        ("diameter_m", "m", "diameter"),
        ("gain_dbi", "dBi", "gain_dbi"),
        ("beamwidth_deg", "deg", "beamwidth"),
        ("footprint_30m_m", "m", "footprint"),
        ("weight_min_kg", "kg", "weight_min"),
        ("weight_max_kg", "kg", "weight_max"),
        ("wind_load_n", "N", "wind_load"),
    ]
    meta = _meta(sc, opts, aperture_efficiency=sc.system.aperture_efficiency)
    ranges = range_grid(opts, (1.0, 100.0, 1.0))
    fp_rows = []
    for d in DISH_DIAMETERS:
        bw = half_power_beamwidth(d, sc.system.wavelength)
        for r in ranges:
            fp_rows.append({"d": d, "r": float(r), "w": beam_footprint(float(r), bw)})
    return [
        ResultTable.from_records("dish_tradeoff", spec, rows, meta),
        ResultTable.from_records(
            "beam_footprint", [("diameter_m", "m", "d"), ("range_m", "m", "r"), ("footprint_m", "m", "w")], fp_rows, meta
        ),
    ]


HANDLERS = {
    "efield": cmd_efield,
    "killcurve": cmd_killcurve,
    "montecarlo": cmd_montecarlo,
    "tradespace": cmd_tradespace,
    "waveguide": cmd_waveguide,
    "coupling": cmd_coupling,
    "safety": cmd_safety,
    "thermal": cmd_thermal,
    "dwell": cmd_dwell,
    "pulsed": cmd_pulsed,
    "dish": cmd_dish,
}


def dispatch(command: str, scenario: Scenario, options: RunOptions | None = None) -> list[ResultTable]:
    """Run one subcommand and return its tables."""
    try:
        handler = HANDLERS[command]
    except KeyError:
        raise ValueError(f"unknown subcommand {command!r}; expected one of {', '.join(COMMANDS)}") from None
    return handler(scenario, options or RunOptions())
