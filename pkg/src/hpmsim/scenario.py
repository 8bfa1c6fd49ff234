"""Scenario files: a flat, sectioned TOML document.

Sections and keys (all optional; omitted values take the baseline)::

    [system]      transmit_power, dish_diameter, frequency, aperture_efficiency,
                  line_efficiency_waveguide, line_efficiency_feed,
                  line_efficiency_radome, duty_cycle
    [drone]       <name> = [e50, sigma_e]    (replaces the default profile)
    [montecarlo]  see MC_KEYS
    [run]         include_line_loss, variant, seed, n_trials
    [output]      format, path
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

from . import _toml
from .damage import DroneModel, default_drone
from .montecarlo import VARIANTS, McDistributionSpec
from .physics import DomainError, SystemConfig

SYSTEM_KEYS = tuple(f.name for f in dataclasses.fields(SystemConfig))
MC_KEYS = tuple(
    f.name for f in dataclasses.fields(McDistributionSpec) if f.name not in ("power_bounds", "dish_bounds")
) + ("power_min", "power_max", "dish_min", "dish_max")
RUN_KEYS = ("include_line_loss", "variant", "seed", "n_trials")
OUTPUT_KEYS = ("format", "path")
SECTIONS = ("system", "drone", "montecarlo", "run", "output")

DEFAULT_SEED = 42
DEFAULT_TRIALS = 10_000


class ScenarioError(ValueError):
    """Invalid scenario document; carries the offending location when known."""

    def __init__(self, message: str, *, field: str | None = None, line: int | None = None, column: int | None = None):
        self.field = field
        self.line = line
        self.column = column
        where = []
        if field:
            where.append(field)
        if line is not None:
            where.append(f"line {line}" + (f", column {column}" if column is not None else ""))
        super().__init__(f"{' at '.join(where)}: {message}" if where else message)


@dataclass(frozen=True)
class Scenario:
    system: SystemConfig
    drone: DroneModel
    mc: McDistributionSpec
    include_line_loss: bool | None = None
    variant: str = "listing2"
    seed: int = DEFAULT_SEED
    n_trials: int = DEFAULT_TRIALS
    output_format: str = "csv"
    output_path: str | None = None

    def line_loss(self, command_default: bool) -> bool:
        """The explicit scenario setting, else the per-command default."""
        return command_default if self.include_line_loss is None else self.include_line_loss

    def canonical(self) -> dict:
        def clean(v):
            if isinstance(v, float) and math.isinf(v):
                return "inf"
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            return v

        mc = {k: clean(v) for k, v in dataclasses.asdict(self.mc).items()}
        return {
            "system": dataclasses.asdict(self.system),
            "drone": {s.name: [s.e50, s.sigma_e] for s in self.drone.subsystems},
            "montecarlo": mc,
            "run": {
                "include_line_loss": self.include_line_loss,
                "variant": self.variant,
                "seed": self.seed,
                "n_trials": self.n_trials,
            },
        }

    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _locate(text: str, section: str | None, key: str) -> int | None:
    """1-based line of ``key`` inside ``[section]`` (or the section header)."""
    current = None
    pattern = re.compile(rf"^\s*(\"?){re.escape(key)}\1\s*=")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        header = re.match(r"^\s*\[\s*([^\]]+?)\s*\]", raw)
        if header:
            current = header.group(1)
            if section is None and current == key:
                return lineno
            continue
        if current == section and pattern.match(raw):
            return lineno
    return None


def _number(value, field: str, line: int | None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"expected a number, got {value!r}", field=field, line=line)
    return float(value)


def _integer(value, field: str, line: int | None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"expected an integer, got {value!r}", field=field, line=line)
    return value


def parse_scenario(text: str = "") -> Scenario:
    """Parse and validate a scenario document; an empty document is the baseline."""
    try:
        doc = _toml.loads(text)
    except _toml.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        col = getattr(exc, "colno", None)
        if line is None:
            m = re.search(r"line (\d+), column (\d+)", str(exc))
            if m:
                line, col = int(m.group(1)), int(m.group(2))
        raise ScenarioError(f"syntax error: {getattr(exc, 'msg', exc)}", line=line, column=col) from None

    for section, body in doc.items():
        if section not in SECTIONS:
            raise ScenarioError("unknown section", field=section, line=_locate(text, None, section))
        if not isinstance(body, dict):
            raise ScenarioError("expected a [section] table", field=section, line=_locate(text, None, section))
        for key, value in body.items():
            if isinstance(value, dict):
                raise ScenarioError(
                    "nested tables are not supported", field=f"{section}.{key}", line=_locate(text, None, f"{section}.{key}")
                )

    def check_keys(section: str, allowed) -> dict:
        body = doc.get(section, {})
        for key in body:
            if key not in allowed:
                raise ScenarioError("unknown key", field=f"{section}.{key}", line=_locate(text, section, key))
        return body

    def where(section: str, key: str) -> tuple[str, int | None]:
        return f"{section}.{key}", _locate(text, section, key)

    # [system]
    sys_body = check_keys("system", SYSTEM_KEYS)
    sys_kwargs = {k: _number(v, *where("system", k)) for k, v in sys_body.items()}
    system = _build(SystemConfig, sys_kwargs, "system", text)

    # [drone]
    if "drone" in doc:
        drone_body = doc["drone"]
        if not drone_body:
            raise ScenarioError("drone profile needs at least one subsystem", field="drone", line=_locate(text, None, "drone"))
        for name, pair in drone_body.items():
            if not isinstance(pair, list) or len(pair) != 2:
                raise ScenarioError("expected [e50, sigma_e]", field=f"drone.{name}", line=_locate(text, "drone", name))
            for v in pair:
                _number(v, *where("drone", name))
        try:
            drone = DroneModel.from_mapping(drone_body)
        except DomainError as exc:
            raise ScenarioError(str(exc), field="drone", line=_locate(text, None, "drone")) from None
    else:
        drone = default_drone()

    # [montecarlo]
    mc_body = check_keys("montecarlo", MC_KEYS)
    mc_kwargs: dict = {
        "power_mean": system.transmit_power,
        "power_sigma": 0.05 * system.transmit_power,
        "dish_mean": system.dish_diameter,
    }
    bounds = {"power": [0.0, math.inf], "dish": [0.0, math.inf]}
    for key, value in mc_body.items():
        f, line = where("montecarlo", key)
        if key == "beamwidth_mode":
            if value not in ("fixed", "sampled"):
                raise ScenarioError("expected 'fixed' or 'sampled'", field=f, line=line)
            mc_kwargs[key] = value
        elif key in ("power_min", "power_max", "dish_min", "dish_max"):
            name, end = key.split("_")
            bounds[name][0 if end == "min" else 1] = _number(value, f, line)
        else:
            mc_kwargs[key] = _number(value, f, line)
    mc_kwargs["power_bounds"] = tuple(bounds["power"])
    mc_kwargs["dish_bounds"] = tuple(bounds["dish"])
    mc = _build(McDistributionSpec, mc_kwargs, "montecarlo", text)

    # [run]
    run = check_keys("run", RUN_KEYS)
    include_line_loss = None
    if "include_line_loss" in run:
        if not isinstance(run["include_line_loss"], bool):
            raise ScenarioError("expected true or false", field="run.include_line_loss", line=_locate(text, "run", "include_line_loss"))
        include_line_loss = run["include_line_loss"]
    variant = run.get("variant", "listing2")
    if variant not in VARIANTS:
        raise ScenarioError(f"expected one of {VARIANTS}", field="run.variant", line=_locate(text, "run", "variant"))
    seed = _integer(run.get("seed", DEFAULT_SEED), *where("run", "seed"))
    if not 0 <= seed < 2**64:
        raise ScenarioError("seed must be an unsigned 64-bit integer", field="run.seed", line=_locate(text, "run", "seed"))
    n_trials = _integer(run.get("n_trials", DEFAULT_TRIALS), *where("run", "n_trials"))
    if n_trials < 1:
        raise ScenarioError("must be >= 1", field="run.n_trials", line=_locate(text, "run", "n_trials"))

    # [output]
    out = check_keys("output", OUTPUT_KEYS)
    fmt = out.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ScenarioError("expected 'csv' or 'json'", field="output.format", line=_locate(text, "output", "format"))
    path = out.get("path")
    if path is not None and not isinstance(path, str):
        raise ScenarioError("expected a string", field="output.path", line=_locate(text, "output", "path"))

    return Scenario(system, drone, mc, include_line_loss, variant, seed, n_trials, fmt, path)


def _build(cls, kwargs: dict, section: str, text: str):
    try:
        return cls(**kwargs)
    except DomainError as exc:
        msg = str(exc)
        # Name the first offending key mentioned in the message.
        for key in kwargs:
            if msg.startswith(key) or f" {key} " in f" {msg} ":
                raise ScenarioError(msg, field=f"{section}.{key}", line=_locate(text, section, key)) from None
        raise ScenarioError(msg, field=section, line=_locate(text, None, section)) from None


def load_scenario(path: str | Path | None) -> Scenario:
    if path is None:
        return parse_scenario("")
    return parse_scenario(Path(path).read_text())
