import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hpmsim.damage import (
    DroneModel,
    SubsystemModel,
    default_drone,
    kill_range,
    sigmoid,
    subsystem_kill_prob,
    susceptibility_order,
    system_kill_prob,
)
from hpmsim.physics import DomainError, SystemConfig, field_at

DRONE = default_drone()
BY_NAME = {s.name: s for s in DRONE.subsystems}

# Table of per-subsystem thresholds shipped as package data.
NOMINAL = {
    "gps": (150.0, 30.0),
    "flight_controller": (250.0, 50.0),
    "esc": (300.0, 60.0),
    "camera": (200.0, 40.0),
    "bms": (350.0, 70.0),
}


def _product_oracle(e: float) -> float:
    survive = 1.0
    for e50, s in NOMINAL.values():
        survive *= 1.0 - 1.0 / (1.0 + math.exp(-(e - e50) / s))
    return 1.0 - survive


class TestDefaultProfile:
    def test_contents(self):
        assert {s.name: (s.e50, s.sigma_e) for s in DRONE.subsystems} == NOMINAL

    def test_validation(self):
        with pytest.raises(DomainError):
            DroneModel(())
        with pytest.raises(DomainError):
            DroneModel((SubsystemModel("a", 1, 1), SubsystemModel("a", 2, 1)))
        with pytest.raises(DomainError):
            SubsystemModel("x", -1.0, 10.0)
        with pytest.raises(DomainError):
            SubsystemModel("x", 100.0, 0.0)


class TestSigmoid:
    @pytest.mark.parametrize("name", list(NOMINAL))
    def test_midpoint(self, name):
        s = BY_NAME[name]
        assert abs(subsystem_kill_prob(s.e50, s) - 0.5) < 1e-12

    def test_points(self):
        assert subsystem_kill_prob(0.0, BY_NAME["gps"]) == pytest.approx(1 / (1 + math.exp(5)), rel=1e-12)
        assert subsystem_kill_prob(300 + 60 * math.log(9), BY_NAME["esc"]) == pytest.approx(0.9, rel=1e-12)

    def test_clamped_extremes(self):
        assert sigmoid(1e9, 300.0, 1.0) == 1.0
        assert sigmoid(-1e9, 300.0, 1.0) == pytest.approx(0.0, abs=1e-200)
        with np.errstate(all="raise"):
            sigmoid(np.array([0.0, 1e12]), 300.0, 0.01)

    @given(st.floats(0.0, 300.0))
    def test_symmetry(self, x):
        esc = BY_NAME["esc"]
        assert subsystem_kill_prob(300 + x, esc) + subsystem_kill_prob(300 - x, esc) == pytest.approx(1.0, abs=1e-14)

    @given(st.floats(0.0, 1000.0), st.floats(0.0, 1000.0))
    def test_monotone(self, a, b):
        lo, hi = sorted((a, b))
        esc = BY_NAME["esc"]
        assert subsystem_kill_prob(lo, esc) <= subsystem_kill_prob(hi, esc)


class TestSystem:
    def test_product_oracle(self):
        assert system_kill_prob(205.0, DRONE) == pytest.approx(0.966, abs=5e-4)
        assert system_kill_prob(205.0, DRONE) == pytest.approx(_product_oracle(205.0), rel=1e-13)

    def test_single_subsystem_is_identity(self):
        s = SubsystemModel("only", 300.0, 60.0)
        for e in (0.0, 150.0, 300.0, 431.0):
            assert system_kill_prob(e, DroneModel((s,))) == subsystem_kill_prob(e, s)

    def test_asymptote(self):
        assert system_kill_prob(1e6, DRONE) == 1.0

    def test_dominates_every_subsystem_on_sweep(self):
        e = np.linspace(0.0, 600.0, 601)
        p = system_kill_prob(e, DRONE)
        for s in DRONE.subsystems:
            assert np.all(p >= subsystem_kill_prob(e, s))

    @given(st.floats(0.0, 600.0))
    def test_adding_subsystem_never_decreases(self, e):
        fewer = DroneModel(DRONE.subsystems[:-1])
        assert system_kill_prob(e, DRONE) >= system_kill_prob(e, fewer)

    @given(st.floats(1.0, 599.0))
    def test_susceptibility_hierarchy(self, e):
        order = [subsystem_kill_prob(e, BY_NAME[n]) for n in ("gps", "camera", "flight_controller", "esc", "bms")]
        assert order == sorted(order, reverse=True)

    def test_susceptibility_order(self):
        assert susceptibility_order(DRONE, 250.0) == ["gps", "camera", "flight_controller", "esc", "bms"]


class TestKillRange:
    cfg = SystemConfig()

    def test_baseline_oracle(self):
        kr = kill_range(self.cfg, DRONE, 0.9, include_line_loss=False)
        assert kr.status == "ok"
        # independent bisection on the closed-form chain
        assert kr.range == pytest.approx(54.355588954, rel=1e-9)
        assert field_at(self.cfg, kr.range, include_line_loss=False) == pytest.approx(182.0, abs=0.1)

    @pytest.mark.parametrize("target", [0.1, 0.5, 0.9, 0.99])
    def test_round_trip(self, target):
        kr = kill_range(self.cfg, DRONE, target, include_line_loss=True)
        p = system_kill_prob(field_at(self.cfg, kr.range, include_line_loss=True), DRONE)
        assert abs(p - target) < 1e-6

    def test_monotone_in_target(self):
        r50 = kill_range(self.cfg, DRONE, 0.5, include_line_loss=False).range
        r90 = kill_range(self.cfg, DRONE, 0.9, include_line_loss=False).range
        assert r50 >= r90

    def test_power_scaling(self):
        r1 = kill_range(self.cfg, DRONE, 0.9, include_line_loss=False).range
        r4 = kill_range(self.cfg.with_(transmit_power=1e5), DRONE, 0.9, include_line_loss=False).range
        assert r4 / r1 == pytest.approx(2.0, rel=1e-9)

    def test_out_of_envelope(self):
        weak = self.cfg.with_(transmit_power=1.0)
        kr = kill_range(weak, DRONE, 0.9, include_line_loss=False)
        assert kr.status == "below_envelope" and math.isnan(kr.range) and not kr.reachable
        # the GPS floor sigmoid never drops below 0.0067 in practice, so a tiny target is never left behind
        kr = kill_range(self.cfg, DRONE, 0.001, include_line_loss=False, r_max=100.0)
        assert kr.status == "above_envelope"

    def test_bad_target(self):
        with pytest.raises(DomainError):
            kill_range(self.cfg, DRONE, 1.0, include_line_loss=False)
