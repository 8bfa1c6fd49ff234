import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hpmsim.constants import C, F0
from hpmsim.coupling import (
    CouplingParams,
    coupled_voltage,
    induced_voltage,
    mean_resonance_factor,
    orientation_factor,
    resonance_factor,
)
from hpmsim.physics import DomainError

LAM = C / F0


def test_induced_voltage_short_dipole():
    assert induced_voltage(300.0, CouplingParams(0.06)) == pytest.approx(9.0, rel=1e-14)
    assert induced_voltage(0.0, CouplingParams(0.06)) == 0.0
    assert induced_voltage(300.0, CouplingParams(0.06, orientation_factor=0.0)) == 0.0


def test_polarization_enters_as_sqrt():
    v = induced_voltage(300.0, CouplingParams(0.06, polarization_efficiency=0.25))
    assert v == pytest.approx(4.5)


def test_resonance_peak_is_q():
    assert resonance_factor(LAM / 2, LAM) == 10.0


def test_resonance_points():
    assert resonance_factor(0.0612, LAM) == pytest.approx(10.0, abs=1e-3)
    assert resonance_factor(0.30, LAM) == pytest.approx(1.0, abs=1e-12)
    assert resonance_factor(LAM / 2 - 0.02, LAM) == pytest.approx(1 + 9 * math.exp(-0.5), rel=1e-12)


def test_coupled_voltage_points():
    assert coupled_voltage(300.0, CouplingParams(0.0612), LAM) == pytest.approx(91.8, abs=0.01)
    assert coupled_voltage(200.0, CouplingParams(0.0612), LAM) == pytest.approx(61.2, abs=0.01)
    assert coupled_voltage(0.0, CouplingParams(0.0612), LAM) == 0.0


def test_orientation_factor():
    assert orientation_factor(math.pi / 2) == 1.0
    assert orientation_factor(0.0) == 0.0
    assert orientation_factor(-math.pi / 6) == pytest.approx(0.5)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"wire_length": 0.0},
        {"wire_length": 0.1, "orientation_factor": 1.5},
        {"wire_length": 0.1, "polarization_efficiency": 0.0},
        {"wire_length": 0.1, "quality_factor": 0.5},
        {"wire_length": 0.1, "resonance_width": 0.0},
    ],
)
def test_params_validation(kwargs):
    with pytest.raises(DomainError):
        CouplingParams(**kwargs)


@given(st.floats(0.0, 0.06))
def test_resonance_symmetric_and_bounded(dx):
    up = resonance_factor(LAM / 2 + dx, LAM)
    down = resonance_factor(LAM / 2 - dx, LAM)
    assert up == pytest.approx(down, rel=1e-12)
    assert 1.0 <= up <= 10.0


@given(st.floats(0.001, 1.0))
def test_q_one_is_flat(length):
    assert resonance_factor(length, LAM, q=1.0) == 1.0


@given(st.floats(0.001, 0.5), st.floats(1.0, 2000.0), st.floats(1.0, 2000.0))
def test_linear_in_field(length, e1, e2):
    p = CouplingParams(length)
    v1, v2 = coupled_voltage(e1, p, LAM), coupled_voltage(e2, p, LAM)
    assert v1 / e1 == pytest.approx(v2 / e2, rel=1e-12)


@given(st.floats(0.01, 1.0), st.floats(0.01, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_monotone_in_pol_and_orientation(p1, p2, f1, f2):
    plo, phi = sorted((p1, p2))
    flo, fhi = sorted((f1, f2))
    lo = coupled_voltage(300.0, CouplingParams(0.1, flo, plo), LAM)
    hi = coupled_voltage(300.0, CouplingParams(0.1, fhi, phi), LAM)
    assert lo <= hi


def test_mean_resonance_matches_quadrature():
    import numpy as np
    from scipy.integrate import trapezoid

    x = np.linspace(0.05, 0.25, 200_001)
    numeric = trapezoid(resonance_factor(x, LAM), x) / 0.2
    assert mean_resonance_factor(0.05, 0.25, LAM) == pytest.approx(numeric, rel=1e-8)
