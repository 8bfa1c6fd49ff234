import pytest
from hypothesis import given
from hypothesis import strategies as st

from hpmsim.physics import DomainError
from hpmsim.stats import beta_quantile, clopper_pearson

# Bounds from a 30-digit mpmath evaluation: exact binomial tail sums
# P(Bin(n, x) >= k) inverted by 110-step bisection, computed before the build.
ORACLE = {
    (5144, 10000): (0.5045512492397207, 0.5242403600502007),
    (1, 10): (0.002528578544461785, 0.4450161170281954),
    (9, 10): (0.5549838829718046, 0.9974714214555382),
    (2412, 10000): (0.2328413662682246, 0.2497096030988964),
    (50, 100): (0.398321129503301, 0.601678870496699),
}


@pytest.mark.parametrize("k,n", list(ORACLE))
def test_against_high_precision_oracle(k, n):
    low, high = clopper_pearson(k, n, 0.95)
    assert low == pytest.approx(ORACLE[k, n][0], abs=1e-10)
    assert high == pytest.approx(ORACLE[k, n][1], abs=1e-10)


def test_boundaries_are_exact():
    assert clopper_pearson(0, 37)[0] == 0.0
    assert clopper_pearson(37, 37)[1] == 1.0
    assert clopper_pearson(0, 1) == (0.0, pytest.approx(0.975))
    assert clopper_pearson(1, 1) == (pytest.approx(0.025), 1.0)


def test_width_near_half():
    low, high = clopper_pearson(5000, 10000)
    assert (high - low) / 2 == pytest.approx(0.0098, abs=0.0005)


@given(st.integers(1, 5000).flatmap(lambda n: st.tuples(st.integers(0, n), st.just(n))))
def test_interval_contains_estimate(kn):
    k, n = kn
    low, high = clopper_pearson(k, n)
    assert 0.0 <= low <= k / n <= high <= 1.0


def test_symmetry():
    low, high = clopper_pearson(3, 20)
    low2, high2 = clopper_pearson(17, 20)
    assert low == pytest.approx(1 - high2, abs=1e-11)
    assert high == pytest.approx(1 - low2, abs=1e-11)


@pytest.mark.parametrize("args", [(-1, 10), (11, 10), (0, 0), (1.5, 10)])
def test_invalid(args):
    with pytest.raises(DomainError):
        clopper_pearson(*args)


def test_invalid_confidence():
    with pytest.raises(DomainError):
        clopper_pearson(1, 10, 1.0)


def test_beta_quantile_uniform():
    assert beta_quantile(0.3, 1, 1) == pytest.approx(0.3, abs=1e-11)
