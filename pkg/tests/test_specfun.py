import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import gammaln

from waveguide_nls import specfun
from waveguide_nls.errors import DomainError


def test_log_gamma_at_one():
    assert specfun.log_gamma(1.0) == pytest.approx(0.0, abs=1e-14)


def test_log_gamma_at_half():
    assert specfun.log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)


def test_log_gamma_at_7_5_against_recurrence_oracle():
    # Gamma(7.5) = 6.5 * 5.5 * ... * 0.5 * Gamma(0.5), seeded at the half-integer
    expected = 0.5 * math.log(math.pi)
    for j in range(7):
        expected += math.log(0.5 + j)
    assert specfun.log_gamma(7.5) == pytest.approx(expected, rel=1e-14)


def test_log_gamma_accuracy_window_against_scipy():
    # relative accuracy over [0.1, 200]; near the zeros of log Gamma (x = 1, 2)
    # the comparison floor is absolute machine scale
    for i in range(2000):
        x = 0.1 + i * (200.0 - 0.1) / 1999
        ref = float(gammaln(x))
        assert abs(specfun.log_gamma(x) - ref) <= 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_log_gamma_domain_errors(bad):
    with pytest.raises(DomainError):
        specfun.log_gamma(bad)


def test_beta_known_values():
    assert specfun.beta(0.5, 1.0) == pytest.approx(2.0, rel=1e-13)
    assert specfun.beta(0.5, 0.5) == pytest.approx(math.pi, rel=1e-13)


def test_beta_half_two_against_recurrence_oracle():
    # B(1/2, 2) = Gamma(1/2) Gamma(2) / Gamma(5/2) with Gamma(5/2) = 1.5 * 0.5 * Gamma(1/2)
    assert specfun.beta(0.5, 2.0) == pytest.approx(4.0 / 3.0, rel=1e-13)


def test_beta_domain_errors():
    with pytest.raises(DomainError):
        specfun.beta(-1.0, 2.0)
    with pytest.raises(DomainError):
        specfun.beta(1.0, 0.0)


@given(
    x=st.floats(min_value=0.1, max_value=50.0),
    y=st.floats(min_value=0.1, max_value=50.0),
)
@settings(max_examples=200, deadline=None)
def test_beta_symmetry(x, y):
    bxy = specfun.beta(x, y)
    byx = specfun.beta(y, x)
    assert abs(bxy - byx) <= 1e-12 * abs(bxy)


@given(x=st.floats(min_value=0.1, max_value=100.0))
@settings(max_examples=200, deadline=None)
def test_log_gamma_recurrence(x):
    defect = specfun.log_gamma(x + 1.0) - specfun.log_gamma(x) - math.log(x)
    assert abs(defect) <= 1e-12 * max(1.0, abs(specfun.log_gamma(x + 1.0)))


def test_sphere_volume_known_values():
    assert specfun.sphere_volume(1) == pytest.approx(2.0 * math.pi, rel=1e-13)
    assert specfun.sphere_volume(2) == pytest.approx(4.0 * math.pi, rel=1e-13)
    # Gamma(2) = 1 makes the 3-sphere volume 2 pi^2
    assert specfun.sphere_volume(3) == pytest.approx(2.0 * math.pi**2, rel=1e-13)


def test_sphere_volume_domain_errors():
    with pytest.raises(DomainError):
        specfun.sphere_volume(0)
    with pytest.raises(DomainError):
        specfun.sphere_volume(2.0)  # type: ignore[arg-type]


@pytest.mark.parametrize("k", range(1, 21))
def test_volume_ratio_identity(k):
    ratio = specfun.sphere_volume(k + 1) / specfun.sphere_volume(k)
    target = specfun.beta(0.5, 0.5 * (k + 1))
    assert abs(ratio - target) <= 1e-12 * target
