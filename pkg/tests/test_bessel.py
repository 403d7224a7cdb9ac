import math

import mpmath
import pytest

from questionmark.bessel import (
    FOURIER_COSINE,
    REGIMES,
    asymptotic_checks,
    index_integral,
    index_integral_rhs,
    k_imag,
    k_imag_fourier,
    ode_residual,
    uniform_bound_check,
)

K0_1 = 0.42102443824070834  # K_0(1)


def oracle(x, tau):
    with mpmath.workdps(30):
        return float(mpmath.besselk(1j * tau, x).real)


def test_k0_anchor():
    p = k_imag(1.0, 0.0, tol=1e-13)
    assert abs(p.value - K0_1) <= p.bound + 1e-15
    assert p.bound <= 1e-12


@pytest.mark.parametrize("x", [0.05, 0.5, 1.0, 3.0, 12.0])
@pytest.mark.parametrize("tau", [0.0, 0.4, 2.0, 7.5])
def test_against_mpmath(x, tau):
    p = k_imag(x, tau, tol=1e-12)
    assert p.converged
    assert abs(p.value - oracle(x, tau)) <= p.bound + 1e-14


def test_even_in_tau():
    for x, tau in [(0.7, 1.3), (4.0, 5.0)]:
        assert k_imag(x, tau).value == pytest.approx(k_imag(x, -tau).value, abs=1e-13)


def test_fourier_representation():
    for x, tau in [(0.5, 0.0), (1.0, 1.0), (3.0, 4.0), (8.0, 9.0)]:
        f = k_imag_fourier(x, tau, tol=1e-8)
        e = k_imag(x, tau, tol=1e-12)
        assert f.method == FOURIER_COSINE
        assert abs(f.value - math.cosh(math.pi * tau / 2) * e.value) <= 1e-6
        assert abs(f.k - e.value) <= f.k_bound + e.bound + 1e-12


def test_fourier_domain_enforced():
    with pytest.raises(ValueError):
        k_imag_fourier(20.0, 1.0)


def test_uniform_bound_examples():
    # the two sample points hold; the general claim is checked in the acceptance suite
    for x, tau in [(1.0, 1.0), (16.0, 2.0)]:
        assert uniform_bound_check(x, tau).holds
    with pytest.raises(ValueError):
        uniform_bound_check(0.0, 1.0)


def test_uniform_bound_counterexample():
    # independent of our quadrature: mpmath value exceeds the right-hand side
    x, tau = 1.028, 1.134
    rhs = x**-0.25 / math.sqrt(math.sinh(math.pi * tau))
    assert oracle(x, tau) > rhs
    assert not uniform_bound_check(x, tau).holds


def test_ode_residual():
    for x, tau in [(0.8, 0.5), (2.0, 3.0), (5.0, 1.0)]:
        assert ode_residual(x, tau) <= 1e-5


@pytest.mark.parametrize("regime", REGIMES)
def test_asymptotics(regime):
    rep = asymptotic_checks(regime)
    assert rep.ok, rep.rows
    with pytest.raises(ValueError):
        asymptotic_checks("nope")


def test_index_integral_closed_form_at_zero_lambda():
    x, t = 1.5, 0.7
    expected = 1j * t * x * math.exp(-x * math.sqrt(1 + t * t))
    assert index_integral_rhs(x, t, 0.0) == pytest.approx(expected, abs=1e-15)
    s = index_integral(x, t, 0.0, tol=1e-8)
    assert s.holds and s.residual <= 1e-6


@pytest.mark.parametrize("lam", [0.3, 1.0])
def test_index_integral(lam):
    s = index_integral(2.0, 1.0, lam, tol=1e-8)
    assert s.converged and s.holds
    assert s.residual <= 1e-6


def test_index_integral_domain():
    with pytest.raises(ValueError):
        index_integral(1.0, 1.0, math.pi / 2)
    with pytest.raises(ValueError):
        index_integral(-1.0, 1.0, 0.0)

