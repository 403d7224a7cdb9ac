import math

import numpy as np
import pytest
from scipy.integrate import quad

from questionmark.fourier import infinite_transform
from questionmark.rajchman import (
    PSI_LIBRARY,
    averaged_identity_check,
    bump_measure,
    check_hypotheses,
    corollary1_scan,
    corollary2_check,
    derivative_fd,
    exponential_measure,
    fejer_partial,
    fejer_value,
    inverse_square_measure,
    phi_cos_transform,
    phi_sin_transform,
    psi_hat,
    salem_equivalent_scan,
    salem_l1_norm,
    salem_measure,
    stieltjes_transform,
    theorem3_condition_check,
    transform_forms,
    weighted_transform,
)
from questionmark.stieltjes import QuadratureConfig

EXP = exponential_measure()
INV = inverse_square_measure()
BUMP = bump_measure()


def qawf(f, t, kind):
    # QUADPACK Fourier integral on [0, inf): an independent oracle
    return quad(f, 0, np.inf, weight=kind, wvar=t, limlst=200)[0]


def test_exponential_closed_forms():
    for t in (0.0, 0.5, 3.0, 40.0):
        c = phi_cos_transform(EXP, t, tol=1e-10)
        s = phi_sin_transform(EXP, t, tol=1e-10)
        assert abs(c.value + 1 / (1 + t * t)) <= max(c.bound, 1e-12)
        assert abs(s.value + t / (1 + t * t)) <= max(s.bound, 1e-12)
        assert c.converged and s.converged


@pytest.mark.parametrize("t", [0.7, 4.0, 25.0])
def test_inverse_square_against_quadpack(t):
    dphi = lambda x: -2.0 * (1 + x) ** -3  # noqa: E731
    v, e = stieltjes_transform(INV, [t], tol=1e-10)
    assert abs(v[0].real - qawf(dphi, t, "cos")) <= e[0] + 1e-9
    assert abs(v[0].imag - qawf(dphi, t, "sin")) <= e[0] + 1e-9


@pytest.mark.parametrize("phi", [EXP, INV, BUMP], ids=lambda p: p.name)
def test_direct_and_by_parts_agree(phi):
    for t in (0.2, 2.0, 15.0):
        assert transform_forms(phi, t, tol=1e-9).agree


def test_weighted_transform_bump_oracle():
    t = 3.0
    v, e = weighted_transform(BUMP, [t], tol=1e-11)
    ref = quad(lambda x: BUMP(np.array([x]))[0], 0, 2, weight="cos", wvar=t, epsabs=1e-13)[0]
    assert abs(v[0].real - ref) <= e[0] + 1e-11


def test_sine_transform_bounded_by_l1():
    for phi in (EXP, INV):
        for t in (0.1, 1.0):
            s = phi_sin_transform(phi, t)
            assert abs(s.value) <= t * phi.l1_norm + s.bound


def test_fejer():
    r = fejer_value(1e-6)
    assert r.converged
    assert abs(r.value - 1.0) <= r.bound
    assert abs(r.value - 1.0) <= 1e-6
    p = fejer_partial(100.0)
    assert p.value < 1.0 and 1.0 - p.value <= p.bound


@pytest.mark.parametrize(
    "phi,x",
    [(EXP, 1.0), (EXP, 0.1), (INV, 0.1), (BUMP, 1.0), (BUMP, 0.1)],
    ids=["exp-1", "exp-0.1", "inverse-square-0.1", "bump-1", "bump-0.1"],
)
def test_averaged_identity(phi, x):
    r = averaged_identity_check(phi, x, tol=1e-6)
    assert r.holds, (r.residual, r.bound)
    assert r.bound <= 1e-5


def test_averaged_identity_exact_lhs():
    # (1/x) int_0^x (e^{-y} - 1) dy
    x = 1.0
    r = averaged_identity_check(EXP, x)
    assert r.lhs == pytest.approx((1 - math.exp(-x)) / x - 1, abs=1e-12)
    with pytest.raises(ValueError):
        averaged_identity_check(EXP, 0.0)


def test_corollary1_exponential():
    ts = np.array([0.0, 1.0, 10.0, 100.0])
    recs = corollary1_scan(EXP, ts, tol=1e-8)
    for r in recs:
        assert abs(r.sin_functional - r.t**2 / (1 + r.t**2)) <= r.bound + 1e-12
        assert abs(r.cos_functional - r.t / (1 + r.t**2)) <= r.bound + 1e-12
        assert r.converged
    with pytest.raises(ValueError):
        corollary1_scan(EXP, [2.0, 1.0])


def test_salem_scan_cross_check():
    cfg = QuadratureConfig(tol=1e-8)
    recs = salem_equivalent_scan([1.0, 8.0], cfg)
    for r in recs:
        assert r.converged
        assert r.cross_residual <= r.cross_bound
        F = infinite_transform(r.t, cfg)
        # t int ?(1/x) sin(xt) dx = 2 + Re Phi = 2 - F_c
        assert abs(r.sin_functional - (2 - F.F_c)) <= r.bound + F.F_bound


def test_salem_l1():
    assert salem_measure().l1_norm == 3.0
    assert salem_l1_norm() == pytest.approx(3.0, abs=1e-9)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_corollary2(n):
    r = corollary2_check(EXP, n, 2.5)
    assert all(r.hypotheses.values())
    assert r.holds, (r.residual, r.bound)
    # Phi^{(n)} for e^{-x}: d^n/dt^n [-1/(1 - it)]
    assert abs(r.direct + 1j**n * math.factorial(n) / (1 - 2.5j) ** (n + 1)) <= 1e-8


def test_corollary2_hypotheses_reported():
    r = corollary2_check(INV, 2, 1.0)
    assert not r.hypotheses["moments_integrable"] and math.isnan(r.residual)
    with pytest.raises(ValueError):
        corollary2_check(EXP, 4, 1.0)


def test_derivative_against_finite_difference():
    for phi in (EXP, BUMP):
        r = corollary2_check(phi, 1, 1.7)
        assert abs(r.direct - derivative_fd(phi, 1.7)) <= 1e-6


def test_hypotheses():
    for phi in (EXP, INV, BUMP):
        assert all(check_hypotheses(phi).values()), phi.name
    h = check_hypotheses(salem_measure())
    assert h["starts_at_phi_zero"] and h["bounded"] and h["vanishes_at_infinity"]


def test_psi_hat_against_closed_form():
    t = 37.0
    v, e = psi_hat(PSI_LIBRARY["x(1-x)"], [t])
    # int_0^1 x(1-x) e^{itx} dx
    ref = quad(lambda x: x * (1 - x), 0, 1, weight="cos", wvar=t)[0] + 1j * quad(lambda x: x * (1 - x), 0, 1, weight="sin", wvar=t)[0]
    assert abs(v[0] - ref) <= max(e[0], 1e-12)


def test_theorem3_quadratic():
    rep = theorem3_condition_check("x(1-x)")
    assert rep.endpoints_vanish and rep.heuristic
    assert rep.stieltjes_slope == pytest.approx(-1.0, abs=0.1)
    assert rep.l2_ratio_integral == pytest.approx((1 - rep.l2_cutoff) ** 3 / 3, abs=1e-10)
    assert rep.transform_slopes[0] == pytest.approx(-2.0, abs=0.1)


def test_theorem3_sine():
    rep = theorem3_condition_check("sin(pi x)")
    assert rep.endpoints_vanish
    assert rep.stieltjes_slope == pytest.approx(-1.0, abs=0.1)
