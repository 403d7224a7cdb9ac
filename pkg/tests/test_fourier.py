import cmath
import math

import numpy as np
import pytest

from questionmark.fourier import (
    derivative_transform,
    finite_transform,
    identity_checks,
    infinite_transform,
    infinite_transform_direct,
    salem_coefficient,
    salem_scan,
    sandwich_check,
    tail_factor,
    tail_integral,
    tail_roots,
    transform_grid,
)
from questionmark.stieltjes import QuadratureConfig, integrate_uniform, exponential

CFG = QuadratureConfig(tol=1e-10)

# f_c(2 pi), frozen at tol 1e-12
D_FROZEN = {1: -0.3698741827142579}


def test_zero_frequency():
    s = finite_transform(0.0)
    assert s.f == 1 and s.bound == 0
    F = infinite_transform(0.0)
    assert F.F == pytest.approx(2.0, abs=1e-15)
    assert infinite_transform_direct(0.0).F == 2.0


def test_finite_transform_against_uniform_sum():
    for t in (0.5, 3.0, 17.0):
        s = finite_transform(t, CFG)
        u = integrate_uniform(exponential(t), 15)
        assert abs(s.f - u.value) <= s.bound + u.bound


def test_conjugate_symmetry():
    for t in (0.7, 4.0, 25.0):
        a, b = finite_transform(t, CFG), finite_transform(-t, CFG)
        assert abs(a.f - b.f.conjugate()) <= a.bound + b.bound


def test_phase_real_part():
    # symmetry of ? about 1/2 makes e^{-it/2} f(t) real
    for t in np.linspace(0.1, 40.0, 9):
        s = finite_transform(t, CFG)
        assert abs((cmath.exp(-0.5j * t) * s.f).imag) <= s.bound + 1e-14


@pytest.mark.parametrize("t", [0.3, 1.0, 2 * math.pi, 9.5, 33.0])
def test_identities_hold(t):
    for check in identity_checks(t, CFG):
        assert check.holds, check


@pytest.mark.parametrize("t", [0.3, 1.0, 2 * math.pi, 9.5, 33.0])
def test_sandwich(t):
    rep = sandwich_check(t, CFG)
    assert rep.holds, rep.violations


def test_direct_matches_closed_form():
    for t in (1.0, 12.0):
        a, b = infinite_transform(t, CFG), infinite_transform_direct(t, CFG)
        assert abs(a.F - b.F) <= a.F_bound + b.F_bound


def test_tail_factor_and_integrals():
    for t in (0.8, 2.0, 5.5):
        s = finite_transform(t, CFG)
        for branch, part in (("cos", s.f_c), ("sin", s.f_s)):
            tail = tail_integral(branch, t, CFG)
            ref = tail_factor(branch, t) * part
            assert abs(tail.value - ref) <= tail.bound + 3 * s.bound
    with pytest.raises(ValueError):
        tail_factor("tan", 1.0)


def test_tail_roots():
    roots = tail_roots("cos", 4)
    assert len(roots) == 4
    assert roots[0] == pytest.approx(2 * math.asin(math.sqrt(1 / 8)), abs=1e-11)
    for branch in ("cos", "sin"):
        for r in tail_roots(branch, 6):
            assert abs(tail_factor(branch, r)) <= 1e-10
            assert abs(tail_integral(branch, r, CFG).value) <= 1e-9
    with pytest.raises(ValueError):
        tail_roots("cos", 0)


def test_derivatives_against_finite_differences():
    cfg = QuadratureConfig(tol=1e-12)
    t, h = 3.0, 1e-3
    assert abs(derivative_transform(0, t, cfg).value - finite_transform(t, cfg).f) <= 1e-11
    for k in range(1, 4):
        d = derivative_transform(k, t, cfg)
        hi = derivative_transform(k - 1, t + h, cfg)
        lo = derivative_transform(k - 1, t - h, cfg)
        assert abs(d.value - (hi.value - lo.value) / (2 * h)) <= 1e-6
    with pytest.raises(ValueError):
        derivative_transform(9, 1.0)


def test_salem_records():
    r = salem_coefficient(1, QuadratureConfig(tol=1e-12))
    assert r.d_n == pytest.approx(D_FROZEN[1], abs=1e-12)
    assert r.healthy and r.converged
    scan = salem_scan(12, QuadratureConfig(tol=1e-8))
    assert [r.n for r in scan.records] == list(range(1, 13))
    assert all(r.healthy for r in scan.records)
    assert not scan.failures
    assert all(a >= b for a, b in zip(scan.tail_sup, scan.tail_sup[1:]))
    with pytest.raises(ValueError):
        salem_scan(0)


def test_grid_parallel_identical():
    ts = np.linspace(0.0, 20.0, 7)
    a = transform_grid(ts, CFG, parallelism=1)
    b = transform_grid(ts, CFG, parallelism=3)
    assert [s.as_dict() for s in a] == [s.as_dict() for s in b]
