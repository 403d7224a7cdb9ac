"""Acceptance criteria 1-9.  Each test records one PASS/FAIL line, printed in the summary."""

import math
import random
import subprocess
import sys
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from questionmark import bessel as bs
from questionmark import rajchman as rj
from questionmark.cli import main
from questionmark.fourier import identity_checks, infinite_transform_direct, salem_scan, sandwich_check
from questionmark.minkowski import question_mark_exact
from questionmark.stieltjes import QuadratureConfig

RESULTS = {}


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    return ok


def _eval(capsys, x):
    code = main(["eval", "--x", x])
    out = capsys.readouterr().out
    value = [ln.split(": ", 1)[1] for ln in out.splitlines() if ln.startswith("value: ")][0]
    return code, value


def test_criterion_1_exact_values(capsys):
    t0 = time.perf_counter()
    exact = {"1/2": Fraction(1, 2), "1/3": Fraction(1, 4), "2/7": Fraction(3, 16)}
    ok = True
    for x, want in exact.items():
        code, got = _eval(capsys, x)
        ok &= code == 0 and Fraction(got) == want
    for name, want in (("sqrt2-1", 0.4), ("golden", 2 / 3)):
        code, got = _eval(capsys, name)
        ok &= code == 0 and abs(float(Fraction(got)) - want) <= 1e-12
    dt = time.perf_counter() - t0
    ok &= dt < 1.0
    assert record(1, ok, f"exact values via CLI, {dt:.3f}s")


def test_criterion_2_functional_equations():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    qm = question_mark_exact
    bad = 0
    n = 10_000
    for _ in range(n):
        q = rng.randint(1, 10**6)
        x = Fraction(rng.randint(0, q), q)
        y = qm(x)
        bad += y != 1 - qm(1 - x)
        bad += qm(x / (x + 1)) != y / 2
        bad += x > 0 and y + qm(1 / x) != 2
    dt = time.perf_counter() - t0
    assert record(2, bad == 0 and dt < 10.0, f"{n} rationals, {bad} exact mismatches, {dt:.2f}s")


@pytest.fixture(scope="module")
def transform_grid_1e8():
    cfg = QuadratureConfig(tol=1e-8)
    t0 = time.perf_counter()
    samples = [infinite_transform_direct(float(t), cfg) for t in np.linspace(0.0, 50.0, 200)]
    return samples, cfg, time.perf_counter() - t0


def test_criterion_3_transform_identities(transform_grid_1e8):
    samples, cfg, t_build = transform_grid_1e8
    t0 = time.perf_counter()
    bad, worst, unconverged = 0, 0.0, 0
    for s in samples:
        unconverged += not s.converged
        for c in identity_checks(s.t, cfg, s):
            bad += not c.holds
            if c.bound > 0:
                worst = max(worst, c.residual / c.bound)
    dt = t_build + time.perf_counter() - t0
    ok = bad == 0 and unconverged == 0 and dt < 120.0
    assert record(3, ok, f"200 points, {bad} violations, {unconverged} unconverged, max residual/bound {worst:.3g}, {dt:.1f}s")


def test_criterion_4_sandwich(transform_grid_1e8):
    samples, cfg, _ = transform_grid_1e8
    viol = []
    for s in samples:
        viol += [(s.t, q.name) for q in sandwich_check(s.t, cfg, s).violations]
    assert record(4, not viol, f"{6 * len(samples)} inequalities, {len(viol)} violations {viol[:3]}")


def test_criterion_5_salem_scan():
    t0 = time.perf_counter()
    coarse = salem_scan(256, QuadratureConfig(tol=1e-6))
    fine = salem_scan(256, QuadratureConfig(tol=1e-8))
    dt = time.perf_counter() - t0
    unhealthy = [r.n for r in coarse.records if not r.healthy]
    loose = [r.n for r in coarse.records if not (r.converged and r.bound <= 1e-6)]
    disagree = [a.n for a, b in zip(coarse.records, fine.records) if abs(a.d_n - b.d_n) > a.bound + b.bound]
    ok = not unhealthy and not loose and not disagree and not fine.failures and dt < 600.0
    detail = f"n=1..256, |f_s|>bound at {unhealthy}, unconverged {loose}, 1e-6 vs 1e-8 disagree at {disagree}, {dt:.1f}s on 1 core"
    assert record(5, ok, detail)


def _k0_oracle():
    # K_0(1) = int_0^inf exp(-cosh u) du at 40 digits; beyond u = 8 the integrand is below e^-1490
    with mpmath.workdps(40):
        return mpmath.quad(lambda u: mpmath.exp(-mpmath.cosh(u)), [0, 2, 4, 8])


def test_criterion_6_bessel():
    t0 = time.perf_counter()
    notes = []
    k0 = bs.k_imag(1.0, 0.0, tol=1e-12)
    ref = float(_k0_oracle())
    ok_k0 = abs(k0.value - ref) <= 1e-10
    notes.append(f"K0(1) err {abs(k0.value - ref):.2g}")

    sweep = bs.uniform_bound_sweep(np.geomspace(0.1, 50.0, 25), np.geomspace(0.1, 20.0, 25))
    bad = [c for c in sweep if not c.holds]
    worst = max(sweep, key=lambda c: abs(c.value) / c.rhs)
    ok_25 = not bad
    notes.append(f"uniform bound {len(bad)}/{len(sweep)} violations (worst ratio {abs(worst.value) / worst.rhs:.4f} at x={worst.x:.3g}, tau={worst.tau:.3g})")

    cos_err = 0.0
    for x in (0.2, 1.0, 4.0, 10.0):
        for tau in (0.0, 1.5, 5.0, 10.0):
            a = bs.k_imag(x, tau, 1e-13)
            b = bs.k_imag_fourier(x, tau, 1e-8)
            cos_err = max(cos_err, abs(a.value - b.k))
    ok_26 = cos_err <= 1e-6
    notes.append(f"cosine representation max diff {cos_err:.2g}")

    idx_bad, idx_worst = 0, 0.0
    for x in (0.5, 1.0, 2.0):
        for t in (0.5, 1.0, 3.0):
            closed = 1j * t * x * math.exp(-x * math.sqrt(1 + t * t))
            assert abs(bs.index_integral_rhs(x, t, 0.0) - closed) <= 1e-15
            for lam in (0.0, 0.5, 1.2):
                s = bs.index_integral(x, t, lam, 1e-7)
                idx_worst = max(idx_worst, s.residual)
                idx_bad += not (s.converged and s.residual <= 1e-6 and s.holds)
    ok_27 = idx_bad == 0
    notes.append(f"index integral 27 points, {idx_bad} failures, max residual {idx_worst:.2g}")
    dt = time.perf_counter() - t0
    ok = ok_k0 and ok_25 and ok_26 and ok_27 and dt < 120.0
    assert record(6, ok, "; ".join(notes) + f"; {dt:.1f}s")


def test_criterion_7_rajchman_exponential():
    t0 = time.perf_counter()
    phi = rj.exponential_measure()
    notes = []
    worst = 0.0
    ok_phi = True
    for t in np.linspace(0.0, 100.0, 41):
        c = rj.phi_cos_transform(phi, float(t), 1e-10)
        s = rj.phi_sin_transform(phi, float(t), 1e-10)
        ec, es = abs(c.value + 1 / (1 + t * t)), abs(s.value + t / (1 + t * t))
        worst = max(worst, ec, es)
        ok_phi &= ec <= 1e-8 and es <= 1e-8 and c.converged and s.converged
    notes.append(f"Phi_c, Phi_s max err {worst:.2g}")
    fej = rj.fejer_value(1e-6)
    ok_fej = abs(fej.value - 1.0) <= 1e-6
    notes.append(f"Fejer {fej.value:.9f}")
    ok_avg = True
    for x in (1.0, 0.1, 0.01):
        a = rj.averaged_identity_check(phi, x, 1e-6)
        ok_avg &= a.holds
        notes.append(f"averaged x={x}: {a.residual:.2g}<={a.bound:.2g}")
    ok_c1 = True
    for r in rj.corollary1_scan(phi, [1.0, 10.0, 100.0, 1000.0], 1e-8):
        t = r.t
        ok_c1 &= abs(r.sin_functional - t * t / (1 + t * t)) <= 1e-6 and abs(r.cos_functional - t / (1 + t * t)) <= 1e-6
    notes.append(f"corollary 1 {'ok' if ok_c1 else 'off'}")
    dt = time.perf_counter() - t0
    ok = ok_phi and ok_fej and ok_avg and ok_c1 and dt < 60.0
    assert record(7, ok, "; ".join(notes) + f"; {dt:.1f}s")


def test_criterion_8_theorem3():
    t0 = time.perf_counter()
    rep = rj.theorem3_condition_check("x(1-x)", np.geomspace(1e2, 1e4, 41))
    dt = time.perf_counter() - t0
    ok = abs(rep.stieltjes_slope + 1.0) <= 0.1 and dt < 60.0
    assert record(8, ok, f"Psi envelope slope {rep.stieltjes_slope:.4f} over [1e2, 1e4], {dt:.1f}s")


def test_criterion_9_determinism(tmp_path):
    t0 = time.perf_counter()
    outs = []
    for i, par in enumerate((1, 8, 1, 8)):
        path = tmp_path / f"scan{i}.csv"
        cmd = [sys.executable, "-m", "questionmark.cli", "salem-scan", "--nmax", "64", "--parallelism", str(par), "--out", str(path)]
        subprocess.run(cmd, check=True, capture_output=True)
        outs.append(path.read_bytes())
    dt = time.perf_counter() - t0
    same = all(o == outs[0] for o in outs)
    assert record(9, same, f"4 runs (parallelism 1, 8, 1, 8) byte-identical={same}, {dt:.1f}s")
