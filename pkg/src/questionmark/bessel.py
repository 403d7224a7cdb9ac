r"""Modified Bessel functions ``K_{i tau}(x)`` of imaginary order.

Production values come from

.. math::
    K_{i\tau}(x) = \tfrac12 \int_{-\infty}^{\infty} e^{-x\cosh w} e^{i\tau w}\, dw,

integrated by the trapezoid rule along the shifted line ``w = u + i beta``
(``0 <= beta < pi/2``).  The shift pulls out the factor ``e^{-|tau| beta}``,
so the sum never has to cancel down from ``O(1)`` to ``e^{-pi|tau|/2}``.
The integrand is entire and decays like ``exp(-x cos(beta) cosh u)``; the
classical strip estimate for the trapezoid rule and an explicit tail bound
give a rigorous error bound.  ``beta = 0`` is the plain exponential
representation.

The Fourier-cosine representation

.. math::
    \cosh(\pi\tau/2) K_{i\tau}(x) = \int_0^\infty \cos(\tau u)\cos(x\sinh u)\, du

converges only conditionally and is kept as an independent check, evaluated
with ``v = sinh u``, half-period panels and iterated averaging of the partial
sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

EXP_REPRESENTATION = "exp-representation"
FOURIER_COSINE = "fourier-cosine"
MAX_NODES = 4_000_000
_EPS = np.finfo(float).eps
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def k0_upper(z: float) -> float:
    """``K_0(z) <= e^{-z} sqrt(pi/(2z))``, from ``cosh u >= 1 + u^2/2``."""
    return math.exp(-z) * math.sqrt(math.pi / (2.0 * z))


@dataclass(frozen=True)
class BesselPoint:
    """``value`` is ``K_{i tau}(x)`` for the exponential method and
    ``cosh(pi tau/2) K_{i tau}(x)`` for the Fourier-cosine method."""

    x: float
    tau: float
    value: float
    method: str
    bound: float
    converged: bool = True
    nodes: int = 0

    @property
    def k(self) -> float:
        """``K_{i tau}(x)`` regardless of method."""
        if self.method == FOURIER_COSINE:
            return self.value / math.cosh(math.pi * self.tau / 2)
        return self.value

    @property
    def k_bound(self) -> float:
        if self.method == FOURIER_COSINE:
            return self.bound / math.cosh(math.pi * self.tau / 2)
        return self.bound


# ---------------------------------------------------------------------------
# shifted trapezoid


def _shifted_sums(x: float, beta: float, taus: np.ndarray, h: float, n: int) -> np.ndarray:
    """``h * sum_k G(kh)`` over ``|k| <= n`` for ``G(u) = exp(-x cosh(u + i beta) + i tau u) / 2``.

    ``G(-u)`` is the conjugate of ``G(u)``, so only ``u >= 0`` is evaluated and
    the result is real.
    """
    u = h * np.arange(n + 1)
    g = np.exp(-x * np.cosh(u + 1j * beta))
    w = np.full(n + 1, 1.0)
    w[0] = 0.5
    # real part of sum_k w_k g_k e^{i tau u_k}, done as one matrix product
    phase = np.exp(1j * np.outer(taus, u))
    return h * (phase @ (w * g)).real


def _tail(c: float, U: float) -> float:
    """``int_U^inf exp(-c cosh u) du <= exp(-c cosh U) / (c sinh U)``."""
    return math.exp(-c * math.cosh(U)) / (c * math.sinh(U))


def _truncation_point(c: float, target: float, h: float) -> float:
    # two half-line tails of G (each carries the factor 1/2), sums dominated by
    # the integral from U - h
    U = max(1.0, h + 1e-3)
    while _tail(c, U - h) > target:
        U *= 1.25
    return U


def _choose_beta(x: float, a: float) -> float:
    if a == 0.0:
        return 0.0
    betas = np.linspace(0.0, math.pi / 2, 129)[:-1]
    betas = betas[betas <= math.pi / 2 - 1e-3]
    floor = [-a * b + math.log(k0_upper(x * math.cos(b))) for b in betas]
    return float(betas[int(np.argmin(floor))])


def k_imag(x: float, tau: float, tol: float = 1e-12) -> BesselPoint:
    """``K_{i tau}(x)`` with ``|value - K| <= bound``; ``converged`` iff ``bound <= tol``."""
    if not x > 0:
        raise ValueError("x must be positive (K has a logarithmic singularity at 0)")
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = abs(float(tau))  # K_{i tau} = K_{-i tau}; one code path for both signs
    beta = _choose_beta(x, a)
    d = 0.5 * (math.pi / 2 - beta)
    scale = math.exp(-a * beta)
    # |G(u + iv)| <= exp(a d) exp(-x cos(beta + d) cosh u) / 2 for |v| <= d
    M = math.exp(a * d) * k0_upper(x * math.cos(beta + d))
    h = 2 * math.pi * d / math.log1p(8.0 * M * scale / tol)
    if a > 0:
        h = min(h, 2 * math.pi / (8 * a))
    c = x * math.cos(beta)
    U = _truncation_point(c, 0.25 * tol / scale, h)
    n = int(math.ceil(U / h))
    converged = True
    if n > MAX_NODES:
        n, converged = MAX_NODES, False
        h = U / n
    s = float(_shifted_sums(x, beta, np.array([a]), h, n)[0])
    disc = 2.0 * M / math.expm1(2 * math.pi * d / h)
    trunc = _tail(c, n * h - h)
    absum = k0_upper(c) + h  # >= h * sum |G|
    rnd = absum * (64 + a * n * h + x * math.cosh(n * h)) * _EPS
    bound = scale * (disc + trunc + rnd)
    return BesselPoint(float(x), float(tau), scale * s, EXP_REPRESENTATION, float(bound), bool(converged and bound <= tol), n)


# ---------------------------------------------------------------------------
# Fourier-cosine representation


FOURIER_DOMAIN = (10.0, 10.0)  # x <= 10, |tau| <= 10


def _panel(a: float, x: float, lo: float, hi: float) -> float:
    m = 1 + int(math.ceil(a * (math.asinh(hi) - math.asinh(lo)) / 0.5 + x * (hi - lo) / 2.0))
    edges = np.linspace(lo, hi, m + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    v = mid + half * _GL_NODES[None, :]
    f = np.cos(a * np.arcsinh(v)) * np.cos(x * v) / np.sqrt(1.0 + v * v)
    return float(np.sum(half * _GL_WEIGHTS[None, :] * f))


def _iterated_average(s: np.ndarray) -> float:
    s = np.asarray(s, dtype=float)
    while len(s) > 1:
        s = 0.5 * (s[1:] + s[:-1])
    return float(s[0])


def k_imag_fourier(x: float, tau: float, tol: float = 1e-8, panels: int = 400, levels: int = 40) -> BesselPoint:
    """``cosh(pi tau/2) K_{i tau}(x)`` from the conditionally convergent cosine integral.

    ``bound`` is an estimate (the spread between two shifted averaging
    windows), not a certificate.
    """
    if not (0 < x <= FOURIER_DOMAIN[0] and abs(tau) <= FOURIER_DOMAIN[1]):
        raise ValueError("Fourier-cosine representation restricted to 0 < x <= 10, |tau| <= 10")
    a = abs(float(tau))
    # zeros of cos(x v): the partial sums at these points alternate around the limit
    edges = np.concatenate(([0.0], (np.arange(panels + levels + 1) + 0.5) * math.pi / x))
    pieces = np.array([_panel(a, x, lo, hi) for lo, hi in zip(edges[:-1], edges[1:])])
    sums = np.cumsum(pieces)
    v1 = _iterated_average(sums[-levels - 1 :])
    v2 = _iterated_average(sums[-levels - 2 : -1])
    est = abs(v1 - v2) + 64 * _EPS * np.abs(pieces).sum()
    return BesselPoint(float(x), float(tau), v1, FOURIER_COSINE, float(est), bool(est <= tol), len(pieces))


# ---------------------------------------------------------------------------
# checks


@dataclass(frozen=True)
class BoundCheck:
    x: float
    tau: float
    value: float
    rhs: float
    slack: float

    @property
    def holds(self) -> bool:
        return abs(self.value) <= self.rhs + self.slack


def uniform_bound_rhs(x: float, tau: float) -> float:
    return x**-0.25 / math.sqrt(math.sinh(math.pi * tau))


def uniform_bound_check(x: float, tau: float) -> BoundCheck:
    """``|K_{i tau}(x)| <= x^{-1/4} / sqrt(sinh(pi tau))`` for ``x, tau > 0``."""
    if not (x > 0 and tau > 0):
        raise ValueError("x and tau must be positive")
    rhs = uniform_bound_rhs(x, tau)
    p = k_imag(x, tau, tol=1e-9 * rhs)
    return BoundCheck(float(x), float(tau), p.value, rhs, p.bound)


def uniform_bound_sweep(xs: Sequence[float], taus: Sequence[float]) -> List[BoundCheck]:
    return [uniform_bound_check(x, t) for x in xs for t in taus]


@dataclass(frozen=True)
class AsymptoticRow:
    x: float
    tau: float
    quantity: float  # the ratio or difference the regime tracks


@dataclass(frozen=True)
class AsymptoticReport:
    regime: str
    rows: List[AsymptoticRow]
    ok: bool
    note: str = ""


REGIMES = ("large-x", "small-x-nonzero-order", "small-x-zero-order", "large-tau")


def asymptotic_checks(regime: str) -> AsymptoticReport:
    """Ratio tests for the classical asymptotics of ``K``; report only."""
    rows: List[AsymptoticRow] = []
    if regime == "large-x":
        for x in (5.0, 10.0, 20.0, 40.0):
            ratio = k_imag(x, 0.0, tol=1e-12 * math.exp(-x)).value / (math.sqrt(math.pi / (2 * x)) * math.exp(-x))
            rows.append(AsymptoticRow(x, 0.0, ratio))
        errs = [abs(r.quantity - 1) for r in rows]
        ok = errs[2] <= 0.05 and all(e1 >= e2 for e1, e2 in zip(errs, errs[1:]))
        return AsymptoticReport(regime, rows, ok, "K_0(x) / (sqrt(pi/2x) e^-x) -> 1")
    if regime == "small-x-zero-order":
        for x in (1e-2, 1e-3, 1e-4, 1e-5, 1e-6):
            rows.append(AsymptoticRow(x, 0.0, k_imag(x, 0.0).value + math.log(x)))
        ok = max(abs(r.quantity) for r in rows) < 1.0
        return AsymptoticReport(regime, rows, ok, "K_0(x) + log x stays bounded (limit log 2 - gamma)")
    if regime == "small-x-nonzero-order":
        tau = 1.0
        amp = math.sqrt(math.pi / (tau * math.sinh(math.pi * tau)))
        for x in (1e-2, 1e-4, 1e-6, 1e-8):
            rows.append(AsymptoticRow(x, tau, k_imag(x, tau).value))
        ok = max(abs(r.quantity) for r in rows) <= 1.01 * amp
        return AsymptoticReport(regime, rows, ok, "K_{i tau}(x) = O(x^0): bounded oscillation as x -> 0")
    if regime == "large-tau":
        x = 1.0
        for tau in (5.0, 10.0, 20.0, 40.0):
            scale = math.exp(-math.pi * tau / 2) / math.sqrt(tau)
            v = k_imag(x, tau, tol=1e-10 * scale).value
            rows.append(AsymptoticRow(x, tau, v / scale))
        ok = max(abs(r.quantity) for r in rows) <= math.sqrt(2 * math.pi) * 1.01
        return AsymptoticReport(regime, rows, ok, "K_{i tau}(x) e^{pi tau/2} sqrt(tau) bounded")
    raise ValueError(f"unknown regime {regime!r}; choose from {REGIMES}")


def ode_residual(x: float, tau: float, h: float = 1e-3) -> float:
    """``x^2 K'' + x K' - (x^2 - tau^2) K`` by central differences, relative to ``x^2 max|K|``."""
    tol = 1e-14
    km, k0, kp = (k_imag(x + s * h, tau, tol=tol).value for s in (-1, 0, 1))
    d2 = (kp - 2 * k0 + km) / h**2
    d1 = (kp - km) / (2 * h)
    res = x * x * d2 + x * d1 - (x * x - tau * tau) * k0
    return abs(res) / (x * x * max(abs(km), abs(k0), abs(kp), 1e-300))


# ---------------------------------------------------------------------------
# index integral


@dataclass(frozen=True)
class IndexIntegralSample:
    x: float
    t: float
    lam: float
    lhs: complex
    rhs: complex
    bound: float
    converged: bool = True
    slow: bool = False  # lambda close to pi/2: long tau range
    cutoff: float = 0.0
    nodes: Tuple[int, int] = (0, 0)
    parts: dict = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def holds(self) -> bool:
        return self.residual <= self.bound


def index_integral_rhs(x: float, t: float, lam: float) -> complex:
    r = math.sqrt(1 + t * t)
    return x * np.exp(-x * (r * math.cos(lam) - 1j * t * math.sin(lam))) * (r * math.sin(lam) + 1j * t * math.cos(lam))


def index_integral(x: float, t: float, lam: float, tol: float = 1e-9, slow_cutoff: float = 200.0) -> IndexIntegralSample:
    r"""``(1/pi) int tau e^{lam tau} (t + sqrt(1+t^2))^{i tau} K_{i tau}(x) dtau`` against its closed form.

    ``E(tau) = e^{lam tau} K_{i tau}(x)`` is the trapezoid sum on the line
    shifted by ``beta = lam``, so no exponentially large factor is ever
    formed.  The outer integral is a trapezoid sum in ``tau`` (``E`` is
    entire and decays like ``e^{-(pi/2 - lam)|tau|}``); its discretisation
    error is estimated by halving, the other two contributions are bounded.
    """
    if not (x > 0 and t > 0):
        raise ValueError("x and t must be positive")
    if not 0 <= lam < math.pi / 2:
        raise ValueError("lambda must satisfy 0 <= lambda < pi/2")
    theta = math.asinh(t)
    gap = math.pi / 2 - lam
    # tail: |E(tau)| <= e^{-(beta' - lam)|tau|} K_0(x cos beta'), beta' = pi/2 - gap/8
    rate = 7.0 * gap / 8.0
    kb = k0_upper(x * math.cos(math.pi / 2 - gap / 8.0))
    tail = lambda T: (2 / math.pi) * kb * math.exp(-rate * T) * (T / rate + 1 / rate**2)  # noqa: E731
    T = 4.0
    while tail(T) > tol / 4:
        T *= 1.1
    # inner trapezoid for E on the line beta = lam
    d = gap / 2
    M = math.exp(T * d) * k0_upper(x * math.cos(lam + d))
    target = tol / (4 * T * T / math.pi)  # per-node accuracy of E
    hu = 2 * math.pi * d / math.log1p(8 * M / target)
    c = x * math.cos(lam)
    U = _truncation_point(c, target / 4, hu)
    nu = int(math.ceil(U / hu))
    # outer step resolves e^{i tau theta} times the spread of E's spectrum (|u| <= U)
    ht = 2 * math.pi / (2 * (U + theta) + 10)
    nt = int(math.ceil(T / ht))
    taus = ht * np.arange(-nt, nt + 1)
    converged = nu * len(taus) <= 40_000_000
    if not converged:
        raise ValueError("index integral too expensive at this lambda / tolerance")
    E = _shifted_sums(x, lam, taus, hu, nu)
    vals = taus * np.exp(1j * taus * theta) * E
    lhs = ht * vals.sum() / math.pi
    coarse = 2 * ht * vals[::2].sum() / math.pi if nt % 2 == 0 else 2 * ht * vals[1::2].sum() / math.pi
    e_err = 2.0 * math.exp(T * d) * k0_upper(x * math.cos(lam + d)) / math.expm1(2 * math.pi * d / hu) + _tail(c, nu * hu - hu)
    e_err += k0_upper(c) * (64 + T * U + x * math.cosh(U)) * _EPS
    parts = {
        "tau_tail": tail(T),
        "inner": T * T / math.pi * e_err,
        "outer": abs(lhs - coarse),
    }
    bound = sum(parts.values()) + 64 * _EPS * ht * np.abs(vals).sum() / math.pi
    return IndexIntegralSample(
        float(x), float(t), float(lam), complex(lhs), complex(index_integral_rhs(x, t, lam)), float(bound),
        bool(bound <= tol), T > slow_cutoff, T, (len(taus), nu + 1), parts,
    )
