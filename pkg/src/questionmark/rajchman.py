r"""Fourier-Stieltjes transforms of functions of bounded variation on the half line.

For ``phi`` continuous, integrable, of bounded variation and vanishing at
infinity,

.. math::
    \Phi(t) = \int_0^\infty e^{ixt}\, d\varphi(x) = \Phi_c(t) + i\Phi_s(t),
    \qquad
    \Phi_c(t) = -\varphi(0) + t\int_0^\infty \varphi(x)\sin xt\,dx,
    \qquad
    \Phi_s(t) = -t\int_0^\infty \varphi(x)\cos xt\,dx.

Smooth test functions go through period-width Gauss panels.  For
``phi(x) = ?(1/x) = 2 - ?(x)`` the weighted integrals are moved onto the
Stern-Brocot cylinders of the unit interval instead, where the
singular factor is handled exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache, partial
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .certified import CertifiedValue
from .fourier import infinite_transform
from .minkowski import question_mark_extended
from .parallel import parallel_map
from .stieltjes import (
    LEBESGUE_QM,
    Integrand,
    QuadratureConfig,
    exponential,
    integrate_detailed,
)

_EPS = np.finfo(float).eps
_SQ2 = math.sqrt(2.0)
L2_CUTOFF = 1e-6
# a fitted slope must clear -1 by this much before it counts as integrable decay
SLOPE_MARGIN = 0.1


@lru_cache(maxsize=None)
def _leggauss(order: int):
    return np.polynomial.legendre.leggauss(order)


def _gauss_panels(a: float, b: float, width: float, order: int):
    n = max(1, int(math.ceil((b - a) / width)))
    return _edges_panels(np.linspace(a, b, n + 1), order)


def _edges_panels(edges: np.ndarray, order: int):
    x, w = _leggauss(order)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    return (mid + half * x[None, :]).ravel(), (half * w[None, :]).ravel()


def _wave_sums(hw: np.ndarray, s: np.ndarray, ts: np.ndarray) -> np.ndarray:
    out = np.empty(len(ts), dtype=complex)
    step = max(1, 4_000_000 // max(len(s), 1))
    for i in range(0, len(ts), step):
        out[i : i + step] = np.exp(1j * np.outer(ts[i : i + step], s)) @ hw
    return out


def fourier_panels(h: Callable, ts: Sequence[float], X: float, width: Optional[float] = None, orders=(20, 13), max_width: float = math.pi):
    """``int_0^X h(s) e^{ist} ds`` for every ``t`` in ``ts``.

    Panels are at most half a period of the fastest wave wide.  The error
    estimate is the spread between two Gauss orders on the same panels plus
    accumulated rounding.
    """
    ts = np.asarray(ts, dtype=float)
    if width is None:
        width = min(max_width, math.pi / max(1.0, float(np.max(np.abs(ts))) if len(ts) else 1.0))
    vals = []
    scale = 0.0
    for order in orders:
        s, w = _gauss_panels(0.0, X, width, order)
        hw = h(s) * w
        scale = max(scale, float(np.abs(hw).sum()))
        vals.append(_wave_sums(hw, s, ts))
    err = np.abs(vals[0] - vals[1]) + 64 * _EPS * scale * (1.0 + np.abs(ts) * X * _EPS)
    return vals[0], err


# ---------------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class MeasureFunction:
    """A function ``phi`` on ``[0, inf)`` together with the constants the error bounds need.

    ``tail(n, X, deriv)`` bounds ``int_X^inf x^n |phi|`` (or ``|phi'|``);
    ``monotone_from(n)`` is a point beyond which ``x^n phi`` and ``x^n phi'``
    are monotone, which gives the sharper oscillatory tail ``2 sqrt2 |h(X)|/t``.
    ``deriv_variation`` and ``second_bound`` control ``|Phi_c(t)| <= V1/t``
    and ``<= V2/t^2``.
    """

    name: str
    func: Callable
    deriv: Optional[Callable]
    phi_zero: float
    total_variation: float
    l1_norm: float
    sup_norm: float
    decay: str
    smooth: bool
    support: float = math.inf
    tail: Optional[Callable[[int, float, bool], float]] = None
    monotone_from: Optional[Callable[[int], float]] = None
    deriv_variation: Optional[float] = None
    second_bound: Optional[float] = None
    max_moment: int = 0
    panel_width: float = math.pi

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    def tail_bound(self, X: float, n: int = 0, deriv: bool = False, t: float = 0.0) -> float:
        if X >= self.support:
            return 0.0
        b = self.tail(n, X, deriv) if self.tail is not None else math.inf
        if t != 0.0 and self.monotone_from is not None and X >= self.monotone_from(n):
            h = self.deriv if deriv else self.func
            b = min(b, 2 * _SQ2 * abs(X**n * float(h(np.array([X]))[0])) / abs(t))
        return b

    def cutoff(self, target: float, n: int = 0, deriv: bool = False, t: float = 0.0, cap: float = 1e7) -> float:
        X = 1.0
        while X < min(self.support, cap) and self.tail_bound(X, n, deriv, t) > target:
            X *= 1.2
        return min(X, self.support)


def _exp_tail(n, X, deriv):
    # int_X^inf x^n e^{-x} dx = e^{-X} sum_k n!/k! X^k  (same for |phi'|)
    return math.exp(-X) * sum(math.factorial(n) / math.factorial(k) * X**k for k in range(n + 1))


def exponential_measure() -> MeasureFunction:
    """``phi(x) = e^{-x}``: every transform has a closed form."""
    return MeasureFunction(
        name="exp",
        func=lambda x: np.exp(-x),
        deriv=lambda x: -np.exp(-x),
        phi_zero=1.0,
        total_variation=1.0,
        l1_norm=1.0,
        sup_norm=1.0,
        decay="exp(-x)",
        smooth=True,
        tail=_exp_tail,
        monotone_from=lambda n: float(n),
        deriv_variation=1.0,
        second_bound=2.0,
        max_moment=8,
    )


def _inverse_square_tail(n, X, deriv):
    if deriv:
        # int x^n 2 (1+x)^{-3}
        return 2.0 / (1 + X) if n == 1 else (1 + X) ** -2 if n == 0 else math.inf
    return 1.0 / (1 + X) if n == 0 else math.inf


def inverse_square_measure() -> MeasureFunction:
    """``phi(x) = (1 + x)^{-2}``: algebraic decay, only ``phi`` itself integrable."""
    return MeasureFunction(
        name="inverse-square",
        func=lambda x: (1.0 + x) ** -2,
        deriv=lambda x: -2.0 * (1.0 + x) ** -3,
        phi_zero=1.0,
        total_variation=1.0,
        l1_norm=1.0,
        sup_norm=1.0,
        decay="(1+x)^-2",
        smooth=True,
        tail=_inverse_square_tail,
        monotone_from=lambda n: float(n),
        deriv_variation=2.0,
        second_bound=12.0,
        max_moment=0,
    )


def _smoothstep(s):
    s = np.clip(s, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)
        b = np.where(s < 1, np.exp(-1.0 / np.where(s < 1, 1.0 - s, 1.0)), 0.0)
    return a / (a + b)


def _smoothstep_deriv(s):
    inside = (s > 0) & (s < 1)
    out = np.zeros(np.shape(s))
    si = np.asarray(s)[inside]
    a = np.exp(-1.0 / si)
    b = np.exp(-1.0 / (1.0 - si))
    out[inside] = a * b * (1.0 / si**2 + 1.0 / (1.0 - si) ** 2) / (a + b) ** 2
    return out


def bump_measure(level: float = 1.0) -> MeasureFunction:
    """``level`` on ``[0, 1]``, a C-infinity step down to 0 on ``[1, 2]``, zero beyond."""
    s = np.linspace(0.0, 1.0, 200_001)
    d = _smoothstep_deriv(s)
    dd = np.gradient(d, s)
    # |Phi_c| <= TV(phi')/t and <= (|phi''(0)| + TV(phi''))/t^2, phi''(0) = 0 here
    v1 = float(np.abs(np.diff(d)).sum()) * abs(level)
    v2 = float(np.abs(np.diff(dd)).sum()) * abs(level)
    return MeasureFunction(
        name="bump",
        func=lambda x: level * (1.0 - _smoothstep(x - 1.0)),
        deriv=lambda x: -level * _smoothstep_deriv(x - 1.0),
        phi_zero=level,
        total_variation=abs(level),
        l1_norm=1.5 * abs(level),
        sup_norm=abs(level),
        decay="compact [0, 2]",
        smooth=True,
        support=2.0,
        tail=lambda n, X, deriv: 0.0 if X >= 2.0 else math.inf,
        deriv_variation=v1 * 1.01,
        second_bound=v2 * 1.05,
        max_moment=8,
        panel_width=1.0 / 16,
    )


def _salem_phi(x):
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape)
    for i, v in np.ndenumerate(x):
        out[i] = 2.0 if v == 0 else float(question_mark_extended(1.0 / v, tol=1e-14).value)
    return out


@lru_cache(maxsize=None)
def _salem_l1() -> float:
    # 3/2 + int_0^1 ?(u) u^{-2} du
    r = salem_weighted_transform(0.0, QuadratureConfig(tol=1e-11))
    return float(r.value.real)


def salem_measure() -> MeasureFunction:
    """``phi(x) = ?(1/x) = 2 - ?(x)``, ``phi(0) = 2``, ``phi(x) <= 2^{1-floor(x)}``."""
    return MeasureFunction(
        name="salem",
        func=_salem_phi,
        deriv=None,
        phi_zero=2.0,
        total_variation=2.0,
        # int_0^1 (2 - ?) = 3/2 and ?(1/(n+y)) = 2^{1-n} (1 - ?(y)/2) gives 3/2 on [1, inf)
        l1_norm=3.0,
        sup_norm=2.0,
        decay="2^(1-x)",
        smooth=False,
    )


def salem_l1_norm() -> float:
    """Quadrature value of ``int_0^inf ?(1/x) dx``; the closed form is 3."""
    return _salem_l1()


MEASURES: Dict[str, Callable[[], MeasureFunction]] = {
    "exp": exponential_measure,
    "inverse-square": inverse_square_measure,
    "bump": bump_measure,
    "salem": salem_measure,
}


def check_hypotheses(phi: MeasureFunction, grid: Optional[np.ndarray] = None) -> Dict[str, bool]:
    """Continuity, bounded variation, integrability and decay, sampled on a grid."""
    if grid is None:
        top = phi.support if math.isfinite(phi.support) else 60.0
        grid = np.linspace(0.0, top, 4001 if phi.smooth else 401)
    v = phi(grid)
    jumps = np.abs(np.diff(v))
    out = {
        "starts_at_phi_zero": bool(abs(v[0] - phi.phi_zero) <= 1e-12),
        "continuous": bool(jumps.max() <= 0.05 * max(phi.sup_norm, 1e-300)),
        "bounded_variation": bool(jumps.sum() <= phi.total_variation * (1 + 1e-9) + 1e-12),
        "bounded": bool(np.abs(v).max() <= phi.sup_norm * (1 + 1e-12)),
        "vanishes_at_infinity": bool(math.isfinite(phi.support) or abs(float(phi(np.array([1e8]))[0])) <= 1e-12 * max(phi.sup_norm, 1.0)),
    }
    if phi.smooth:
        X = phi.cutoff(1e-10)
        edges = np.unique(np.concatenate([np.linspace(0.0, min(X, 4.0), 9), np.geomspace(min(X, 4.0), X, 64)]))
        ys, ws = _edges_panels(edges, 20)
        out["integrable"] = bool(abs(float((phi(ys) * ws).sum()) - phi.l1_norm) <= 1e-6 * phi.l1_norm)
    return out


# ---------------------------------------------------------------------------
# transforms


@dataclass(frozen=True)
class TransformForms:
    """``Phi_c`` and ``Phi_s`` from the Stieltjes definition and from integration by parts."""

    t: float
    cos_direct: CertifiedValue
    cos_by_parts: CertifiedValue
    sin_direct: CertifiedValue
    sin_by_parts: CertifiedValue

    @property
    def agree(self) -> bool:
        return self.cos_direct.agrees_with(self.cos_by_parts) and self.sin_direct.agrees_with(self.sin_by_parts)


def _bucketed(phi: MeasureFunction, h: Callable, ts: np.ndarray, tol: float, n: int, deriv: bool):
    """Group frequencies by octave so each group gets its own cutoff and panel width."""
    vals = np.zeros(len(ts), dtype=complex)
    errs = np.zeros(len(ts))
    at = np.abs(ts)
    key = np.floor(np.log2(np.maximum(at, 1e-300)))
    for k in np.unique(key):
        idx = np.nonzero(key == k)[0]
        tmin = float(at[idx].min())
        X = phi.cutoff(tol / 4, n, deriv, tmin)
        v, e = fourier_panels(h, ts[idx], X, max_width=phi.panel_width)
        vals[idx] = v
        errs[idx] = e + np.array([phi.tail_bound(X, n, deriv, t) for t in ts[idx]])
    return vals, errs


def weighted_transform(phi: MeasureFunction, ts: Sequence[float], tol: float = 1e-10, n: int = 0):
    """``int_0^inf x^n phi(x) e^{ixt} dx`` for each ``t``; returns ``(values, bounds)``."""
    ts = np.asarray(ts, dtype=float)
    return _bucketed(phi, lambda s: s**n * phi.func(s), ts, tol, n, False)


def stieltjes_transform(phi: MeasureFunction, ts: Sequence[float], tol: float = 1e-10, n: int = 0):
    """``int_0^inf (ix)^n e^{ixt} dphi(x)`` for smooth ``phi``; returns ``(values, bounds)``."""
    if phi.deriv is None:
        raise ValueError(f"{phi.name}: direct form needs a derivative")
    ts = np.asarray(ts, dtype=float)
    return _bucketed(phi, lambda s: (1j * s) ** n * phi.deriv(s), ts, tol, n, True)


def transform_forms(phi: MeasureFunction, t: float, tol: float = 1e-10, cfg: Optional[QuadratureConfig] = None) -> TransformForms:
    t = float(t)
    if phi.name == "salem":
        cfg = cfg or QuadratureConfig(tol=tol)
        Fs = infinite_transform(t, cfg)
        # Phi = -F for phi = ?(1/x)
        cd = CertifiedValue(float(-Fs.F_c), float(Fs.F_bound), bool(Fs.converged))
        sd = CertifiedValue(float(-Fs.F_s), float(Fs.F_bound), bool(Fs.converged))
        w = salem_weighted_transform(t, cfg)
        wv = complex(w.value)
        cb = CertifiedValue(-2.0 + t * wv.imag, float(abs(t) * w.bound), bool(w.converged))
        sb = CertifiedValue(-t * wv.real, float(abs(t) * w.bound), bool(w.converged))
        return TransformForms(t, cd, cb, sd, sb)
    ts = np.array([t])
    sv, sb_ = stieltjes_transform(phi, ts, tol)
    wv, wb = weighted_transform(phi, ts, tol / max(1.0, abs(t)))
    d, db, w, wbb = complex(sv[0]), float(sb_[0]), complex(wv[0]), float(wb[0])
    ok_d, ok_w = db <= tol, abs(t) * wbb <= tol
    return TransformForms(
        t,
        CertifiedValue(d.real, db, ok_d),
        CertifiedValue(-phi.phi_zero + t * w.imag, abs(t) * wbb, ok_w),
        CertifiedValue(d.imag, db, ok_d),
        CertifiedValue(-t * w.real, abs(t) * wbb, ok_w),
    )


def phi_cos_transform(phi: MeasureFunction, t: float, tol: float = 1e-10) -> CertifiedValue:
    """``Phi_c(t)``; ``converged`` also requires the two forms to agree."""
    f = transform_forms(phi, t, tol)
    v = f.cos_direct
    return CertifiedValue(v.value, v.bound, v.converged and f.cos_direct.agrees_with(f.cos_by_parts))


def phi_sin_transform(phi: MeasureFunction, t: float, tol: float = 1e-10) -> CertifiedValue:
    """``Phi_s(t)``; satisfies ``|Phi_s(t)| <= t ||phi||_1``."""
    f = transform_forms(phi, t, tol)
    v = f.sin_direct
    return CertifiedValue(v.value, v.bound, v.converged and f.sin_direct.agrees_with(f.sin_by_parts))


def phi_cos_batch(phi: MeasureFunction, ts: np.ndarray, tol: float):
    """Direct-form ``Phi_c`` on many frequencies at once, with ``Phi_c(0) = -phi(0)``."""
    ts = np.asarray(ts, dtype=float)
    out = np.empty(len(ts))
    err = np.zeros(len(ts))
    zero = ts == 0
    out[zero] = -phi.phi_zero
    if np.any(~zero):
        v, e = stieltjes_transform(phi, ts[~zero], tol)
        out[~zero], err[~zero] = v.real, e
    return out, err


# ---------------------------------------------------------------------------
# Fejer integral and the averaged identity


def _fejer_kernel(y):
    # (1 - cos y) / y^2 without cancellation, 1/2 at 0
    y = np.asarray(y, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = 2.0 * np.sin(0.5 * y) ** 2 / (y * y)
    return np.where(np.abs(y) < 1e-8, 0.5, out)


def fejer_partial(Y: float, order: int = 20) -> CertifiedValue:
    """``(2/pi) int_0^Y (1 - cos y)/y^2 dy`` with the truncation bound ``4/(pi Y)``."""
    y, w = _gauss_panels(0.0, Y, math.pi, order)
    v = 2.0 / math.pi * math.fsum(_fejer_kernel(y) * w)
    return CertifiedValue(float(v), 4.0 / (math.pi * Y) + 64 * _EPS)


def fejer_value(tol: float = 1e-6) -> CertifiedValue:
    """``(2/pi) int_0^inf (1 - cos y)/y^2 dy = 1``."""
    Y = 8.0 / (math.pi * tol)
    r = fejer_partial(Y)
    return CertifiedValue(float(r.value), float(r.bound), bool(r.bound <= tol))


@dataclass(frozen=True)
class AveragedIdentity:
    x: float
    lhs: float
    rhs: float
    bound: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def holds(self) -> bool:
        return self.residual <= self.bound


def averaged_identity_check(phi: MeasureFunction, x: float, tol: float = 1e-6) -> AveragedIdentity:
    r"""``(1/x) int_0^x [phi(y) - phi(0)] dy`` against ``(2/pi) int_0^inf Phi_c(y/x) (1 - cos y)/y^2 dy``.

    ``Phi_c`` is computed from its Stieltjes definition at every node.  The
    ``y`` range is cut at ``Y`` using the smallest of the decay bounds
    ``|Phi_c(t)| <= TV``, ``V1/t``, ``V2/t^2``.
    """
    if not x > 0:
        raise ValueError("x must be positive")
    if not phi.smooth:
        raise ValueError(f"{phi.name}: averaged identity needs a smooth test function")
    # left side: smooth integrand on [0, x]
    ys, ws = _gauss_panels(0.0, x, x / 4, 20)
    ys2, ws2 = _gauss_panels(0.0, x, x / 4, 13)
    lhs = math.fsum((phi(ys) - phi.phi_zero) * ws) / x
    lhs2 = math.fsum((phi(ys2) - phi.phi_zero) * ws2) / x
    lhs_err = abs(lhs - lhs2) + 64 * _EPS * (1 + abs(lhs))

    def tail(Y):
        c = 2.0 / math.pi
        cands = [c * 2.0 * phi.total_variation / Y]
        if phi.deriv_variation is not None:
            cands.append(c * phi.deriv_variation * x / Y**2)
        if phi.second_bound is not None:
            cands.append(c * 2.0 * phi.second_bound * x * x / (3.0 * Y**3))
        return min(cands)

    Y = 1.0
    while tail(Y) > tol / 4:
        Y *= 1.1
    # Phi_c(y/x) oscillates with period ~ 2 pi x / support when phi has compact
    # support; otherwise it only varies on the scale of y itself
    if math.isfinite(phi.support):
        edges = np.linspace(0.0, Y, int(math.ceil(Y / min(math.pi / 2, x * math.pi / phi.support))) + 1)
    else:
        edges = [0.0, min(x / 4, Y)]
        while edges[-1] < Y:
            edges.append(min(Y, edges[-1] + min(math.pi / 2, 0.25 * edges[-1])))
        edges = np.array(edges)
    vals = []
    for order in (20, 13):
        y, w = _edges_panels(edges, order)
        pc, pe = phi_cos_batch(phi, y / x, tol / 4)
        kw = 2.0 / math.pi * _fejer_kernel(y) * w
        vals.append((math.fsum(pc * kw), float(np.abs(kw) @ pe)))
    rhs, phi_err = vals[0]
    quad_err = abs(vals[0][0] - vals[1][0])
    bound = lhs_err + tail(Y) + phi_err + quad_err + 64 * _EPS
    return AveragedIdentity(float(x), float(lhs), float(rhs), float(bound))


# ---------------------------------------------------------------------------
# limit scans


@dataclass(frozen=True)
class LimitScanRecord:
    """``t int phi sin xt dx`` and ``t int phi cos xt dx`` with a common bound."""

    t: float
    sin_functional: float
    cos_functional: float
    bound: float
    converged: bool = True
    cross_residual: float = math.nan  # Salem case: distance to -F(t) from the fourier module
    cross_bound: float = math.nan


def corollary1_scan(phi: MeasureFunction, t_grid: Sequence[float], tol: float = 1e-8) -> List[LimitScanRecord]:
    ts = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(ts) <= 0) or np.any(ts < 0):
        raise ValueError("t grid must be increasing and non-negative")
    if phi.name == "salem":
        cfg = QuadratureConfig(tol=tol)
        pos = [float(t) for t in ts if t > 0]
        recs = iter(salem_equivalent_scan(pos, cfg) if pos else [])
        return [LimitScanRecord(0.0, 0.0, 0.0, 0.0) if t == 0 else next(recs) for t in ts]
    out = []
    pos = ts > 0
    vals = np.zeros(len(ts), dtype=complex)
    errs = np.zeros(len(ts))
    if np.any(pos):
        # each t gets its own tolerance share so that t * error <= tol
        for i in np.nonzero(pos)[0]:
            v, e = weighted_transform(phi, ts[i : i + 1], tol / max(ts[i], 1.0))
            vals[i], errs[i] = v[0], e[0]
    for t, v, e in zip(ts, vals, errs):
        b = float(t * e)
        out.append(LimitScanRecord(float(t), float(t * v.imag), float(t * v.real), b, b <= tol))
    return out


def _inverted_wave(t: float) -> Integrand:
    """``u -> e^{it/u} / u^2`` for Lebesgue integrals against ``?(u) du``."""
    at = abs(t)

    def func(u):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.exp(1j * t / u) / (u * u)

    def sup_abs(cen, rad):
        d = np.abs(cen) ** 2 - rad**2
        ok = d > 0
        safe = np.where(ok, d, 1.0)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            out = np.exp(at * (np.abs(np.imag(cen)) + rad) / safe) / np.maximum(np.abs(cen) - rad, 1e-300) ** 2
        return np.where(ok, out, np.inf)

    def sup_real(a, b):
        with np.errstate(divide="ignore"):
            return np.where(a > 0, 1.0 / np.where(a > 0, a, 1.0) ** 2, np.inf)

    def edge(a, b, depth):
        # int_0^{1/(k+1)} ?(u) u^{-2} du <= sum_{m > k} ?(1/m) = 2^{1-k}
        out = np.full(np.shape(a), np.nan)
        left = a == 0
        out[left] = np.exp2(1.0 - depth[left].astype(float))
        return out

    return Integrand(func, sup_abs, None, sup_real, edge, False, f"e^(it/u)/u^2, t={t}", LEBESGUE_QM)


def salem_weighted_transform(t: float, cfg: QuadratureConfig = QuadratureConfig()) -> CertifiedValue:
    r"""``int_0^inf ?(1/x) e^{ixt} dx``.

    Split at ``x = 1``; on ``(0, 1)`` use ``?(1/x) = 2 - ?(x)``, on
    ``(1, inf)`` substitute ``x = 1/u``:

    .. math::
        \frac{2(e^{it}-1)}{it} - \int_0^1 ?(x) e^{ixt}dx + \int_0^1 ?(u) e^{it/u} u^{-2} du.
    """
    t = float(t)
    sub = cfg.with_tol(cfg.tol / 2)
    near = 2.0 + 0.0j if t == 0 else 2.0 * (cmath.exp(1j * t) - 1.0) / (1j * t)
    a, _ = integrate_detailed(exponential(t), sub, LEBESGUE_QM)
    b, _ = integrate_detailed(_inverted_wave(t), sub, LEBESGUE_QM)
    v = near - complex(a.value) + complex(b.value)
    return CertifiedValue(v, a.bound + b.bound + 16 * _EPS * (1 + abs(v)), a.converged and b.converged)


def _salem_record(t: float, cfg: QuadratureConfig) -> LimitScanRecord:
    scale = max(1.0, abs(t))
    w = salem_weighted_transform(t, cfg.with_tol(cfg.tol / scale))
    v = complex(w.value)
    S, C, b = t * v.imag, t * v.real, abs(t) * w.bound
    F = infinite_transform(t, cfg)
    # Phi = Phi_c + i Phi_s = (S - 2) - i C must equal -F
    res = abs(complex(S - 2.0, -C) + F.F)
    return LimitScanRecord(float(t), float(S), float(C), float(b), bool(w.converged and b <= cfg.tol), float(res), float(b + F.F_bound))


def salem_equivalent_scan(t_grid: Sequence[float], cfg: QuadratureConfig = QuadratureConfig(tol=1e-8), parallelism: int = 1) -> List[LimitScanRecord]:
    """``t int ?(1/x) sin xt dx`` and ``t int ?(1/x) cos xt dx`` on a grid.

    Data only: the sine functional tends to 2 and the cosine functional to 0
    exactly when ``f(t) -> 0``, which is not known.
    """
    ts = [float(t) for t in t_grid]
    if any(t <= 0 for t in ts):
        raise ValueError("t grid must be positive")
    return parallel_map(partial(_salem_record, cfg=cfg), ts, parallelism)


# ---------------------------------------------------------------------------
# derivatives


@dataclass(frozen=True)
class DerivativeCheck:
    n: int
    t: float
    direct: complex  # int (ix)^n e^{itx} dphi
    split: complex  # i^n [Psi_n(t) - n int x^{n-1} phi e^{itx} dx]
    bound: float
    hypotheses: Dict[str, bool] = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return abs(self.direct - self.split)

    @property
    def holds(self) -> bool:
        return self.residual <= self.bound


def corollary2_check(phi: MeasureFunction, n: int, t: float, tol: float = 1e-9) -> DerivativeCheck:
    r"""``Phi^{(n)}(t)`` directly against ``i^n [Psi_n(t) - n \int x^{n-1}\varphi e^{itx} dx]``.

    ``Psi_n(t) = \int e^{itx} d(x^n\varphi)`` is evaluated after integrating
    by parts, ``-[n = 0]\varphi(0) - it\int x^n\varphi e^{itx}dx``, so the two
    sides share no quadrature.
    """
    if not 0 <= n <= 3:
        raise ValueError("n must be in 0..3")
    hyp = {
        "smooth": phi.smooth and phi.deriv is not None,
        "moments_integrable": n <= phi.max_moment,
    }
    if not all(hyp.values()):
        return DerivativeCheck(n, float(t), complex(math.nan), complex(math.nan), math.nan, hyp)
    ts = np.array([float(t)])
    d, db = stieltjes_transform(phi, ts, tol, n)
    wn, wnb = weighted_transform(phi, ts, tol / max(1.0, abs(t)), n)
    psi = -(phi.phi_zero if n == 0 else 0.0) - 1j * t * complex(wn[0])
    psi_b = abs(t) * float(wnb[0])
    if n > 0:
        wm, wmb = weighted_transform(phi, ts, tol, n - 1)
        rest, rest_b = n * complex(wm[0]), n * float(wmb[0])
    else:
        rest, rest_b = 0.0, 0.0
    split = (1j**n) * (psi - rest)
    return DerivativeCheck(n, float(t), complex(d[0]), complex(split), float(db[0]) + psi_b + rest_b + 64 * _EPS, hyp)


def derivative_fd(phi: MeasureFunction, t: float, h: float = 1e-3, tol: float = 1e-12) -> complex:
    """Central difference of ``Phi`` at ``t`` (finite-difference oracle for ``n = 1``)."""
    v, _ = stieltjes_transform(phi, np.array([t - h, t + h]), tol)
    return complex((v[1] - v[0]) / (2 * h))


# ---------------------------------------------------------------------------
# bounded-variation functions on [0, 1]


PSI_LIBRARY: Dict[str, Callable] = {
    "x(1-x)": lambda x: x * (1.0 - x),
    "sin(pi x)": lambda x: np.sin(np.pi * x),
    "zero": lambda x: np.zeros(np.shape(x)),
}


def psi_hat(psi: Callable, ts: Sequence[float], m: int = 0):
    """``int_0^1 (ix)^m e^{itx} psi(x) dx``; returns ``(values, error estimates)``."""
    return fourier_panels(lambda x: (1j * x) ** m * psi(x), ts, 1.0)


def _envelope_slope(ts: np.ndarray, fn: Callable[[np.ndarray], np.ndarray], per: int = 16):
    """Slope of ``log max|fn|`` over one ``2 pi`` window per grid point against ``log t``."""
    offs = np.linspace(0.0, 2 * np.pi, per, endpoint=False)
    env = np.array([np.max(np.abs(fn(t + offs))) for t in ts])
    ok = env > 0
    if ok.sum() < 2:
        return env, math.nan
    return env, float(np.polyfit(np.log(ts[ok]), np.log(env[ok]), 1)[0])


@dataclass(frozen=True)
class Theorem3Report:
    """Heuristic evidence only: decay slopes cannot prove integrability."""

    psi: str
    endpoints_vanish: bool
    l2_ratio_integral: float  # int_cutoff^1 psi^2 / x^2
    l2_cutoff: float
    transform_slopes: Dict[int, float]  # m -> slope of t^m psi_hat^(m) envelope
    integrable_proxy: Dict[int, bool]  # slope < -1 - SLOPE_MARGIN
    tail_sups: Dict[int, float]  # m -> sup over the top decade of |t^m psi_hat^(m-1)|
    vanishing_proxy: Dict[int, bool]
    stieltjes_slope: float  # slope of |Psi(t)| envelope, Psi = -it psi_hat
    t_range: tuple = (1e2, 1e4)
    heuristic: bool = True


def theorem3_condition_check(psi, t_grid: Optional[Sequence[float]] = None, name: Optional[str] = None) -> Theorem3Report:
    r"""Numerical proxies for the decay conditions on ``\hat\psi`` and the decay of ``Psi = -it\hat\psi``."""
    if isinstance(psi, str):
        name = name or psi
        psi = PSI_LIBRARY[psi]
    name = name or getattr(psi, "__name__", "psi")
    ts = np.geomspace(1e2, 1e4, 41) if t_grid is None else np.asarray(t_grid, dtype=float)
    ends = bool(abs(float(psi(np.array([0.0]))[0])) <= 1e-12 and abs(float(psi(np.array([1.0]))[0])) <= 1e-12)
    # uniform panels on [1e-2, 1], geometric ones down to the cutoff
    xs_all, ws_all = _edges_panels(np.concatenate([np.geomspace(L2_CUTOFF, 1e-2, 200)[:-1], np.linspace(1e-2, 1.0, 100)]), 20)
    l2 = float(np.sum(psi(xs_all) ** 2 / xs_all**2 * ws_all))

    def hat(m):
        return lambda tt: psi_hat(psi, tt, m)[0]

    slopes, integ = {}, {}
    for m in (0, 1, 2):
        _, s = _envelope_slope(ts, lambda tt, m=m: tt**m * hat(m)(tt))
        slopes[m] = s
        integ[m] = bool(s < -1 - SLOPE_MARGIN) if not math.isnan(s) else True
    top = ts[ts >= ts[-1] / 10]
    sups, van = {}, {}
    for m in (1, 2):
        env, s = _envelope_slope(top, lambda tt, m=m: tt**m * hat(m - 1)(tt))
        sups[m] = float(env.max()) if len(env) else math.nan
        van[m] = bool(math.isnan(s) or s < 0)
    _, st = _envelope_slope(ts, lambda tt: -1j * tt * hat(0)(tt))
    return Theorem3Report(name, ends, l2, L2_CUTOFF, slopes, integ, sups, van, st, (float(ts[0]), float(ts[-1])))
