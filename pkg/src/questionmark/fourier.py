r"""Fourier-Stieltjes transforms of ``?``.

On the unit interval

.. math::
    f(t) = \int_0^1 e^{ixt} \, d?(x) = f_c(t) + i f_s(t),

and on the half line ``F(t) = \int_0^\infty e^{ixt} d?(x) = F_c + i F_s``.
The symmetry ``?(x) = 1 - ?(1-x)`` gives ``f(t) = e^{it} \overline{f(t)}``
and ``?(x + 1) = 1 + ?(x)/2`` gives ``F = 2 f / (2 - e^{it})``, so the
half-line transforms cost nothing beyond ``f``.  The pushforward
``x -> 1/x`` evaluates ``F`` independently and is used to cross-check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import partial
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from .certified import CertifiedValue
from .parallel import parallel_map
from .stieltjes import QuadratureConfig, exponential, integrate, tail_pushforward_integrate

_EPS = np.finfo(float).eps
MAX_DERIVATIVE = 8


def _round(*vals) -> float:
    # floating slack for residuals formed from a handful of operations
    return 32 * _EPS * (1.0 + sum(abs(v) for v in vals))


@dataclass(frozen=True)
class TransformSample:
    """Transforms at one frequency.

    ``bound`` covers ``f`` (hence each of ``f_c``, ``f_s``); ``F_bound``
    covers ``F``.  ``direct`` records whether ``F`` came from the ``1/x``
    pushforward rather than from ``2 f / (2 - e^{it})``.
    """

    t: float
    f: complex
    bound: float
    F: Optional[complex] = None
    F_bound: Optional[float] = None
    converged: bool = True
    direct: bool = False

    @property
    def f_c(self) -> float:
        return self.f.real

    @property
    def f_s(self) -> float:
        return self.f.imag

    @property
    def F_c(self) -> Optional[float]:
        return None if self.F is None else self.F.real

    @property
    def F_s(self) -> Optional[float]:
        return None if self.F is None else self.F.imag

    def as_dict(self) -> dict:
        out = {"t": self.t, "f_c": self.f_c, "f_s": self.f_s, "bound": self.bound}
        if self.F is not None:
            out.update(F_c=self.F_c, F_s=self.F_s, F_bound=self.F_bound, direct=self.direct)
        out["converged"] = self.converged
        return out


@dataclass(frozen=True)
class IdentityCheck:
    """``residual`` of an identity that is exact in theory, against the bound
    implied by the certified inputs."""

    name: str
    t: float
    residual: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.residual <= self.bound


@dataclass(frozen=True)
class Inequality:
    """``lhs <= rhs`` up to ``slack`` coming from the certified bounds."""

    name: str
    lhs: float
    rhs: float
    slack: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + self.slack


@dataclass(frozen=True)
class SandwichReport:
    t: float
    inequalities: List[Inequality]

    @property
    def holds(self) -> bool:
        return all(q.holds for q in self.inequalities)

    @property
    def violations(self) -> List[Inequality]:
        return [q for q in self.inequalities if not q.holds]


@dataclass(frozen=True)
class SalemRecord:
    """``d_n = f_c(2 pi n)``; ``f_s_val`` should vanish and serves as a health metric."""

    n: int
    t: float
    d_n: float
    f_s_val: float
    bound: float
    converged: bool = True

    @property
    def healthy(self) -> bool:
        return abs(self.f_s_val) <= self.bound


@dataclass(frozen=True)
class SalemScan:
    """Records plus descriptive decay statistics.  Nothing here is a claim about the limit."""

    records: List[SalemRecord]
    tail_sup: List[float] = field(default_factory=list)  # sup_{m >= n} |d_m|
    slope: float = math.nan  # least-squares slope of log tail_sup against log n
    failures: List[int] = field(default_factory=list)  # n with converged == False


# ---------------------------------------------------------------------------
# transforms


def finite_transform(t: float, cfg: QuadratureConfig = QuadratureConfig()) -> TransformSample:
    """``f(t) = int_0^1 e^{ixt} d?(x)`` with a certified bound."""
    t = float(t)
    if t == 0.0:
        return TransformSample(t, 1.0 + 0.0j, 0.0)
    r = integrate(exponential(t), cfg)
    return TransformSample(t, complex(r.value), r.bound, converged=r.converged)


def _half_line(f: complex, bound: float, t: float):
    den = 2.0 - cmath.exp(1j * t)
    F = 2.0 * f / den
    # |2 / (2 - e^{it})| <= 2
    return F, 2.0 * abs(1.0 / den) * bound + _round(F)


def infinite_transform(t: float, cfg: QuadratureConfig = QuadratureConfig()) -> TransformSample:
    """``F(t) = 2 f(t) / (2 - e^{it})``; ``F_c = 2 f_c/(5 - 4 cos t)``, ``F_s = 6 f_s/(5 - 4 cos t)``."""
    s = finite_transform(t, cfg)
    F, Fb = _half_line(s.f, s.bound, s.t)
    return TransformSample(s.t, s.f, s.bound, F, Fb, s.converged, False)


def infinite_transform_direct(t: float, cfg: QuadratureConfig = QuadratureConfig()) -> TransformSample:
    """``F(t) = f(t) + int_0^1 e^{it/u} d?(u)``, without the closed-form relation."""
    s = finite_transform(t, cfg)
    if s.t == 0.0:
        return TransformSample(0.0, s.f, 0.0, 2.0 + 0.0j, 0.0, True, True)
    tail = tail_pushforward_integrate(exponential(s.t), cfg)
    F = s.f + complex(tail.value)
    return TransformSample(s.t, s.f, s.bound, F, s.bound + tail.bound + _round(F), s.converged and tail.converged, True)


def derivative_transform(k: int, t: float, cfg: QuadratureConfig = QuadratureConfig()) -> CertifiedValue:
    """``f^{(k)}(t) = int_0^1 (ix)^k e^{ixt} d?(x)``."""
    if not 0 <= k <= MAX_DERIVATIVE:
        raise ValueError(f"derivative order must be in [0, {MAX_DERIVATIVE}]")
    return integrate(exponential(float(t), k), cfg)


def transform_grid(ts: Sequence[float], cfg: QuadratureConfig = QuadratureConfig(), direct: bool = False, parallelism: int = 1) -> List[TransformSample]:
    fn = infinite_transform_direct if direct else infinite_transform
    return parallel_map(partial(fn, cfg=cfg), [float(t) for t in ts], parallelism)


# ---------------------------------------------------------------------------
# identities and inequalities


def phase_identity_residual(t: float, cfg: QuadratureConfig = QuadratureConfig(), sample: Optional[TransformSample] = None) -> IdentityCheck:
    """``|cos(t/2) f_s - sin(t/2) f_c|``, zero because ``e^{-it/2} f(t)`` is real."""
    s = sample or finite_transform(t, cfg)
    c, sn = math.cos(s.t / 2), math.sin(s.t / 2)
    res = abs(c * s.f_s - sn * s.f_c)
    return IdentityCheck("phase", s.t, res, (abs(c) + abs(sn)) * s.bound + _round(s.f))


def identity_checks(t: float, cfg: QuadratureConfig = QuadratureConfig(), sample: Optional[TransformSample] = None) -> List[IdentityCheck]:
    """Phase identity plus direct ``F`` against ``2f/(2-e^{it})`` and its cosine and sine parts."""
    s = sample if sample is not None and sample.direct else infinite_transform_direct(t, cfg)
    closed, _ = _half_line(s.f, 0.0, s.t)
    den = 5.0 - 4.0 * math.cos(s.t)
    out = [phase_identity_residual(s.t, sample=s)]
    out.append(IdentityCheck("functional", s.t, abs(s.F - closed), s.F_bound + 2.0 * s.bound + _round(s.F, closed)))
    fc = 2.0 * s.f_c / den
    out.append(IdentityCheck("cosine", s.t, abs(s.F_c - fc), s.F_bound + 2.0 / den * s.bound + _round(s.F, fc)))
    fs = 6.0 * s.f_s / den
    out.append(IdentityCheck("sine", s.t, abs(s.F_s - fs), s.F_bound + 6.0 / den * s.bound + _round(s.F, fs)))
    return out


def _ineq(name, a, x, bx, c, y, by):
    # a |x| <= c |y| with |x|, |y| known to within bx, by
    return Inequality(name, a * abs(x), c * abs(y), a * bx + c * by + _round(x, y))


def sandwich_check(t: float, cfg: QuadratureConfig = QuadratureConfig(), sample: Optional[TransformSample] = None) -> SandwichReport:
    """Two-sided comparisons between the unit-interval and half-line transforms.

    Uses the directly computed ``F`` so the inequalities are a genuine test
    rather than a consequence of how ``F`` was built.
    """
    s = sample if sample is not None and sample.direct else infinite_transform_direct(t, cfg)
    b, B = s.bound, s.F_bound
    qs = [
        _ineq("|F|/2 <= |f|", 0.5, s.F, B, 1.0, s.f, b),
        _ineq("|f| <= 3|F|/2", 1.0, s.f, b, 1.5, s.F, B),
        _ineq("|F_c|/2 <= |f_c|", 0.5, s.F_c, B, 1.0, s.f_c, b),
        _ineq("|f_c| <= 9|F_c|/2", 1.0, s.f_c, b, 4.5, s.F_c, B),
        _ineq("|F_s|/6 <= |f_s|", 1.0 / 6.0, s.F_s, B, 1.0, s.f_s, b),
        _ineq("|f_s| <= 3|F_s|/2", 1.0, s.f_s, b, 1.5, s.F_s, B),
    ]
    return SandwichReport(s.t, qs)


# ---------------------------------------------------------------------------
# tail roots


_BRANCH_LEVEL = {"cos": 1.0 / 8.0, "sin": 5.0 / 8.0}


def tail_factor(branch: str, t: float) -> float:
    """``int_1^inf cos(xt) d? = tail_factor('cos', t) * f_c(t)`` (likewise for sin)."""
    s2 = math.sin(t / 2) ** 2
    if branch == "cos":
        return (1.0 - 8.0 * s2) / (1.0 + 8.0 * s2)
    if branch == "sin":
        return (5.0 - 8.0 * s2) / (1.0 + 8.0 * s2)
    raise ValueError(f"unknown branch {branch!r}")


def tail_roots(branch: str, count: int, xtol: float = 1e-12) -> List[float]:
    """First ``count`` positive zeros of ``tail_factor(branch, .)``.

    ``sin^2(t/2)`` is monotone on each ``[j pi, (j+1) pi]`` so every such
    interval brackets exactly one zero.
    """
    if branch not in _BRANCH_LEVEL:
        raise ValueError(f"unknown branch {branch!r}")
    if count < 1:
        raise ValueError("count must be >= 1")
    level = _BRANCH_LEVEL[branch]
    h = lambda t: level - math.sin(t / 2) ** 2  # noqa: E731
    return [bisect(h, j * math.pi, (j + 1) * math.pi, xtol=xtol, maxiter=200) for j in range(count)]


def tail_integral(branch: str, t: float, cfg: QuadratureConfig = QuadratureConfig()) -> CertifiedValue:
    """``int_1^inf cos(xt) d?`` or ``int_1^inf sin(xt) d?`` through the ``1/u`` pushforward."""
    if branch not in _BRANCH_LEVEL:
        raise ValueError(f"unknown branch {branch!r}")
    r = tail_pushforward_integrate(exponential(float(t)), cfg)
    v = complex(r.value)
    part = v.real if branch == "cos" else v.imag
    return CertifiedValue(part, r.bound, r.converged)


# ---------------------------------------------------------------------------
# Salem coefficients


def salem_coefficient(n: int, cfg: QuadratureConfig = QuadratureConfig()) -> SalemRecord:
    if n < 1:
        raise ValueError("n must be >= 1")
    t = 2.0 * math.pi * n
    s = finite_transform(t, cfg)
    return SalemRecord(int(n), t, s.f_c, s.f_s, s.bound, s.converged)


def decay_diagnostics(records: Sequence[SalemRecord]):
    """Running tail supremum of ``|d_n|`` and a log-log slope fit of it."""
    d = np.abs([r.d_n for r in records])
    tail = np.maximum.accumulate(d[::-1])[::-1]
    n = np.array([r.n for r in records], dtype=float)
    ok = tail > 0
    slope = math.nan
    if ok.sum() >= 2:
        slope = float(np.polyfit(np.log(n[ok]), np.log(tail[ok]), 1)[0])
    return [float(v) for v in tail], slope


def salem_scan(n_max: int, cfg: QuadratureConfig = QuadratureConfig(), parallelism: int = 1, n_min: int = 1) -> SalemScan:
    """``d_n`` for ``n = n_min..n_max``; identical output for any ``parallelism``."""
    if n_max < n_min or n_min < 1:
        raise ValueError("need 1 <= n_min <= n_max")
    records = parallel_map(partial(salem_coefficient, cfg=cfg), range(n_min, n_max + 1), parallelism)
    tail, slope = decay_diagnostics(records)
    return SalemScan(records, tail, slope, [r.n for r in records if not r.converged])
