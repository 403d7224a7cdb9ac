r"""Certified Riemann-Stieltjes quadrature against ``d?``.

The measure ``d?`` is self-similar along the Stern-Brocot tree.  A cylinder
``J = [p/q, p'/q']`` of depth ``k`` (``p'q - pq' = 1``) is the image of
``[0, 1]`` under the Möbius map

.. math::
    M_J(u) = \frac{p (1-u) + p' u}{q (1-u) + q' u},

which carries mediants to mediants, hence

.. math::
    \int_J g \, d? = 2^{-k} \int_0^1 g(M_J(u)) \, d?(u).

For ``g`` analytic near ``J`` the right side is expanded in powers of
``u - 1/2`` and integrated against the central moments of ``d?`` (computed
once, by solving the same self-similarity as a linear fixed point).  Cauchy
estimates on a disk around ``u = 1/2`` bound the truncated tail, so every
cylinder contributes a value and a rigorous error bound.  Where no useful
disk exists (wild oscillation, singular endpoints) the cylinder falls back
to ``g(mediant) * mass`` with a ``mass * oscillation`` bound, which is also
available on its own as an independent oracle.

Refinement is worst-first on the local bounds with a stable left-to-right
tie break, and the final sums use ``math.fsum``, so results do not depend on
evaluation order or chunking.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Optional

import numpy as np

from .certified import CertifiedValue
from .minkowski import DyadicRational, box_inverse

__all__ = [
    "Cylinder",
    "QuadratureConfig",
    "Integrand",
    "root_partition",
    "integrate",
    "integrate_detailed",
    "integrate_uniform",
    "integrate_inverse_cdf",
    "integrate_lebesgue",
    "central_moments",
    "moment",
    "moment_complement",
    "tail_pushforward_integrate",
    "exponential",
    "power",
    "power_complement",
    "central_power",
    "reciprocal",
    "constant",
    "from_oscillation",
]

DEGREE = 24  # Taylor degree per cylinder
SAMPLES = 64  # FFT points on the sampling circle
_R_CANDIDATES = (0.56, 0.65, 0.8, 1.0, 1.3, 1.7, 2.2, 3.0, 4.5, 7.0)
_EPS = np.finfo(float).eps
_INT64_SAFE = 2**61
MAX_LEAVES = 4_000_000
SPLIT_FRACTION = 0.1
# give up once the leaf count grows this much past the best partition without
# improving the total bound by 10%
STALL_GROWTH = 16
STALL_MIN_LEAVES = 20_000
STALL_ROUNDS = 400
# a split whose children are jointly LOOKAHEAD_RATIO times worse than the parent
# is refined locally up to this many leaves before the parent is kept and frozen;
# the cap grows fourfold, up to LOOKAHEAD_MAX, whenever frozen leaves hold most
# of the remaining bound
LOOKAHEAD_LEAVES = 256
LOOKAHEAD_MAX = 16_384
LOOKAHEAD_RATIO = 2.0
# total leaf evaluations spent in lookaheads by one integral
LOOKAHEAD_BUDGET = 400_000


@dataclass(frozen=True)
class QuadratureConfig:
    tol: float = 1e-10
    max_depth: int = 64
    parallel_grain: int = 8192
    workers: int = 1

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not 0 <= self.max_depth <= 4096:
            raise ValueError("max_depth must lie in [0, 4096]")
        if self.parallel_grain < 1 or self.workers < 1:
            raise ValueError("parallel_grain and workers must be >= 1")

    def with_tol(self, tol: float) -> "QuadratureConfig":
        return QuadratureConfig(tol, self.max_depth, self.parallel_grain, self.workers)


# ---------------------------------------------------------------------------
# cylinders


@dataclass(frozen=True)
class Cylinder:
    """Stern-Brocot interval ``[p/q, p'/q']`` with ``?``-image ``[index, index+1] / 2**depth``."""

    p: int
    q: int
    p2: int
    q2: int
    depth: int = 0
    index: int = 0

    @property
    def left(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def right(self) -> Fraction:
        return Fraction(self.p2, self.q2)

    @property
    def mass(self) -> DyadicRational:
        return DyadicRational(1, self.depth)

    @property
    def q_left(self) -> DyadicRational:
        return DyadicRational(self.index, self.depth)

    @property
    def mediant(self) -> Fraction:
        return Fraction(self.p + self.p2, self.q + self.q2)

    def determinant(self) -> int:
        return self.p2 * self.q - self.p * self.q2

    def children(self):
        mp, mq = self.p + self.p2, self.q + self.q2
        k, j = self.depth + 1, 2 * self.index
        return (Cylinder(self.p, self.q, mp, mq, k, j), Cylinder(mp, mq, self.p2, self.q2, k, j + 1))


ROOT = Cylinder(0, 1, 1, 1, 0, 0)


def root_partition(depth: int, max_depth: int = 4096) -> List[Cylinder]:
    """The ``2**depth`` cylinders of the given depth, left to right."""
    if not 0 <= depth <= max_depth:
        raise ValueError(f"depth {depth} outside [0, {max_depth}]")
    level = [ROOT]
    for _ in range(depth):
        level = [c for cyl in level for c in cyl.children()]
    return level


# ---------------------------------------------------------------------------
# integrands


@dataclass(frozen=True)
class Integrand:
    """Vectorised integrand with the bounds the quadrature needs.

    func
        ``g(x)`` on arrays; when ``sup_abs`` is given it must accept complex
        arrays and be analytic wherever ``sup_abs`` is finite.
    sup_abs(center, radius)
        upper bound of ``|g|`` on the closed disk (``inf`` if ``g`` is not
        analytic there).
    osc(a, b)
        upper bound of ``sup |g(x) - g(y)|`` over ``x, y`` in ``[a, b]``.
    sup_real(a, b)
        upper bound of ``|g|`` on ``[a, b]``.
    edge(a, b, depth)
        upper bound of ``int_J |g| dmu`` for cylinders touching a singular
        endpoint (``nan`` where it does not apply); ``mu`` is the measure of
        ``edge_mode`` (``d?`` by default).
    """

    func: Callable[[np.ndarray], np.ndarray]
    sup_abs: Optional[Callable] = None
    osc: Optional[Callable] = None
    sup_real: Optional[Callable] = None
    edge: Optional[Callable] = None
    is_real: bool = False
    name: str = "g"
    edge_mode: str = "stieltjes"


def from_oscillation(func, osc, name="g", is_real=False) -> Integrand:
    """Integrand known only through values and an oscillation estimator."""
    return Integrand(func=func, osc=osc, is_real=is_real, name=name)


def constant(c: float = 1.0) -> Integrand:
    return Integrand(
        func=lambda x: np.full(np.shape(x), c, dtype=np.result_type(x, float)),
        sup_abs=lambda cen, rad: np.full(np.shape(cen), abs(c)),
        osc=lambda a, b: np.zeros(np.shape(a)),
        sup_real=lambda a, b: np.full(np.shape(a), abs(c)),
        is_real=True,
        name=f"{c}",
    )


def exponential(t: float, k: int = 0) -> Integrand:
    """``(i x)**k * exp(i x t)``."""
    t = float(t)
    at = abs(t)
    ik = 1j**k

    def func(x):
        return ik * x**k * np.exp(1j * t * x) if k else np.exp(1j * t * x)

    def sup_abs(cen, rad):
        return (np.abs(cen) + rad) ** k * np.exp(at * (np.abs(np.imag(cen)) + rad))

    def osc(a, b):
        # |d/dx (x^k e^{ixt})| <= k x^{k-1} + |t| x^k on [0, inf)
        hi = np.maximum(np.abs(a), np.abs(b))
        with np.errstate(invalid="ignore"):
            lip = (k * hi ** max(k - 1, 0) if k else 0.0) + at * hi**k
            return np.minimum(2.0 * hi**k, lip * (b - a))

    def sup_real(a, b):
        return np.maximum(np.abs(a), np.abs(b)) ** k

    return Integrand(func, sup_abs, osc, sup_real, None, False, f"(ix)^{k} e^(ixt), t={t}")


def central_power(j: int) -> Integrand:
    """``(x - 1/2)**j``."""
    return Integrand(
        func=lambda x: (x - 0.5) ** j,
        sup_abs=lambda cen, rad: (np.abs(cen - 0.5) + rad) ** j,
        osc=lambda a, b: np.abs((b - 0.5) ** j - (a - 0.5) ** j) if j % 2 else np.maximum(np.abs(a - 0.5), np.abs(b - 0.5)) ** j,
        sup_real=lambda a, b: np.maximum(np.abs(a - 0.5), np.abs(b - 0.5)) ** j,
        is_real=True,
        name=f"(x-1/2)^{j}",
    )


def _edge_chain_bound(k, lam):
    # sum_{m >= k+1} (m+1)^lam 2^{-m}  for lam >= 0 (cylinder [0, 1/(k+1)])
    k = np.asarray(k, dtype=float)
    m = k[..., None] + 1.0 + np.arange(400.0)
    terms = (m + 1.0) ** lam * np.exp2(-m)
    head = terms.sum(axis=-1)
    m_end = k + 401.0
    # ratio of consecutive terms <= ((m+2)/(m+1))^lam / 2 <= 3/4 beyond m_end
    tail = (m_end + 1.0) ** lam * np.exp2(-m_end) * 4.0
    return head + tail


def power(lam: float) -> Integrand:
    """``x**lam`` on (0, 1]; negative ``lam`` handled at the edge cylinders."""
    lam = float(lam)
    integer = lam >= 0 and lam == int(lam)

    def func(x):
        if integer:
            return x ** int(lam)
        return np.power(x.astype(complex) if np.iscomplexobj(x) else x, lam)

    def sup_abs(cen, rad):
        cen = np.real(cen)
        if integer:
            return (np.abs(cen) + rad) ** lam
        near = cen - rad
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (cen + rad) ** lam if lam >= 0 else np.abs(near) ** lam
        return np.where(near > 0, out, np.inf)

    def osc(a, b):
        with np.errstate(divide="ignore"):
            return np.abs(np.power(b, lam) - np.power(a, lam))

    def sup_real(a, b):
        with np.errstate(divide="ignore"):
            return np.maximum(np.power(a, lam), np.power(b, lam))

    def edge(a, b, depth):
        out = np.full(np.shape(a), np.nan)
        left = a == 0
        if lam < 0 and np.any(left):
            out[left] = _edge_chain_bound(depth[left], -lam)
        return out

    return Integrand(func, sup_abs, osc, sup_real, edge, True, f"x^{lam}")


def power_complement(lam: float) -> Integrand:
    """``(1 - x)**lam``; the singular edge is the cylinder ``[k/(k+1), 1]``."""
    inner = power(lam)

    def func(x):
        return inner.func(1.0 - x)

    def sup_abs(cen, rad):
        return inner.sup_abs(1.0 - np.real(cen), rad)

    def osc(a, b):
        return inner.osc(1.0 - b, 1.0 - a)

    def sup_real(a, b):
        return inner.sup_real(1.0 - b, 1.0 - a)

    def edge(a, b, depth):
        out = np.full(np.shape(a), np.nan)
        right = b == 1
        if lam < 0 and np.any(right):
            out[right] = _edge_chain_bound(depth[right], -lam)
        return out

    return Integrand(func, sup_abs, osc, sup_real, edge, True, f"(1-x)^{lam}")


def reciprocal(g: Integrand) -> Integrand:
    """``u -> g(1/u)``: pushes ``int_1^inf g d?`` onto the unit interval."""

    def func(u):
        with np.errstate(divide="ignore", invalid="ignore"):
            return g.func(1.0 / u)

    sup_abs = None
    if g.sup_abs is not None:

        def sup_abs(cen, rad):
            # 1/z maps the disk |z - c| <= r (0 outside) to center conj(c)/D, radius r/D
            d = np.abs(cen) ** 2 - rad**2
            ok = d > 0
            safe = np.where(ok, d, 1.0)
            out = g.sup_abs(np.conj(cen) / safe, rad / safe)
            return np.where(ok, out, np.inf)

    osc = None
    if g.osc is not None:

        def osc(a, b):
            with np.errstate(divide="ignore"):
                return g.osc(1.0 / b, 1.0 / a)

    sup_real = None
    if g.sup_real is not None:

        def sup_real(a, b):
            with np.errstate(divide="ignore"):
                return g.sup_real(1.0 / b, 1.0 / a)

    return Integrand(func, sup_abs, osc, sup_real, None, g.is_real, f"{g.name} at 1/u")


# ---------------------------------------------------------------------------
# central moments of d?


@dataclass(frozen=True)
class Moments:
    """Central moments ``cm[j] = int (u - 1/2)^j d?(u)`` and derived tables."""

    cm: np.ndarray
    cm_error: float
    lebesgue: np.ndarray  # int_0^1 (u - 1/2)^j du
    qm_weighted: np.ndarray  # int_0^1 ?(u) (u - 1/2)^j du
    leaves: int


def _float_endpoints(p, q, p2, q2):
    return (np.asarray(p, dtype=float), np.asarray(q, dtype=float), np.asarray(p2, dtype=float), np.asarray(q2, dtype=float))


def _disk_images(A, B, da, db, R):
    """Image disk of ``|s| <= R`` under ``s -> (A + da s) / (B + db s)``."""
    mp = (A + da * R) / (B + db * R)
    mm = (A - da * R) / (B - db * R)
    return 0.5 * (mp + mm), 0.5 * np.abs(mp - mm)


def _split(arrs, mask):
    """Replace every selected leaf by its two children, keeping left-to-right order."""
    p, q, p2, q2, depth, qleft = arrs
    idx = np.nonzero(mask)[0]
    mp = p[idx] + p2[idx]
    mq = q[idx] + q2[idx]
    counts = np.where(mask, 2, 1)
    pos = np.concatenate(([0], np.cumsum(counts)[:-1]))
    total = int(counts.sum())
    dtype = p.dtype
    out = [np.empty(total, dtype=dtype) for _ in range(4)] + [np.empty(total, dtype=np.int64), np.empty(total)]
    keep = ~mask
    for dst, src in zip(out, arrs):
        dst[pos[keep]] = src[keep]
    lpos = pos[idx]
    rpos = lpos + 1
    out[0][lpos], out[1][lpos], out[2][lpos], out[3][lpos] = p[idx], q[idx], mp, mq
    out[0][rpos], out[1][rpos], out[2][rpos], out[3][rpos] = mp, mq, p2[idx], q2[idx]
    d1 = depth[idx] + 1
    out[4][lpos] = d1
    out[4][rpos] = d1
    out[5][lpos] = qleft[idx]
    out[5][rpos] = qleft[idx] + np.exp2(-d1.astype(float))
    if out[0].dtype != object and total and max(out[1].max(), out[3].max()) > _INT64_SAFE // 4:
        out[:4] = [a.astype(object) for a in out[:4]]
    return out


def _uniform_level(depth: int):
    p = np.array([0], dtype=np.int64)
    q = np.array([1], dtype=np.int64)
    p2 = np.array([1], dtype=np.int64)
    q2 = np.array([1], dtype=np.int64)
    arrs = [p, q, p2, q2, np.zeros(1, dtype=np.int64), np.zeros(1)]
    for _ in range(depth):
        arrs = _split(arrs, np.ones(len(arrs[0]), dtype=bool))
    return arrs


@lru_cache(maxsize=None)
def central_moments(degree: Optional[int] = None, leaf_tol: float = 1e-20) -> Moments:
    """Solve ``cm = A cm`` from the two-map self-similarity of ``d?``.

    ``A`` collects, over an adaptive Stern-Brocot partition, the Taylor
    coefficients of ``(M_J(1/2 + s) - 1/2)^j`` weighted by cylinder mass.
    Cylinders without a good analytic disk contribute the constant term
    ``(mediant - 1/2)^j`` with a ``mass * oscillation`` error.
    """
    J = DEGREE + 2 if degree is None else degree
    N = SAMPLES
    arrs = _uniform_level(6)
    final_taylor = []  # (mass, T) blocks
    final_mid = []
    err = 0.0
    while len(arrs[0]):
        p, q, p2, q2, depth, qleft = arrs
        pf, qf, p2f, q2f = _float_endpoints(p, q, p2, q2)
        mass = np.exp2(-depth.astype(float))
        A, B, da, db = 0.5 * (pf + p2f), 0.5 * (qf + q2f), p2f - pf, q2f - qf
        with np.errstate(divide="ignore"):
            pole = np.where(db != 0, B / np.abs(db), np.inf)
        best = np.full(len(p), np.inf)
        bestR = np.full(len(p), np.nan)
        for R in _R_CANDIDATES:
            ok = R < 0.9 * pole
            with np.errstate(all="ignore"):
                cen, rad = _disk_images(A, B, da, db, R)
                H = np.maximum(1.0, np.abs(cen - 0.5) + rad) ** J
                ratio = 0.5 / R
                e = mass * H * ratio ** (J + 1) / (1 - ratio) * 2.0
            e = np.where(ok, e, np.inf)
            better = e < best
            best = np.where(better, e, best)
            bestR = np.where(better, R, bestR)
        a, b = pf / qf, p2f / q2f
        mid_err = mass * (b - a)  # |d/dx (x-1/2)^j| <= j 2^{1-j} <= 1
        use_mid = mid_err < best
        local = np.minimum(best, mid_err)
        done = (local <= leaf_tol) | (depth >= 1000)
        # finalize
        tay = done & ~use_mid
        if np.any(tay):
            final_taylor.append((mass[tay], A[tay], B[tay], da[tay], db[tay], bestR[tay]))
        mid = done & use_mid
        if np.any(mid):
            final_mid.append((mass[mid], (A[mid] / B[mid])))
        err += math.fsum(local[done])
        arrs = [x[~done] for x in arrs]
        if len(arrs[0]):
            arrs = _split(arrs, np.ones(len(arrs[0]), dtype=bool))
    # assemble A
    Amat = np.zeros((J + 1, J + 1))
    leaves = 0
    jj = np.arange(J + 1)
    for mass, A, B, da, db, R in final_taylor:
        leaves += len(mass)
        rho = np.sqrt(0.5 * R)
        s = rho[:, None] * np.exp(2j * np.pi * np.arange(N) / N)[None, :]
        x = (A[:, None] + da[:, None] * s) / (B[:, None] + db[:, None] * s)
        pw = (x - 0.5)[:, None, :] ** jj[None, :, None]  # (L, J+1, N)
        coef = np.fft.fft(pw, axis=2)[:, :, : J + 1] / N
        coef = coef / rho[:, None, None] ** jj[None, None, :]
        Amat += np.einsum("l,lji->ji", mass, coef.real)
    for mass, m in final_mid:
        leaves += len(mass)
        Amat[:, 0] += np.einsum("l,lj->j", mass, (m[:, None] - 0.5) ** jj[None, :])
    Amat[0, :] = 0.0
    Amat[0, 0] = 1.0
    M11 = np.eye(J) - Amat[1:, 1:]
    sol = np.linalg.solve(M11, Amat[1:, 0])
    cm = np.concatenate(([1.0], sol))
    amp = np.abs(np.linalg.inv(M11)).sum(axis=1).max()
    cm_error = amp * (err + 64 * _EPS)
    # exact symmetry of d? about 1/2
    cm[1::2] = 0.0
    leb = np.array([0.5**j / (j + 1) if j % 2 == 0 else 0.0 for j in range(J + 1)])
    qmw = np.zeros(J)
    for j in range(J):
        qmw[j] = (0.5 ** (j + 1) - cm[j + 1]) / (j + 1)
    return Moments(cm, float(cm_error), leb, qmw, leaves)


_installed: Optional[Moments] = None


def install_moments(mom: Optional[Moments]) -> None:
    """Use a precomputed moment table (worker processes receive the parent's)."""
    global _installed
    _installed = mom


def default_moments() -> Moments:
    return _installed if _installed is not None else central_moments()


# ---------------------------------------------------------------------------
# per-cylinder evaluation

STIELTJES = "stieltjes"  # int g d?
LEBESGUE_QM = "lebesgue-qm"  # int ?(x) g(x) dx
LEBESGUE = "lebesgue"  # int g(x) dx


_INTERVAL_R = (1.5, 2.0, 3.0, 5.0, 8.0)
_LEGENDRE_MOMENTS = np.array([2.0 / (j + 1) if j % 2 == 0 else 0.0 for j in range(DEGREE + 1)])


def _interval_rule(g: Integrand, a: np.ndarray, b: np.ndarray):
    """``int_a^b g(x) dx`` by a Taylor expansion about the midpoint.

    Coefficients come from ``SAMPLES`` points on a circle of radius
    ``sqrt(R) h`` and are controlled by ``sup |g|`` on the circle of radius
    ``R h`` (``h`` the half length).
    """
    L = len(a)
    m, h = 0.5 * (a + b), 0.5 * (b - a)
    best = np.full(L, np.inf)
    bestR = np.full(L, np.nan)
    for R in _INTERVAL_R:
        rho = math.sqrt(R)
        with np.errstate(all="ignore"):
            H = g.sup_abs(m.astype(complex), R * h)
            ar = (rho / R) ** SAMPLES
            trunc = 2.0 * R ** -(DEGREE + 1) / (1 - 1 / R)
            alias = 2.0 * ar / ((1 - ar) * (1 - 1 / R))
            rnd = 32 * _EPS / (1 - 1 / rho)
            e = h * H * (trunc + alias + rnd)
        e = np.where(np.isfinite(e), e, np.inf)
        better = e < best
        best = np.where(better, e, best)
        bestR = np.where(better, R, bestR)
    value = np.zeros(L, dtype=complex)
    idx = np.nonzero(np.isfinite(best))[0]
    if len(idx):
        rho = np.sqrt(bestR[idx])
        s = rho[:, None] * np.exp(2j * np.pi * np.arange(SAMPLES) / SAMPLES)[None, :]
        with np.errstate(all="ignore"):
            vals = g.func(m[idx, None] + h[idx, None] * s)
        coef = np.fft.fft(vals, axis=1)[:, : DEGREE + 1] / SAMPLES
        coef = coef / rho[:, None] ** np.arange(DEGREE + 1)[None, :]
        value[idx] = h[idx] * (coef @ _LEGENDRE_MOMENTS)
    return value, best


def _evaluate(arrs, g: Integrand, mode: str, mom: Moments):
    p, q, p2, q2, depth, qleft = arrs
    L = len(p)
    pf, qf, p2f, q2f = _float_endpoints(p, q, p2, q2)
    mass = np.exp2(-depth.astype(float))
    a, b = pf / qf, p2f / q2f
    A, B, da, db = 0.5 * (pf + p2f), 0.5 * (qf + q2f), p2f - pf, q2f - qf
    if mode == STIELTJES:
        weight = mass
        mom_vec = mom.cm[: DEGREE + 1]
        mom_err = mom.cm_error
    elif mode == LEBESGUE_QM:
        weight = qleft + mass
        mom_vec = None
        mom_err = mom.cm_error
    else:
        weight = np.ones(L)
        mom_vec = mom.lebesgue[: DEGREE + 1]
        mom_err = 0.0

    value = np.zeros(L, dtype=complex)
    bound = np.full(L, np.inf)

    # crude candidate: value 0, bound weight * |J| * sup|g|
    if g.sup_real is not None:
        with np.errstate(all="ignore"):
            s = g.sup_real(a, b)
            crude = weight * s if mode == STIELTJES else weight * (b - a) * s
        crude = np.where(np.isfinite(crude), crude, np.inf)
        bound = np.minimum(bound, crude)

    # singular edges
    if g.edge is not None and mode == g.edge_mode:
        e = g.edge(a, b, depth)
        e = np.where(np.isnan(e), np.inf, e)
        bound = np.minimum(bound, e)

    # midpoint at the mediant
    if g.osc is not None and mode == STIELTJES:
        with np.errstate(all="ignore"):
            o = mass * g.osc(a, b)
        o = np.where(np.isfinite(o), o, np.inf)
        use = o < bound
        if np.any(use):
            m = (A / B)[use]
            value[use] = mass[use] * g.func(m)
            bound[use] = o[use]

    # analytic candidate
    if g.sup_abs is not None:
        with np.errstate(divide="ignore"):
            pole = np.where(db != 0, B / np.abs(db), np.inf)
        best = np.full(L, np.inf)
        bestR = np.full(L, np.nan)
        bestH = np.full(L, np.nan)
        for R in _R_CANDIDATES:
            ok = R < 0.9 * pole
            if not np.any(ok):
                continue
            with np.errstate(all="ignore"):
                cen, rad = _disk_images(A, B, da, db, R)
                H = g.sup_abs(cen, rad)
                if mode != STIELTJES:
                    H = H / (B - np.abs(db) * R) ** 2
                ratio = 0.5 / R
                rho = math.sqrt(0.5 * R)
                ar = (rho / R) ** SAMPLES
                trunc = ratio ** (DEGREE + 1) / (1 - ratio)
                alias = ar / (1 - ar) / (1 - ratio)
                rnd = 16 * _EPS / (1 - 0.5 / rho)
                moms = mom_err / (1 - ratio) * 4
                e = weight * H * (trunc + alias + rnd + moms)
            e = np.where(ok & np.isfinite(e), e, np.inf)
            better = e < best
            best = np.where(better, e, best)
            bestR = np.where(better, R, bestR)
            bestH = np.where(better, H, bestH)
        use = best < bound
        if np.any(use):
            idx = np.nonzero(use)[0]
            R = bestR[idx]
            rho = np.sqrt(0.5 * R)
            s = rho[:, None] * np.exp(2j * np.pi * np.arange(SAMPLES) / SAMPLES)[None, :]
            den = B[idx, None] + db[idx, None] * s
            x = (A[idx, None] + da[idx, None] * s) / den
            h = g.func(x)
            if mode != STIELTJES:
                h = h / den**2
            coef = np.fft.fft(h, axis=1)[:, : DEGREE + 1] / SAMPLES
            coef = coef / rho[:, None] ** np.arange(DEGREE + 1)[None, :]
            if mode == STIELTJES:
                v = mass[idx] * (coef @ mom_vec)
            elif mode == LEBESGUE_QM:
                v = qleft[idx] * (coef @ mom.lebesgue[: DEGREE + 1]) + mass[idx] * (coef @ mom.qm_weighted[: DEGREE + 1])
            else:
                v = coef @ mom_vec
            value[idx] = v
            bound[idx] = best[idx]

    # plain-interval rule.  For ?(x) dx use qleft <= ? <= qleft + mass on J:
    #   int_J ?g dx = (qleft + mass/2) int_J g dx + err,  |err| <= mass/2 |J| sup_J |g|,
    # which decays geometrically along chains where the Moebius rule cannot
    if g.sup_abs is not None and mode != STIELTJES:
        iv, ib = _interval_rule(g, a, b)
        if mode == LEBESGUE_QM:
            with np.errstate(all="ignore"):
                sup = g.sup_real(a, b) if g.sup_real is not None else g.sup_abs(0.5 * (a + b) + 0j, 0.5 * (b - a))
                w = qleft + 0.5 * mass
                iv = w * iv
                ib = w * ib + 0.5 * mass * (b - a) * sup
            ib = np.where(np.isfinite(ib), ib, np.inf)
        use = ib < bound
        value[use] = iv[use]
        bound[use] = ib[use]
    return value, bound


def _evaluate_chunked(arrs, g, mode, mom, cfg: QuadratureConfig):
    L = len(arrs[0])
    grain = cfg.parallel_grain
    if L <= grain:
        return _evaluate(arrs, g, mode, mom)
    starts = list(range(0, L, grain))
    chunks = [[x[s : s + grain] for x in arrs] for s in starts]
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as ex:
            parts = list(ex.map(lambda c: _evaluate(c, g, mode, mom), chunks))
    else:
        parts = [_evaluate(c, g, mode, mom) for c in chunks]
    return np.concatenate([v for v, _ in parts]), np.concatenate([b for _, b in parts])


@dataclass
class QuadratureInfo:
    leaves: int = 0
    max_depth: int = 0
    rounds: int = 0
    hit_max_depth: bool = False
    hit_leaf_cap: bool = False
    stalled: bool = False
    extra: dict = field(default_factory=dict)


def _fsum_complex(v):
    return complex(math.fsum(v.real), math.fsum(v.imag))


def _lookahead(arrs, value, bound, target, g, mode, mom, cfg: QuadratureConfig, cap: int, budget: list):
    """Refine a small subtree worst-first until its total bound is below ``target``.

    Returns ``None`` when the leaf, depth or evaluation cap is reached first.
    ``budget[0]`` counts down the leaf evaluations still allowed.
    """
    while math.fsum(bound) > target:
        mask = (bound >= 0.25 * bound.max()) & (arrs[4] < cfg.max_depth)
        n_new = 2 * int(mask.sum())
        if not np.any(mask) or len(bound) + n_new // 2 > cap or n_new > budget[0]:
            return None
        budget[0] -= n_new
        new = _split(arrs, mask)
        child_mask = np.repeat(mask, np.where(mask, 2, 1))
        cv, cb = _evaluate([x[child_mask] for x in new], g, mode, mom)
        v = np.empty(len(child_mask), dtype=complex)
        b = np.empty(len(child_mask))
        v[child_mask], b[child_mask] = cv, cb
        v[~child_mask], b[~child_mask] = value[~mask], bound[~mask]
        arrs, value, bound = new, v, b
    return arrs, value, bound


def _splice(arrs, value, bound, frozen, pairs, pieces):
    """Replace each child pair ``pairs[k]`` (start index) by ``pieces[k]``."""
    cuts, parts = 0, []
    for start, piece in zip(pairs, pieces):
        parts.append(([x[cuts:start] for x in arrs], value[cuts:start], bound[cuts:start], frozen[cuts:start]))
        parts.append(piece)
        cuts = start + 2
    parts.append(([x[cuts:] for x in arrs], value[cuts:], bound[cuts:], frozen[cuts:]))
    out_arrs = [np.concatenate([pa[0][i] for pa in parts]) for i in range(len(arrs))]
    if any(pa[0][0].dtype == object for pa in parts):
        out_arrs[:4] = [a.astype(object) for a in out_arrs[:4]]
    return (out_arrs, np.concatenate([pa[1] for pa in parts]), np.concatenate([pa[2] for pa in parts]),
            np.concatenate([pa[3] for pa in parts]))


def integrate_detailed(g: Integrand, cfg: QuadratureConfig = QuadratureConfig(), mode: str = STIELTJES, start_depth: int = 4):
    """Adaptive certified integral; returns ``(CertifiedValue, QuadratureInfo)``."""
    mom = default_moments()
    arrs = _uniform_level(min(start_depth, cfg.max_depth))
    value, bound = _evaluate_chunked(arrs, g, mode, mom, cfg)
    info = QuadratureInfo()
    frozen = np.zeros(len(bound), dtype=bool)
    la_cap = LOOKAHEAD_LEAVES
    la_budget = [LOOKAHEAD_BUDGET]
    tol = cfg.tol
    best, best_leaves, best_round, snap_total = math.inf, 0, 0, math.inf
    while True:
        info.rounds += 1
        total = math.fsum(bound)
        if total <= tol:
            break
        if total < snap_total:
            snap_total, snapshot = total, (arrs, value, bound, frozen)
        if total < 0.9 * best:
            best, best_leaves, best_round = total, len(bound), info.rounds
        elif (len(bound) > max(STALL_GROWTH * best_leaves, STALL_MIN_LEAVES)
              or info.rounds - best_round > STALL_ROUNDS):
            # splits keep making things worse: fall back to the best partition seen
            info.stalled = True
            arrs, value, bound, frozen = snapshot
            break
        depth = arrs[4]
        can_thaw = la_cap < LOOKAHEAD_MAX and la_budget[0] > 0 and np.any(frozen & (depth < cfg.max_depth))
        if can_thaw and math.fsum(bound[frozen]) > 0.5 * total:
            frozen[:] = False
            la_cap *= 4
        splittable = (depth < cfg.max_depth) & ~frozen
        if not np.any(splittable & (bound > 0)):
            if can_thaw:
                frozen[:] = False
                la_cap *= 4
                continue
            info.hit_max_depth = True
            break
        # worst first among splittable leaves: split until they cover half the excess
        order = np.argsort(-np.where(splittable, bound, 0.0), kind="stable")
        csum = np.cumsum(bound[order])
        excess = total - 0.5 * tol
        n_split = int(np.searchsorted(csum, 0.5 * excess, side="left")) + 1
        # batch at least a fraction of the leaves over their even share of tol
        over = int(np.count_nonzero(bound > tol / len(bound)))
        n_split = max(n_split, int(SPLIT_FRACTION * over))
        mask = np.zeros(len(bound), dtype=bool)
        mask[order[:n_split]] = True
        mask &= splittable
        if not np.any(mask):
            info.hit_max_depth = True
            break
        if len(bound) + int(mask.sum()) > MAX_LEAVES:
            info.hit_leaf_cap = True
            break
        keep_v, keep_b = value[~mask], bound[~mask]
        old_v, old_b = value, bound
        new = _split(arrs, mask)
        child_mask = np.repeat(mask, np.where(mask, 2, 1))
        child_arrs = [x[child_mask] for x in new]
        cv, cb = _evaluate_chunked(child_arrs, g, mode, mom, cfg)
        value = np.empty(len(child_mask), dtype=complex)
        bound = np.empty(len(child_mask))
        value[child_mask], bound[child_mask] = cv, cb
        value[~child_mask], bound[~child_mask] = keep_v, keep_b
        frozen = np.repeat(frozen, np.where(mask, 2, 1))
        # splits that made things worse: look further down before accepting them
        parent_v, parent_b = old_v[mask], old_b[mask]
        worse = np.nonzero(cb.reshape(-1, 2).sum(axis=1) > LOOKAHEAD_RATIO * parent_b)[0]
        if len(worse):
            starts = np.nonzero(child_mask)[0][0::2]
            parents = [x[mask][worse] for x in arrs]
            pieces = []
            for j, k in enumerate(worse):
                sl = slice(2 * k, 2 * k + 2)
                sub = _lookahead([x[sl] for x in child_arrs], cv[sl], cb[sl], 0.5 * parent_b[k], g, mode, mom, cfg, la_cap, la_budget)
                if sub is None:
                    parent = [x[j : j + 1] for x in parents]
                    pieces.append((parent, parent_v[k : k + 1], parent_b[k : k + 1], np.ones(1, dtype=bool)))
                    info.extra["frozen"] = info.extra.get("frozen", 0) + 1
                else:
                    pieces.append(sub + (np.zeros(len(sub[1]), dtype=bool),))
            new, value, bound, frozen = _splice(new, value, bound, frozen, starts[worse], pieces)
        arrs = new
    info.leaves = len(bound)
    info.max_depth = int(arrs[4].max())
    total_bound = math.fsum(bound)
    # fsum of ~1e5 terms: correctly rounded; add a few ulps for the final rounding
    v = _fsum_complex(value)
    total_bound = total_bound * (1 + 1e-12) + 4 * _EPS * abs(v)
    total_bound = float(total_bound)
    ok = bool(total_bound <= tol)
    if g.is_real:
        return CertifiedValue(v.real, total_bound, ok), info
    return CertifiedValue(v, total_bound, ok), info


def integrate(g: Integrand, cfg: QuadratureConfig = QuadratureConfig()) -> CertifiedValue:
    """``int_0^1 g d?`` with ``|value - exact| <= bound``; ``converged`` reports ``bound <= tol``."""
    return integrate_detailed(g, cfg)[0]


def integrate_lebesgue(g: Integrand, cfg: QuadratureConfig = QuadratureConfig(), weighted: bool = True) -> CertifiedValue:
    """``int_0^1 ?(x) g(x) dx`` (``weighted``) or ``int_0^1 g(x) dx`` on the same cylinders."""
    return integrate_detailed(g, cfg, LEBESGUE_QM if weighted else LEBESGUE)[0]


def integrate_uniform(g: Integrand, depth: int, block: int = 18) -> CertifiedValue:
    """Midpoint (mediant) rule on all ``2**depth`` cylinders with ``mass * osc`` bounds.

    Shares nothing with the adaptive path except the tree itself; used as a
    brute-force oracle.
    """
    if g.osc is None:
        raise ValueError("uniform rule needs an oscillation estimator")
    top = max(0, depth - block)
    roots = _uniform_level(top)
    mass = math.ldexp(1.0, -depth)
    vals, oscs = [], []
    for i in range(len(roots[0])):
        sub = [x[i : i + 1] for x in roots]
        for _ in range(depth - top):
            sub = _split(sub, np.ones(len(sub[0]), dtype=bool))
        pf, qf, p2f, q2f = _float_endpoints(*sub[:4])
        with np.errstate(all="ignore"):
            vals.append(np.asarray(g.func((pf + p2f) / (qf + q2f)), dtype=complex))
            oscs.append(np.asarray(g.osc(pf / qf, p2f / q2f), dtype=float))
    v = _fsum_complex(np.concatenate(vals)) * mass
    bnd = math.fsum(np.concatenate(oscs)) * mass
    bnd = bnd * (1 + 1e-12) + 4 * _EPS * (abs(v) + 1.0)
    return CertifiedValue(v.real if g.is_real else v, bnd, True)


def integrate_inverse_cdf(g: Integrand, depth: int) -> CertifiedValue:
    """``int_0^1 g(?^{-1}(y)) dy`` by the midpoint rule on ``2**depth`` dyadic cells.

    Nodes and cell ends come from :func:`box_inverse`, not from the tree
    walk, so this is a cross-check oracle for the cylinder scheme.
    """
    if g.osc is None:
        raise ValueError("inverse-cdf rule needs an oscillation estimator")
    if not 0 <= depth <= 20:
        raise ValueError("depth must be in 0..20")
    n = 1 << depth
    ends = np.array([float(box_inverse(Fraction(k, n)).value) for k in range(n + 1)])
    mids = np.array([float(box_inverse(Fraction(2 * k + 1, 2 * n)).value) for k in range(n)])
    with np.errstate(all="ignore"):
        v = _fsum_complex(np.asarray(g.func(mids), dtype=complex)) / n
        bnd = math.fsum(np.asarray(g.osc(ends[:-1], ends[1:]), dtype=float)) / n
    bnd = bnd * (1 + 1e-12) + 4 * _EPS * (abs(v) + 1.0)
    return CertifiedValue(v.real if g.is_real else v, bnd, True)


# ---------------------------------------------------------------------------
# moments and the tail pushforward


def moment(lam: float, cfg: QuadratureConfig = QuadratureConfig()) -> CertifiedValue:
    """``int_0^1 x**lam d?(x)``, finite for every real ``lam``."""
    return integrate(power(lam), cfg)


def moment_complement(lam: float, cfg: QuadratureConfig = QuadratureConfig()) -> CertifiedValue:
    """``int_0^1 (1 - x)**lam d?(x)``."""
    return integrate(power_complement(lam), cfg)


def tail_pushforward_integrate(g: Integrand, cfg: QuadratureConfig = QuadratureConfig()) -> CertifiedValue:
    """``int_1^inf g(x) d?(x) = int_0^1 g(1/u) d?(u)`` (from ``?(x) + ?(1/x) = 2``)."""
    return integrate(reciprocal(g), cfg)
