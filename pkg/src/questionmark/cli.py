"""Command-line front end: ``questionmark <subcommand> ...``.

Exit codes: 0 success, 1 tolerance not reached, 2 usage error, 3 property
violation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import time
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .certified import CertifiedValue
from .minkowski import (
    GOLDEN,
    SQRT2_MINUS_1,
    PeriodicContinuedFraction,
    box_inverse,
    cf_encode,
    question_mark_exact,
    question_mark_extended,
)
from .stieltjes import QuadratureConfig

EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2, 3
PARALLELISM_ENV = "QUESTIONMARK_PARALLELISM"
SCAN_COLUMNS = ("n", "t", "d_n", "f_s", "bound")
NAMED_CONSTANTS = {"golden": GOLDEN, "sqrt2-1": SQRT2_MINUS_1}


class UsageError(ValueError):
    pass


def default_parallelism() -> int:
    env = os.environ.get(PARALLELISM_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise UsageError(f"{PARALLELISM_ENV} must be an integer, got {env!r}") from None
        if n < 1:
            raise UsageError(f"{PARALLELISM_ENV} must be >= 1")
        return n
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # not on Linux
        return os.cpu_count() or 1


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-10
    max_depth: int = 64
    parallelism: int = 1
    output_format: str = "text"
    seed: int = 0

    def __post_init__(self):
        if not self.tol > 0:
            raise UsageError("tol must be positive")
        if self.parallelism < 1:
            raise UsageError("parallelism must be >= 1")
        if not 1 <= self.max_depth <= 4096:
            raise UsageError("max_depth must be in 1..4096")
        if self.output_format not in ("csv", "json", "text"):
            raise UsageError(f"unknown output format {self.output_format!r}")

    @property
    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(tol=self.tol, max_depth=self.max_depth)


_CONFIG_TYPES = {f.name: f.type for f in fields(RunConfig)}


def read_config_file(path: str) -> Dict[str, object]:
    """``key = value`` lines; ``#`` starts a comment."""
    out: Dict[str, object] = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e.strerror}") from None
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{no}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_TYPES:
            raise UsageError(f"{path}:{no}: unknown key {key!r}")
        try:
            out[key] = {"float": float, "int": int}.get(_CONFIG_TYPES[key], str)(val)
        except ValueError:
            raise UsageError(f"{path}:{no}: bad value for {key}: {val!r}") from None
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    values: Dict[str, object] = {"parallelism": default_parallelism()}
    if args.config:
        values.update(read_config_file(args.config))
    for key in _CONFIG_TYPES:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return RunConfig(**values)


# ---------------------------------------------------------------------------
# input parsing


def parse_number(text: str):
    """``p/q``, a decimal (taken exactly), ``inf`` or a named constant."""
    s = text.strip().lower()
    if s in NAMED_CONSTANTS:
        return NAMED_CONSTANTS[s]
    if s in ("inf", "infinity"):
        return math.inf
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational, decimal or named constant: {text!r}") from None


def parse_real(text: str) -> float:
    v = parse_number(text)
    return float(v)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _fmt_value(cv: CertifiedValue) -> str:
    if cv.exact is not None:
        return str(cv.exact)
    v = cv.value
    if isinstance(v, complex):
        return f"{_fmt(v.real)}{'+' if v.imag >= 0 else '-'}{_fmt(abs(v.imag))}j +/- {cv.bound:.3g}"
    return f"{_fmt(v)} +/- {cv.bound:.3g}"


def _emit(obj: Dict[str, object], cfg: RunConfig, out=None):
    out = out or sys.stdout
    if cfg.output_format == "json":
        out.write(json.dumps(obj, default=_json_default) + "\n")
    elif cfg.output_format == "csv":
        keys = list(obj)
        out.write(",".join(keys) + "\n")
        out.write(",".join(_csv_cell(obj[k]) for k in keys) + "\n")
    else:
        for k, v in obj.items():
            out.write(f"{k}: {v if isinstance(v, str) else _csv_cell(v)}\n")


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(type(o))


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return _fmt(v)
    if isinstance(v, complex):
        return f"{_fmt(v.real)}{'+' if v.imag >= 0 else '-'}{_fmt(abs(v.imag))}j"
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_cell(x) for x in v)
    return str(v)


# ---------------------------------------------------------------------------
# scan files


def _scan_header(cfg: RunConfig) -> str:
    return f"# tol={cfg.tol!r} max_depth={cfg.max_depth} version={__version__}"


def emit_scan(records: Sequence, fmt: str, path: str, cfg: RunConfig = RunConfig()) -> None:
    """Write Salem records as CSV (``n,t,d_n,f_s,bound``) or JSON.

    Floats are written with 17 significant digits so that reading them back
    gives the same doubles.  Nothing is written for an empty list.
    """
    if not records:
        raise ValueError("no records to write")
    if fmt not in ("csv", "json"):
        raise ValueError(f"scan format must be csv or json, got {fmt!r}")
    rows = [(int(r.n), float(r.t), float(r.d_n), float(r.f_s_val), float(r.bound)) for r in records]
    if fmt == "csv":
        lines = [_scan_header(cfg), ",".join(SCAN_COLUMNS)]
        lines += [",".join([str(r[0])] + [_fmt(v) for v in r[1:]]) for r in rows]
        text = "\n".join(lines) + "\n"
    else:
        doc = {
            "tol": cfg.tol,
            "max_depth": cfg.max_depth,
            "version": __version__,
            "records": [dict(zip(SCAN_COLUMNS, r)) for r in rows],
        }
        text = json.dumps(doc, indent=1) + "\n"
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise OSError(e.errno, f"cannot write {path}: {e.strerror}") from None


def parse_scan(path: str):
    """Read a file written by :func:`emit_scan` back into ``SalemRecord`` objects."""
    from .fourier import SalemRecord

    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        rows = [tuple(r[k] for k in SCAN_COLUMNS) for r in json.loads(text)["records"]]
    else:
        lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        if tuple(lines[0].split(",")) != SCAN_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {lines[0]!r}")
        rows = [ln.split(",") for ln in lines[1:]]
    return [SalemRecord(int(r[0]), float(r[1]), float(r[2]), float(r[3]), float(r[4])) for r in rows]


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(args, cfg: RunConfig) -> int:
    x = args.x
    if isinstance(x, PeriodicContinuedFraction) or isinstance(x, Fraction) or x == math.inf:
        if isinstance(x, Fraction) and x < 0:
            raise UsageError("? is defined on [0, inf]")
        exact = question_mark_exact(x)
        _emit({"x": getattr(x, "name", None) or str(x), "value": str(exact)}, cfg)
        return EXIT_OK
    cv = question_mark_extended(x, cfg.tol)
    _emit({"x": str(x), "value": _fmt_value(cv)}, cfg)
    return EXIT_OK if cv.converged else EXIT_TOLERANCE


def cmd_inverse(args, cfg: RunConfig) -> int:
    y = args.y
    if isinstance(y, PeriodicContinuedFraction) or y == math.inf:
        raise UsageError("inverse needs a rational y in [0, 1]")
    cv = box_inverse(y, cfg.tol)
    _emit({"y": str(y), "x": _fmt_value(cv)}, cfg)
    return EXIT_OK if cv.converged else EXIT_TOLERANCE


def cmd_cf(args, cfg: RunConfig) -> int:
    x = args.x
    if isinstance(x, PeriodicContinuedFraction):
        pre = ", ".join(map(str, x.preperiod))
        per = ", ".join(map(str, x.period))
        _emit({"x": x.name, "digits": f"[{pre + '; ' if pre else ''}({per})...]"}, cfg)
        return EXIT_OK
    if x == math.inf:
        raise UsageError("cf needs x in [0, 1]")
    cf = cf_encode(x)
    _emit({"x": str(x), "digits": "[" + ", ".join(map(str, cf.digits)) + "]"}, cfg)
    return EXIT_OK


def cmd_moment(args, cfg: RunConfig) -> int:
    from .stieltjes import moment, moment_complement

    lam = float(args.lam)
    cv = (moment_complement if args.complement else moment)(lam, cfg.quadrature)
    _emit({"lambda": lam, "value": _fmt_value(cv)}, cfg)
    return EXIT_OK if cv.converged else EXIT_TOLERANCE


def cmd_transform(args, cfg: RunConfig) -> int:
    from .fourier import finite_transform, infinite_transform, infinite_transform_direct

    t = float(args.t)
    q = cfg.quadrature
    if args.kind in ("f", "fc", "fs"):
        s = finite_transform(t, q)
        v, b = {"f": s.f, "fc": s.f_c, "fs": s.f_s}[args.kind], s.bound
    else:
        s = (infinite_transform_direct if args.direct else infinite_transform)(t, q)
        v, b = {"F": s.F, "Fc": s.F_c, "Fs": s.F_s}[args.kind], s.F_bound
    if t == 0:
        # total masses 1 and 2, no sine part
        text = {"f": "1", "fc": "1", "F": "2", "Fc": "2"}.get(args.kind, "0")
    else:
        text = _fmt_value(CertifiedValue(v, float(b), s.converged))
    _emit({"t": t, "kind": args.kind, "value": text}, cfg)
    return EXIT_OK if s.converged else EXIT_TOLERANCE


def cmd_salem_scan(args, cfg: RunConfig) -> int:
    from .fourier import salem_scan

    fmt = "json" if cfg.output_format == "json" or args.out.endswith(".json") else "csv"
    scan = salem_scan(args.nmax, cfg.quadrature, cfg.parallelism, n_min=args.nmin)
    emit_scan(scan.records, fmt, args.out, cfg)
    bad = [r.n for r in scan.records if not r.healthy]
    sys.stderr.write(
        f"wrote {len(scan.records)} records to {args.out}; "
        f"tail-sup slope {scan.slope:.4g}; unconverged {len(scan.failures)}; f_s outside bound {len(bad)}\n"
    )
    if bad:
        return EXIT_VIOLATION
    return EXIT_TOLERANCE if scan.failures else EXIT_OK


def cmd_roots(args, cfg: RunConfig) -> int:
    from .fourier import tail_roots

    roots = tail_roots(args.branch, args.count)
    if cfg.output_format == "json":
        print(json.dumps({"branch": args.branch, "roots": roots}))
    else:
        print("m,t")
        for i, r in enumerate(roots, 1):
            print(f"{i},{_fmt(r)}")
    return EXIT_OK


def cmd_bessel(args, cfg: RunConfig) -> int:
    from .bessel import k_imag, k_imag_fourier

    x, tau = float(args.x), float(args.tau)
    if not x > 0:
        raise UsageError("x must be positive")
    p = k_imag(x, tau, cfg.tol) if args.method == "exp" else k_imag_fourier(x, tau, max(cfg.tol, 1e-12))
    _emit({"x": x, "tau": tau, "method": p.method, "K": _fmt_value(CertifiedValue(p.k, p.k_bound, p.converged))}, cfg)
    return EXIT_OK if p.converged else EXIT_TOLERANCE


def cmd_bessel_index(args, cfg: RunConfig) -> int:
    from .bessel import index_integral

    s = index_integral(float(args.x), float(args.t), float(args.lam), tol=max(cfg.tol, 1e-12))
    _emit(
        {
            "x": s.x,
            "t": s.t,
            "lambda": s.lam,
            "lhs": s.lhs,
            "rhs": s.rhs,
            "residual": s.residual,
            "bound": s.bound,
            "slow": s.slow,
        },
        cfg,
    )
    if not s.holds:
        return EXIT_VIOLATION
    return EXIT_OK if s.converged else EXIT_TOLERANCE


def cmd_salem_limits(args, cfg: RunConfig) -> int:
    from .rajchman import salem_equivalent_scan

    if not 0 < args.tmin <= args.tmax or args.points < 1:
        raise UsageError("need 0 < tmin <= tmax and points >= 1")
    ts = np.geomspace(args.tmin, args.tmax, args.points) if args.points > 1 else np.array([args.tmax])
    recs = salem_equivalent_scan(ts, QuadratureConfig(tol=cfg.tol, max_depth=cfg.max_depth), cfg.parallelism)
    cols = ("t", "sin_functional", "cos_functional", "bound", "cross_residual", "cross_bound")
    if cfg.output_format == "json":
        print(json.dumps([{c: getattr(r, c) for c in cols} for r in recs]))
    else:
        print("# trend data only: sin -> 2 and cos -> 0 together are equivalent to f(t) -> 0")
        print(",".join(cols))
        for r in recs:
            print(",".join(_fmt(getattr(r, c)) for c in cols))
    if any(not (r.cross_residual <= r.cross_bound) for r in recs):
        return EXIT_VIOLATION
    return EXIT_OK if all(r.converged for r in recs) else EXIT_TOLERANCE


def cmd_theorem3(args, cfg: RunConfig) -> int:
    from .rajchman import PSI_LIBRARY, theorem3_condition_check

    if args.psi not in PSI_LIBRARY:
        raise UsageError(f"unknown psi {args.psi!r}; choose from {sorted(PSI_LIBRARY)}")
    r = theorem3_condition_check(args.psi)
    doc = {
        "psi": r.psi,
        "label": "heuristic: fitted decay slopes, not a proof",
        "t_range": list(r.t_range),
        "endpoints_vanish": r.endpoints_vanish,
        "l2_ratio_integral": r.l2_ratio_integral,
        "l2_cutoff": r.l2_cutoff,
        "slope_t^m_psihat^(m)": {str(k): v for k, v in r.transform_slopes.items()},
        "integrable_proxy": {str(k): v for k, v in r.integrable_proxy.items()},
        "tail_sup_t^m_psihat^(m-1)": {str(k): v for k, v in r.tail_sups.items()},
        "vanishing_proxy": {str(k): v for k, v in r.vanishing_proxy.items()},
        "Psi_slope": r.stieltjes_slope,
    }
    if cfg.output_format == "json":
        print(json.dumps(doc, default=_json_default))
    else:
        for k, v in doc.items():
            print(f"{k}: {v}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suites


@dataclass
class SuiteRow:
    suite: str
    name: str
    residual: float
    bound: float
    ok: bool
    converged: bool = True


def _suite_identities(cfg: RunConfig, points: int) -> List[SuiteRow]:
    from .fourier import identity_checks, infinite_transform_direct

    rows = []
    rng = random.Random(cfg.seed)
    bad = 0
    n = 2000
    for _ in range(n):
        q = rng.randint(1, 10**6)
        x = Fraction(rng.randint(0, q), q)
        qm = question_mark_exact
        if qm(x) != 1 - qm(1 - x) or qm(x / (x + 1)) * 2 != qm(x) or (x > 0 and qm(x) + qm(1 / x) != 2):
            bad += 1
    rows.append(SuiteRow("identities", f"functional equations ({n} rationals)", float(bad), 0.0, bad == 0))
    q = cfg.quadrature
    for t in np.linspace(0.0, 50.0, points):
        s = infinite_transform_direct(float(t), q)
        for c in identity_checks(float(t), q, s):
            rows.append(SuiteRow("identities", f"{c.name} t={t:.6g}", c.residual, c.bound, bool(c.holds), s.converged))
    return rows


def _suite_inequalities(cfg: RunConfig, points: int) -> List[SuiteRow]:
    from .fourier import sandwich_check

    rows = []
    for t in np.linspace(0.0, 50.0, points):
        rep = sandwich_check(float(t), cfg.quadrature)
        for i in rep.inequalities:
            rows.append(SuiteRow("inequalities", f"{i.name} t={t:.6g}", max(0.0, i.lhs - i.rhs), i.slack, bool(i.holds)))
    return rows


def _suite_rajchman(cfg: RunConfig, points: int) -> List[SuiteRow]:
    from . import rajchman as rj

    phi = rj.exponential_measure()
    rows = []
    tol = max(cfg.tol, 1e-12)
    for t in np.linspace(0.0, 100.0, points):
        f = rj.transform_forms(phi, float(t), tol)
        for name, cv, exact in (
            ("Phi_c", f.cos_direct, -1 / (1 + t * t)),
            ("Phi_s", f.sin_direct, -t / (1 + t * t)),
        ):
            rows.append(SuiteRow("rajchman", f"{name} t={t:.6g}", abs(cv.value - exact), cv.bound, bool(cv.contains(exact)), cv.converged))
        rows.append(SuiteRow("rajchman", f"forms agree t={t:.6g}", 0.0, 0.0, bool(f.agree)))
    fej = rj.fejer_value(1e-6)
    rows.append(SuiteRow("rajchman", "fejer", abs(fej.value - 1), fej.bound, bool(fej.contains(1.0)), fej.converged))
    for x in (1.0, 0.1, 0.01):
        a = rj.averaged_identity_check(phi, x, 1e-6)
        rows.append(SuiteRow("rajchman", f"averaged identity x={x}", a.residual, a.bound, a.holds))
    for r in rj.corollary1_scan(phi, [1.0, 10.0, 100.0], 1e-8):
        t = r.t
        res = max(abs(r.sin_functional - t * t / (1 + t * t)), abs(r.cos_functional - t / (1 + t * t)))
        rows.append(SuiteRow("rajchman", f"corollary 1 t={t:g}", res, r.bound, res <= r.bound + 1e-12, r.converged))
    for n in (0, 1, 2):
        c = rj.corollary2_check(phi, n, 1.0, tol)
        rows.append(SuiteRow("rajchman", f"derivative n={n}", c.residual, c.bound, c.holds))
    return rows


def _suite_bessel(cfg: RunConfig, points: int) -> List[SuiteRow]:
    from . import bessel as bs

    rows = []
    k0 = bs.k_imag(1.0, 0.0, 1e-12)
    ref = 0.42102443824070833334  # K_0(1)
    rows.append(SuiteRow("bessel", "K_0(1)", abs(k0.value - ref), 1e-10, abs(k0.value - ref) <= 1e-10))
    grid = np.geomspace(0.1, 50.0, 25), np.geomspace(0.1, 20.0, 25)
    checks = bs.uniform_bound_sweep(*grid)
    bad = [c for c in checks if not c.holds]
    worst = max(checks, key=lambda c: abs(c.value) / c.rhs)
    rows.append(
        SuiteRow(
            "bessel",
            f"uniform bound sweep ({len(bad)}/{len(checks)} violations, worst ratio {abs(worst.value) / worst.rhs:.4f} at x={worst.x:.3g} tau={worst.tau:.3g})",
            max(0.0, abs(worst.value) - worst.rhs),
            worst.slack,
            not bad,
        )
    )
    for x, tau in ((1.0, 0.0), (2.0, 1.0), (0.5, 3.0), (5.0, 7.0)):
        a = bs.k_imag(x, tau, 1e-12)
        b = bs.k_imag_fourier(x, tau, 1e-8)
        d = abs(a.value - b.k)
        rows.append(SuiteRow("bessel", f"cosine representation x={x} tau={tau}", d, 1e-6, d <= 1e-6, b.converged))
    for x in (0.5, 1.0, 2.0):
        for t in (0.5, 1.0, 3.0):
            for lam in (0.0, 0.5, 1.2):
                s = bs.index_integral(x, t, lam, 1e-9)
                rows.append(SuiteRow("bessel", f"index integral x={x} t={t} lambda={lam}", s.residual, min(s.bound, 1e-6), s.residual <= min(s.bound, 1e-6), s.converged))
    return rows


SUITES = {
    "identities": _suite_identities,
    "inequalities": _suite_inequalities,
    "rajchman": _suite_rajchman,
    "bessel": _suite_bessel,
}


def cmd_verify(args, cfg: RunConfig) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    rows: List[SuiteRow] = []
    for name in names:
        t0 = time.perf_counter()
        part = SUITES[name](cfg, args.points)
        rows += part
        sys.stderr.write(f"{name}: {len(part)} checks in {time.perf_counter() - t0:.1f} s\n")
    if cfg.output_format == "json":
        print(json.dumps([r.__dict__ for r in rows], default=_json_default))
    else:
        print("suite,check,residual,bound,ok")
        for r in rows:
            print(f"{r.suite},{r.name},{r.residual:.3e},{r.bound:.3e},{'ok' if r.ok else 'FAIL'}")
    failed = [r for r in rows if not r.ok]
    print(f"# {len(rows) - len(failed)}/{len(rows)} checks hold", file=sys.stderr)
    if failed:
        return EXIT_VIOLATION
    return EXIT_OK if all(r.converged for r in rows) else EXIT_TOLERANCE


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, help="target absolute error (default 1e-10)")
    common.add_argument("--max-depth", dest="max_depth", type=int, help="cylinder depth cap (default 64)")
    common.add_argument("--parallelism", type=int, help=f"worker processes (default ${PARALLELISM_ENV} or all cores)")
    common.add_argument("--format", dest="output_format", choices=("text", "csv", "json"))
    common.add_argument("--seed", type=int, help="seed for randomized grids")
    common.add_argument("--config", help="key=value file with defaults for the options above")

    p = argparse.ArgumentParser(prog="questionmark", description="Minkowski ?(x), its Fourier-Stieltjes transforms and related checks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=func)
        return sp

    sp = add("eval", cmd_eval, "?(x) for x = p/q, a decimal, inf, golden or sqrt2-1")
    sp.add_argument("--x", type=parse_number, required=True)
    sp = add("inverse", cmd_inverse, "x with ?(x) = y")
    sp.add_argument("--y", type=parse_number, required=True)
    sp = add("cf", cmd_cf, "continued fraction digits")
    sp.add_argument("--x", type=parse_number, required=True)
    sp = add("moment", cmd_moment, "int_0^1 x^lambda d?(x)")
    sp.add_argument("--lambda", dest="lam", type=parse_real, required=True)
    sp.add_argument("--complement", action="store_true", help="use (1 - x)^lambda")
    sp = add("transform", cmd_transform, "f, F and their cosine/sine parts at t")
    sp.add_argument("--t", type=parse_real, required=True)
    sp.add_argument("--kind", choices=("f", "F", "fc", "fs", "Fc", "Fs"), required=True)
    sp.add_argument("--direct", action="store_true", help="F by the 1/x pushforward instead of 2f/(2 - e^it)")
    sp = add("salem-scan", cmd_salem_scan, "d_n = f_c(2 pi n) for n = 1..nmax")
    sp.add_argument("--nmax", type=int, required=True)
    sp.add_argument("--nmin", type=int, default=1)
    sp.add_argument("--out", required=True)
    sp = add("roots", cmd_roots, "zeros of the tail factors")
    sp.add_argument("--branch", choices=("cos", "sin"), required=True)
    sp.add_argument("--count", type=int, default=5)
    sp = add("bessel", cmd_bessel, "K_{i tau}(x)")
    sp.add_argument("--x", type=parse_real, required=True)
    sp.add_argument("--tau", type=parse_real, required=True)
    sp.add_argument("--method", choices=("exp", "fourier"), default="exp")
    sp = add("bessel-verify-index", cmd_bessel_index, "index integral against its closed form")
    sp.add_argument("--x", type=parse_real, required=True)
    sp.add_argument("--t", type=parse_real, required=True)
    sp.add_argument("--lambda", dest="lam", type=parse_real, required=True)
    sp = add("salem-limits", cmd_salem_limits, "t int ?(1/x) sin xt dx and t int ?(1/x) cos xt dx")
    sp.add_argument("--tmax", type=parse_real, required=True)
    sp.add_argument("--tmin", type=parse_real, default=1.0)
    sp.add_argument("--points", type=int, default=8)
    sp = add("theorem3", cmd_theorem3, "decay proxies for a function on [0, 1]")
    sp.add_argument("--psi", required=True, help="x(1-x), sin(pi x) or zero")
    sp = add("verify", cmd_verify, "property suites with a residual table")
    sp.add_argument("--suite", choices=("identities", "inequalities", "rajchman", "bessel", "all"), required=True)
    sp.add_argument("--points", type=int, default=21, help="grid size for the t sweeps")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    try:
        cfg = build_config(args)
        return args.func(args, cfg)
    except (UsageError, ValueError) as e:
        parser.print_usage(sys.stderr)
        print(f"questionmark {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"questionmark {args.command}: error: {e}", file=sys.stderr)
        # a bad output path is a usage problem
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
