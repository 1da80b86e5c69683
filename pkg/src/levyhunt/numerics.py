"""Quadrature, improper-integral classification and asymptotic estimators.

Every condition checker reduces to one of three questions asked on a
finite grid: does an integral over [0, inf) converge, how does a ratio
behave as eps -> 0, and does a family of integrals vanish as
lambda -> inf.  The estimators here answer with three-valued reports so
that callers never overclaim.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import EvaluationFailure, MaxSubdivisions, QuadratureFailure

__all__ = [
    "ConvergenceReport",
    "LiminfReport",
    "LimitReport",
    "integrate_adaptive",
    "integrate_improper",
    "liminf_ratio",
    "limit_lambda",
    "loglog_slope",
    "TAIL_MARGIN",
    "CAUCHY_RTOL",
]

TAIL_MARGIN = 0.05
CAUCHY_RTOL = 1e-4

# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK values).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes sit at odd Kronrod indices 1, 3, 5, 7 (and mirrored).
_WG_FULL = np.zeros(15)
_WG_FULL[[1, 3, 5]] = _WG[:3]
_WG_FULL[7] = _WG[3]
_WG_FULL[[13, 11, 9]] = _WG[:3]


def _vectorize(f):
    """Wrap ``f`` so it maps a 1-D array to a float array.

    Vector calls are tried first; scalar-only callables fall back to a loop.
    """
    state = {"vector": None}

    def g(x):
        if state["vector"] is not False:
            try:
                y = np.asarray(f(x), dtype=float)
                if y.shape == x.shape:
                    state["vector"] = True
                    return y
            except Exception:
                if state["vector"]:
                    raise
            state["vector"] = False
        return np.array([float(f(xi)) for xi in x])

    return g


def _gk15(g, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    y = g(c + h * _NODES)
    if not np.all(np.isfinite(y)):
        raise EvaluationFailure(f"non-finite integrand on [{a}, {b}]")
    k = h * float(np.dot(_WK, y))
    gauss = h * float(np.dot(_WG_FULL, y))
    return k, abs(k - gauss)


def _adaptive(g, a, b, tol, tol_abs, max_subdivisions):
    value, err = _gk15(g, a, b)
    heap = [(-err, a, b, value, err)]
    total, total_err = value, err
    n = 1
    while total_err > max(tol * abs(total), tol_abs):
        if n >= max_subdivisions:
            raise MaxSubdivisions(
                f"{max_subdivisions} subdivisions reached on [{a}, {b}]",
                estimate=total,
                error=total_err,
            )
        _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # interval exhausted at double precision
            raise MaxSubdivisions(
                "interval width below machine resolution",
                estimate=total,
                error=total_err,
            )
        v1, e1 = _gk15(g, lo, mid)
        v2, e2 = _gk15(g, mid, hi)
        total += v1 + v2 - v
        total_err += e1 + e2 - e
        heapq.heappush(heap, (-e1, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, hi, v2, e2))
        n += 1
    # re-sum to shed the accumulated update rounding
    total = math.fsum(item[3] for item in heap)
    total_err = math.fsum(item[4] for item in heap)
    return total, total_err


def integrate_adaptive(f, lo, hi, tol=1e-10, tol_abs=1e-14, singular=None,
                       max_subdivisions=2000):
    """Adaptive Gauss-Kronrod (G7/K15) quadrature on a finite interval.

    Parameters
    ----------
    f : callable
        Integrand; may be vectorized or scalar-only.
    lo, hi : float
        Finite integration limits.
    tol, tol_abs : float
        Stop once the summed error estimate drops below
        ``max(tol * |value|, tol_abs)``.
    singular : {None, "lo", "hi", "both"}
        Endpoints carrying an integrable singularity.  A quadratic change
        of variable ``x = lo + (hi - lo) u**2`` flattens square-root type
        blow-ups before bisection starts.

    Returns
    -------
    (value, err)
    """
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("integrate_adaptive needs finite limits; "
                         "use integrate_improper for [lo, inf)")
    if hi == lo:
        return 0.0, 0.0
    if hi < lo:
        v, e = integrate_adaptive(f, hi, lo, tol, tol_abs, singular and {
            "lo": "hi", "hi": "lo"}.get(singular, singular), max_subdivisions)
        return -v, e
    g = _vectorize(f)
    if singular == "both":
        mid = 0.5 * (lo + hi)
        v1, e1 = integrate_adaptive(g, lo, mid, tol, tol_abs / 2, "lo",
                                    max_subdivisions)
        v2, e2 = integrate_adaptive(g, mid, hi, tol, tol_abs / 2, "hi",
                                    max_subdivisions)
        return v1 + v2, e1 + e2
    width = hi - lo
    if singular == "lo":
        def h(u):
            return g(lo + width * u * u) * (2.0 * width * u)
        return _adaptive(h, 0.0, 1.0, tol, tol_abs, max_subdivisions)
    if singular == "hi":
        def h(u):
            return g(hi - width * u * u) * (2.0 * width * u)
        return _adaptive(h, 0.0, 1.0, tol, tol_abs, max_subdivisions)
    return _adaptive(g, lo, hi, tol, tol_abs, max_subdivisions)


def loglog_slope(x, y):
    """Least-squares slope of log|y| against log x."""
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    tiny = np.finfo(float).tiny
    lx, ly = np.log(x), np.log(np.maximum(y, tiny))
    if len(lx) < 2:
        return 0.0
    return float(np.polyfit(lx, ly, 1)[0])


@dataclass(frozen=True)
class ConvergenceReport:
    """Outcome of an improper-integral test.

    ``verdict`` is ``"converges"``, ``"diverges"`` or ``"inconclusive"``.
    ``value``/``err`` are set for convergent integrals, ``tail_exponent``
    whenever a tail fit was possible.  ``samples`` holds
    ``(upper_limit, partial_integral)`` pairs.
    """

    verdict: str
    value: float | None = None
    err: float | None = None
    tail_exponent: float | None = None
    samples: tuple = ()

    @property
    def converges(self):
        return self.verdict == "converges"

    @property
    def diverges(self):
        return self.verdict == "diverges"

    def as_dict(self):
        return {
            "verdict": self.verdict,
            "value": self.value,
            "err": self.err,
            "tail_exponent": self.tail_exponent,
            "samples": [list(s) for s in self.samples],
        }


def _segment(g, a, b, tol):
    if a > 0 and b / a > 4:
        # log variable: smooth power tails become near-linear
        def h(s):
            z = np.exp(s)
            return g(z) * z
        return integrate_adaptive(h, math.log(a), math.log(b), tol=tol,
                                  tol_abs=1e-300, max_subdivisions=4000)
    return integrate_adaptive(g, a, b, tol=tol, tol_abs=1e-300,
                              max_subdivisions=4000)


def integrate_improper(f, lo=0.0, schedule=None, tol=1e-10,
                       margin=TAIL_MARGIN, cauchy_rtol=CAUCHY_RTOL,
                       fit_points=3):
    """Decide whether ``int_lo^inf f`` converges, for eventually positive f.

    Partial integrals are taken at the geometric upper limits in
    ``schedule`` (default ``10**1 ... 10**6``).  The tail exponent ``p`` of
    ``f`` is the log-log slope of the mean of ``f`` over the last
    ``fit_points`` schedule segments; averaging over a segment keeps the
    fit stable for oscillating integrands.

    ``p < -1 - margin`` and Cauchy-consistent tail-extrapolated partials
    give ``converges``; ``p >= -1 + margin`` gives ``diverges``; anything
    else is ``inconclusive``.
    """
    if schedule is None:
        schedule = [10.0 ** k for k in range(1, 7)]
    schedule = [float(z) for z in schedule]
    if len(schedule) < 3 or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be increasing with at least 3 limits")
    if schedule[0] <= lo:
        raise ValueError("first schedule limit must exceed lo")
    g = _vectorize(f)
    edges = [float(lo)] + schedule
    increments, errs, samples = [], [], []
    total = 0.0
    try:
        for a, b in zip(edges, edges[1:]):
            v, e = _segment(g, a, b, tol)
            increments.append(v)
            errs.append(e)
            total += v
            samples.append((b, total))
    except MaxSubdivisions as exc:
        raise QuadratureFailure(str(exc), estimate=exc.estimate,
                                error=exc.error) from exc

    quad_err = math.fsum(errs)
    k = min(fit_points, len(schedule) - 1)
    seg_lo = np.array(edges[-k - 1:-1])
    seg_hi = np.array(edges[-k:])
    inc = np.array(increments[-k:])
    if np.all(np.abs(inc) <= 1e-300):
        return ConvergenceReport("converges", total, quad_err, -math.inf,
                                 tuple(samples))
    means = inc / (seg_hi - seg_lo)
    p = loglog_slope(np.sqrt(seg_lo * seg_hi), means)

    if p >= -1.0 + margin:
        return ConvergenceReport("diverges", tail_exponent=p,
                                 samples=tuple(samples))
    if p > -1.0 - margin:
        return ConvergenceReport("inconclusive", tail_exponent=p,
                                 samples=tuple(samples))

    q = p + 1.0

    def extrapolate(i):
        # partial up to edges[i+1] plus power-law tail fitted on segment i
        za, zb = edges[i], edges[i + 1]
        tail = increments[i] * zb ** q / (za ** q - zb ** q) if za > 0 else 0.0
        return samples[i][1] + tail

    v_last = extrapolate(len(increments) - 1)
    v_prev = extrapolate(len(increments) - 2)
    gap = abs(v_last - v_prev)
    if gap <= cauchy_rtol * abs(v_last) + 1e-300:
        return ConvergenceReport("converges", v_last, gap + quad_err, p,
                                 tuple(samples))
    return ConvergenceReport("inconclusive", tail_exponent=p,
                             samples=tuple(samples))


@dataclass(frozen=True)
class LiminfReport:
    """Finite-grid stand-in for ``liminf_{eps -> 0} g(eps)``.

    ``estimate`` is the minimum of the ratio over the tail window and
    ``trend_slope`` the fitted ``d log(ratio) / d log(1/eps)`` on that window.
    """

    estimate: float
    trend_slope: float
    grid: tuple = ()

    def as_dict(self):
        return {"estimate": self.estimate, "trend_slope": self.trend_slope,
                "grid": [list(p) for p in self.grid]}


def liminf_ratio(g, j_range=(4, 40), window=8):
    """Evaluate ``g`` on ``eps = 2**-j`` and summarise its behaviour as eps -> 0."""
    j0, j1 = j_range
    if j1 - j0 + 1 < window:
        raise ValueError("window longer than the eps grid")
    grid = []
    for j in range(j0, j1 + 1):
        eps = 2.0 ** -j
        try:
            r = float(g(eps))
        except Exception as exc:  # pragma: no cover - surfaced to caller
            raise EvaluationFailure(f"g failed at eps=2^-{j}: {exc}") from exc
        if math.isnan(r):
            raise EvaluationFailure(f"g returned NaN at eps=2^-{j}")
        grid.append((eps, r))
    tail = grid[-window:]
    values = np.array([r for _, r in tail])
    estimate = float(values.min())
    if np.any(np.isinf(values)):
        slope = math.inf if estimate == math.inf else 0.0
    elif np.any(values <= 0):
        slope = -math.inf
    else:
        slope = loglog_slope([1.0 / e for e, _ in tail], values)
    return LiminfReport(estimate, slope, tuple(grid))


@dataclass(frozen=True)
class LimitReport:
    """Values of ``h`` on a lambda grid plus a three-valued verdict.

    ``verdict`` is ``"tends_to_zero"``, ``"positive"`` (with ``floor``) or
    ``"inconclusive"``.
    """

    verdict: str
    values: tuple
    floor: float | None = None

    def as_dict(self):
        return {"verdict": self.verdict, "floor": self.floor,
                "values": [list(v) for v in self.values]}


def limit_lambda(h, lambda_grid=None, tol=1e-4):
    """Estimate whether ``h(lambda) -> 0`` as lambda -> inf."""
    if lambda_grid is None:
        lambda_grid = [10.0 ** k for k in range(1, 7)]
    values = []
    for lam in lambda_grid:
        try:
            v = float(h(lam))
        except Exception as exc:
            raise EvaluationFailure(f"h failed at lambda={lam}: {exc}") from exc
        if not math.isfinite(v):
            raise EvaluationFailure(f"h not finite at lambda={lam}")
        values.append((float(lam), v))
    last = [v for _, v in values[-3:]]
    if len(last) == 3 and last[0] > last[1] > last[2] and last[2] < tol:
        return LimitReport("tends_to_zero", tuple(values))
    if len(last) == 3 and abs(last[2]) <= tol:
        # already numerically zero (e.g. an empty integration region)
        if max(abs(v) for v in last) <= tol:
            return LimitReport("tends_to_zero", tuple(values))
    floor = min(last)
    spread = (max(last) - floor) / max(abs(floor), 1e-300)
    if floor > 10 * tol and spread < 0.1:
        return LimitReport("positive", tuple(values), floor)
    return LimitReport("inconclusive", tuple(values))
