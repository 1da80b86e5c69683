"""Single-process sufficient conditions for Hunt's hypothesis.

Every checker returns a :class:`Verdict`.  Existence-of-constant
conditions ("there is c with ...") are decided on a finite log grid of
``|z|``: a ratio is *bounded* when the log-log slope of its windowed
maxima over the last decades is at most the tail margin, and *unbounded*
when the slope exceeds it.  Such verdicts carry the caveat
:data:`ASYMPTOTIC`.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
from scipy import integrate, special

from .errors import LevyError, NumericalError
from .exponent import ExponentHandle, default_grid, measure_fourier, one_energy
from .model import (
    INF,
    PSD_TOL,
    LevyMeasure,
    LevyTriplet,
    TypeAlphaBetaDensity,
    reflect,
    signed_first_moment,
    thm25_hypothesis,
    truncated_moment,
)
from .numerics import (
    TAIL_MARGIN,
    ConvergenceReport,
    integrate_improper,
    liminf_ratio,
    limit_lambda,
    loglog_slope,
)

ASYMPTOTIC = "asymptotic check on finite grid"
DENSITY_CAVEAT = ("resolvent densities not established (Hartman-Wintner "
                  "check did not hold); conclusion needs them")


class Status(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


# Rule tags used in citation chains, each with the statement it applies.
ANCHORS = {
    "nd": "(ND): rank Q = n",
    "sym": "(SYM): the process is symmetric, Im psi = 0",
    "kf": "(KF): |Im psi| <= c A",
    "rao": "(R): |Im psi| <= A f(A) with int_N^inf (l f(l))^-1 dl = inf",
    "cba": "(C^{B/A}): B <= c A log(2+B) loglog(2+B)",
    "s": "(S): mu(R^n minus sqrt(Q)R^n) < inf and sqrt(Q) y = -a - "
         "int_{R^n minus sqrt(Q)R^n} x 1{|x|<1} mu(dx) is solvable",
    "range": "x in sqrt(M)R^n iff |<x,z>| <= c sqrt(<z,Mz>) for all z",
    "one-sided-domination": "Q = 0, int (1^x) mu_+ = inf and "
                            "reflect(mu_-) <= k mu_+ + nu with k < 1, "
                            "int_(0,delta) x nu(dx) < inf  =>  (H)",
    "local-second-moment": "liminf_{eps->0} int_{-eps}^{eps} x^2 mu(dx) / "
                           "(eps/|log eps|) > 0  =>  (H)",
    "local-second-moment-loglog": "liminf_{eps->0} int_{-eps}^{eps} x^2 mu(dx)"
                                  " / (eps/(|log eps| log|log eps|)) > 0  =>  (H)",
    "repsi-log-growth": "liminf_{|z|->inf} Re psi(z) / (|z|/log|z|) > 0  =>  (H)",
    "hartman-wintner-gate": "Re psi(z)/log(1+|z|) -> inf  =>  bounded "
                            "continuous transition densities",
    "density-asserted": "resolvent densities w.r.t. Lebesgue measure (asserted)",
    "type-ab": "1/(c x^{1+alpha}) <= rho(x) <= c/x^{1+beta} on (0,1]",
    "lambda-limit": "lim_{l->inf} int_{B > A f(A)} l/(l^2+B^2) |nu_hat|^2 dz = 0 "
                    "for every finite-1-energy nu  <=>  (H) (given densities)",
    "nu-alpha": "nu_alpha(dx) = |x log|x||^{1+alpha} mu(dx) on (-1,1)",
    "bg-indices": "beta1'' = sup{a: Re psi/|z|^a -> inf}, "
                  "beta2 = inf{a: int_{|x|<1} |x|^a mu(dx) < inf}",
    # pair conditions
    "im-domination": "|Im psi2| <= c (1 + Re psi1 + Re psi2)",
    "energy-domination-i": "|psi2| <= c (1 + Re psi1)  =>  finite 1-energy "
                           "for X1+X2 implies finite 1-energy for X1",
    "energy-domination-ii": "Re psi2 <= c D1 and |Im psi2| <= c (1+Re psi1+Re psi2), "
                            "D1 = 1+Re psi1+(Im psi1)^2/(1+Re psi1)  =>  same energy "
                            "comparison",
    "energy-domination-iii": "Re psi2 <= c D1 and (Im psi2)^2 <= c (1+Re psi1+Re psi2) "
                             "D1  =>  same energy comparison",
    "split-witness": "Im psi1 = phi11 + phi12, |phi11| <= A1 f(A1), "
                     "|Im psi2| <= A f(A), int |phi12|/|1+psi1|^2 < inf",
    "bg-rule": "beta2(X2) < beta1''(X1)",
    # classification rules
    "bretagnolle-case-a": "Q > 0: every point is hit, 0 regular for {0}",
    "bretagnolle-case-b": "Q = 0, int (1^|x|) mu = inf: hitting set is empty "
                          "or all of R; if R, 0 regular for {0}",
    "bretagnolle-case-c1": "Q = 0, finite variation, a' = 0, not compound "
                           "Poisson: hitting set empty",
    "bretagnolle-case-c2": "Q = 0, finite variation, a' > 0, no negative jumps: "
                           "hitting set (0, inf), points semipolar, not polar",
    "bretagnolle-case-c3": "Q = 0, finite variation, a' > 0, negative jumps: "
                           "hitting set R, 0 irregular for {0}, points "
                           "semipolar, not polar",
    "reflection": "(H) and hitting sets are transported by x -> -x",
    "compound-poisson": "Q = 0, mu finite, a' = 0: hitting set undetermined "
                        "by the triplet case split",
    "kesten-one-sided": "case B with one side of finite variation: "
                        "hitting set is R",
    "kesten-integral": "case B: int_0^inf Re(1/(1+psi)) dz < inf iff "
                       "hitting set is R",
    "x1-hunt": "X1 satisfies (H)",
    "x1-hunt-asserted": "X1 satisfies (H) (asserted)",
    "compound-poisson-sum": "X1 satisfies (H), X2 compound Poisson  =>  "
                            "X1+X2 satisfies (H)",
    "solution-condition-sum": "X1 and X2 satisfy (S)  =>  X1+X2 satisfies (H)",
    "im-domination-sum": "X1 has resolvent densities and (H), energy "
                         "domination and Im-domination  =>  X1+X2 satisfies (H)",
    "bounded-resolvent": "X1 has bounded resolvent densities",
    "bounded-resolvent-asserted": "X1 has bounded resolvent densities (asserted)",
    "bounded-resolvent-sum": "X1 has bounded resolvent densities and (H), "
                             "Im-domination  =>  X1+X2 satisfies (H)",
    "split-witness-sum": "densities, split witness with divergent f  =>  "
                         "X1+X2 satisfies (H)",
    "bg-index-sum": "X1 satisfies (H), beta2(X2) < beta1''(X1)  =>  "
                    "X1+X2 satisfies (H)",
    "c2-c3-not-hunt": "points semipolar but not polar  =>  (H) fails",
    "direct-sum": "(H) classified directly on the summed triplet",
}


@dataclass
class Verdict:
    """Three-valued outcome with evidence, citation chain and caveats."""

    status: Status
    evidence: dict = field(default_factory=dict)
    citations: list = field(default_factory=list)
    caveats: list = field(default_factory=list)

    @property
    def holds(self):
        return self.status is Status.HOLDS

    @property
    def fails(self):
        return self.status is Status.FAILS

    @property
    def unknown(self):
        return self.status is Status.UNKNOWN

    def as_dict(self):
        return {
            "status": self.status.value,
            "evidence": self.evidence,
            "citations": [list(c) for c in self.citations],
            "caveats": list(self.caveats),
        }


def _verdict(status, tag, evidence=None, caveats=()):
    return Verdict(Status(status), dict(evidence or {}),
                   [(tag, ANCHORS[tag])], list(caveats))


@dataclass(frozen=True)
class GrowthFunctionFamily:
    """``f`` for Rao-type bounds; ``kind`` in constant, log, logloglog.

    Each kind satisfies ``int_N^inf (l f(l))^-1 dl = inf``: ``1/l``,
    ``1/(l log l)`` and ``1/(l log l loglog l)`` all have divergent
    integrals.
    """

    kind: str = "log"
    c: float = 1.0

    KINDS = ("constant", "log", "logloglog")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown growth family {self.kind!r}")
        if not self.c > 0:
            raise ValueError("c must be positive")

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        if self.kind == "constant":
            return self.c * np.ones_like(lam)
        if self.kind == "log":
            return self.c * np.log(2.0 + lam)
        return self.c * np.log(2.0 + lam) * np.log(np.log(math.e + lam))

    @property
    def divergence(self):
        return {"constant": "int dl/(c l) = inf",
                "log": "int dl/(c l log(2+l)) = inf",
                "logloglog": "int dl/(c l log(2+l) loglog(e+l)) = inf"}[self.kind]


@dataclass(frozen=True)
class SplitWitness:
    """A caller-supplied split ``Im psi = phi1 + phi2``."""

    phi1: Callable
    phi2: Callable


@dataclass(frozen=True)
class CheckConfig:
    zmax: float = 1e6
    zmin_exp: float = -2.0
    per_decade: int = 96
    eps_min_exp: int = 40
    tol: float = 1e-10
    margin: float = TAIL_MARGIN
    tail_decades: float = 2.0
    threads: int = 1
    strategy: str = "auto"

    def as_dict(self):
        return {"zmax": self.zmax, "zmin_exp": self.zmin_exp,
                "per_decade": self.per_decade, "eps_min_exp": self.eps_min_exp,
                "tol": self.tol, "margin": self.margin,
                "tail_decades": self.tail_decades}


DEFAULT_CONFIG = CheckConfig()
_HANDLES = weakref.WeakKeyDictionary()


def get_handle(t: LevyTriplet, cfg: CheckConfig = DEFAULT_CONFIG):
    """Shared, cached :class:`ExponentHandle` for ``t``."""
    per = _HANDLES.setdefault(t, {})
    key = (cfg.strategy, cfg.threads)
    if key not in per:
        per[key] = ExponentHandle(t, cfg.strategy, cfg.threads)
    return per[key]


# ---------------------------------------------------------------------------
# grids and ratio tests


@dataclass
class Ray:
    z: np.ndarray
    A: np.ndarray
    B: np.ndarray
    re: np.ndarray
    im: np.ndarray


def _directions(n):
    dirs = [np.eye(n)[i] for i in range(n)]
    if n > 1:
        dirs.append(np.ones(n) / math.sqrt(n))
        d = np.zeros(n)
        d[0], d[1] = 1.0, -1.0
        dirs.append(d / math.sqrt(2))
    return dirs


def grid_rays(t, cfg=DEFAULT_CONFIG, zgrid=None, h=None):
    """Evaluate ``(A, B, Re, Im)`` along rays ``r * d`` for r on the grid.

    In one dimension one ray suffices: ``A``, ``B`` and ``|Im psi|`` are
    even in ``z``.
    """
    h = h or get_handle(t, cfg)
    z = (default_grid(cfg.zmin_exp, cfg.zmax, cfg.per_decade)
         if zgrid is None else np.asarray(zgrid, dtype=float))
    rays = []
    if t.dim == 1:
        A, B, re, im = h.parts_grid(z)
        rays.append(Ray(z, A, B, re, im))
    else:
        for d in _directions(t.dim):
            A, B, re, im = h.parts_grid(z[:, None] * d[None, :])
            rays.append(Ray(z, A, B, re, im))
    return rays


def _windows(z, r, start, nwin=8, kind="max"):
    sel = z >= start
    zs, rs = z[sel], r[sel]
    if zs.size < nwin:
        return zs, rs
    edges = np.geomspace(zs[0], zs[-1] * (1 + 1e-12), nwin + 1)
    zc, vals = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        m = (zs >= lo) & (zs < hi)
        if np.any(m):
            zc.append(math.sqrt(lo * hi))
            vals.append(rs[m].max() if kind == "max" else rs[m].min())
    return np.array(zc), np.array(vals)


def _tail_slope(z, r, cfg, kind="max"):
    start = z[-1] / 10.0 ** cfg.tail_decades
    zc, vals = _windows(z, r, start, kind=kind)
    if vals.size < 2:
        return math.nan
    if np.any(vals <= 0):
        return -math.inf if kind == "min" else (0.0 if np.all(vals <= 0) else
                                                 loglog_slope(zc[vals > 0], vals[vals > 0]))
    return loglog_slope(zc, vals)


def bounded_ratio(rays, ratio, cfg, zero_tol=1e-12):
    """Decide whether ``ratio(ray)`` stays bounded; returns (status, evidence)."""
    sup, slopes = 0.0, []
    for ray in rays:
        r = np.abs(ratio(ray))
        if not np.all(np.isfinite(r)):
            return "unknown", {"reason": "non-finite ratio on grid"}
        sup = max(sup, float(r.max()))
        slopes.append(_tail_slope(ray.z, r, cfg, "max"))
    ev = {"c_est": sup, "sup": sup, "zmax": float(rays[0].z[-1])}
    if sup <= zero_tol:
        ev["tail_slope"] = 0.0
        return "holds", ev
    slope = max(slopes)
    ev["tail_slope"] = slope
    if math.isnan(slope):
        return "unknown", ev
    return ("holds" if slope <= cfg.margin else "fails"), ev


def _liminf_positive(rays, ratio, cfg):
    slopes, mins = [], []
    for ray in rays:
        r = ratio(ray)
        start = ray.z[-1] / 10.0 ** cfg.tail_decades
        slopes.append(_tail_slope(ray.z, r, cfg, "min"))
        mins.append(float(r[ray.z >= start].min()))
    slope, floor = min(slopes), min(mins)
    ev = {"tail_slope": slope, "tail_min": floor}
    if slope >= -cfg.margin and floor > 0:
        return "holds", ev
    if slope < -cfg.margin:
        return "fails", ev
    return "unknown", ev


def _tends_to_infinity(rays, ratio, cfg):
    lows, highs, mins = [], [], []
    for ray in rays:
        r = ratio(ray)
        start = ray.z[-1] / 10.0 ** cfg.tail_decades
        lows.append(_tail_slope(ray.z, r, cfg, "min"))
        highs.append(_tail_slope(ray.z, r, cfg, "max"))
        mins.append(float(r[ray.z >= start].min()))
    low, high = min(lows), min(highs)
    ev = {"tail_slope": low, "tail_slope_max": high, "tail_min": min(mins)}
    if low > cfg.margin and high > cfg.margin and min(mins) > 0:
        return "holds", ev
    # even the windowed maxima do not grow: the ratio stays bounded
    if high < cfg.margin / 5:
        return "fails", ev
    return "unknown", ev


def _safe_rays(t, cfg, zgrid=None):
    try:
        return grid_rays(t, cfg, zgrid), None
    except NumericalError as exc:
        return None, Verdict(Status.UNKNOWN, {"error": str(exc)}, [],
                             ["exponent evaluation failed"])


# ---------------------------------------------------------------------------
# diagram conditions


def check_nd(t, cfg=DEFAULT_CONFIG):
    lam = float(t.eigvals.min())
    status = "holds" if lam > PSD_TOL else "fails"
    return _verdict(status, "nd", {"min_eigenvalue": lam, "rank": int(np.sum(t.eigvals > PSD_TOL))})


def structurally_symmetric(t):
    if np.any(t.a != 0):
        return False
    mu = t.mu
    if mu.is_empty:
        return True
    if t.dim == 1:
        other = reflect(mu)
        if set(other.atoms) != set(mu.atoms) or any(
                abs(other.atoms[x] - w) > 1e-12 * w for x, w in mu.atoms.items()):
            return False
        return _same_profile(mu.profile, other.profile)
    neg = {tuple(-v for v in x): w for x, w in mu.atoms.items()}
    return set(neg) == set(mu.atoms) and all(
        abs(neg[x] - w) <= 1e-12 * w for x, w in mu.atoms.items())


def _same_profile(p1, p2):
    if set(p1) != set(p2):
        return False
    for k in p1:
        s1, s2 = p1[k], p2[k]
        if len(s1) != len(s2):
            return False
        for (a1, b1, c1), (a2, b2, c2) in zip(s1, s2):
            if a1 != a2 or b1 != b2 or abs(c1 - c2) > 1e-12 * abs(c1):
                return False
    return True


def check_sym(t, cfg=DEFAULT_CONFIG, zgrid=None):
    rays, err = _safe_rays(t, cfg, zgrid)
    if err:
        return err
    max_im = max(float(np.max(np.abs(r.im))) for r in rays)
    structural = structurally_symmetric(t)
    ev = {"structural": structural, "max_abs_im": max_im}
    status = "holds" if structural and max_im < 1e-9 else "fails"
    v = _verdict(status, "sym", ev)
    if status == "holds" and not check_hw(t, cfg, zgrid).holds:
        v.caveats.append(DENSITY_CAVEAT)
    return v


def check_kf(t, zgrid=None, cfg=DEFAULT_CONFIG):
    rays, err = _safe_rays(t, cfg, zgrid)
    if err:
        return err
    status, ev = bounded_ratio(rays, lambda r: r.im / r.A, cfg)
    return _verdict(status, "kf", ev, [ASYMPTOTIC])


def _rao_family(rays, fam, cfg):
    return bounded_ratio(rays, lambda r: r.im / (r.A * fam(r.A)), cfg)


def check_rao(t, f=None, zgrid=None, cfg=DEFAULT_CONFIG):
    """Rao's condition for the family ``f`` (or the first family that works).

    With ``f`` given, the verdict is for that family; the evidence always
    reports the smallest of constant < log < logloglog that holds.
    """
    rays, err = _safe_rays(t, cfg, zgrid)
    if err:
        return err
    results = {}
    smallest = None
    for kind in GrowthFunctionFamily.KINDS:
        st, ev = _rao_family(rays, GrowthFunctionFamily(kind), cfg)
        results[kind] = {"status": st, **ev}
        if st == "holds" and smallest is None:
            smallest = kind
    if f is not None:
        st, ev = _rao_family(rays, GrowthFunctionFamily(f.kind), cfg)
        ev = dict(ev, family=f.kind)
        ev["c_est"] = ev["sup"] / f.c
    else:
        st = "holds" if smallest else (
            "fails" if all(r["status"] == "fails" for r in results.values())
            else "unknown")
        ev = {"family": smallest}
        if smallest:
            ev.update({k: v for k, v in results[smallest].items() if k != "status"})
    ev["smallest_family"] = smallest
    ev["families"] = results
    return _verdict(st, "rao", ev, [ASYMPTOTIC])


def check_cba(t, zgrid=None, cfg=DEFAULT_CONFIG):
    rays, err = _safe_rays(t, cfg, zgrid)
    if err:
        return err

    def ratio(r):
        lb = np.log(2.0 + r.B)
        return r.B / (r.A * lb * np.log(lb))

    status, ev = bounded_ratio(rays, ratio, cfg)
    return _verdict(status, "cba", ev, [ASYMPTOTIC])


# ---------------------------------------------------------------------------
# condition (S)


@dataclass(frozen=True)
class RangeResult:
    member: bool
    c: float | None = None
    y: tuple | None = None
    kernel_direction: tuple | None = None

    def __bool__(self):
        return self.member

    def as_dict(self):
        return {"member": self.member, "c": self.c, "y": self.y,
                "kernel_direction": self.kernel_direction}


def range_member(M, x, eig_tol=PSD_TOL, comp_tol=1e-9):
    """Is ``x`` in the range of ``sqrt(M)``?  Certificate: ``c = |y| + 1``."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    w, v = np.linalg.eigh(0.5 * (M + M.T))
    coords = v.T @ x
    ker = w < eig_tol
    if np.any(ker):
        kc = coords[ker]
        i = int(np.argmax(np.abs(kc)))
        if abs(kc[i]) >= comp_tol:
            d = v[:, ker][:, i]
            return RangeResult(False, kernel_direction=tuple(float(u) for u in d))
    y = np.zeros_like(x)
    pos = ~ker
    y_coords = np.zeros_like(coords)
    y_coords[pos] = coords[pos] / np.sqrt(w[pos])
    y = v @ y_coords
    return RangeResult(True, c=float(np.linalg.norm(y) + 1.0),
                       y=tuple(float(u) for u in y))


def check_s(t, cfg=DEFAULT_CONFIG):
    Q = t.Q
    mu = t.mu
    ev = {}
    if t.dim == 1:
        if t.q_scalar > PSD_TOL:
            ev.update(off_range_mass=0.0, b=[0.0])
            return _verdict("holds", "s", ev)
        mass = mu.total_mass()
        ev["off_range_mass"] = mass
        if mass == INF:
            return _verdict("fails", "s", ev)
        b = -t.a - signed_first_moment(mu)
    else:
        off_mass = 0.0
        comp = np.zeros(t.dim)
        for x, w in mu.atoms.items():
            if not range_member(Q, x):
                off_mass += w
                if np.linalg.norm(x) < 1:
                    comp += w * np.array(x)
        ev["off_range_mass"] = off_mass
        b = -t.a - comp
    rm = range_member(Q, b)
    ev["b"] = [float(v) for v in b]
    ev["range"] = rm.as_dict()
    return _verdict("holds" if rm.member else "fails", "s", ev)


# ---------------------------------------------------------------------------
# one-dimensional measure conditions


def check_thm25(t, k, delta, nu=None, cfg=DEFAULT_CONFIG):
    hyp = thm25_hypothesis(t, k, delta, nu)
    ev = dict(hyp.evidence)
    ev["reasons"] = list(hyp.reasons)
    return _verdict("holds" if hyp.ok else "fails", "one-sided-domination", ev)


def _moment_liminf(t, denom, cfg, tag):
    if t.dim != 1:
        return Verdict(Status.UNKNOWN, {"reason": "one-dimensional only"})
    mu = t.mu

    def g(eps):
        le = abs(math.log(eps))
        return truncated_moment(mu, 2.0, eps) / denom(eps, le)

    rep = liminf_ratio(g, (4, int(cfg.eps_min_exp)), 8)
    ev = {"estimate": rep.estimate, "trend_slope": rep.trend_slope,
          "eps_min": rep.grid[-1][0], "ratio_at_eps_min": rep.grid[-1][1]}
    if rep.estimate > 1e-3 and rep.trend_slope >= -0.01:
        status = "holds"
    elif rep.trend_slope < 0 and (rep.estimate < 1e-6 or (
            rep.trend_slope < -0.1 and rep.estimate < 1e-3)):
        status = "fails"
    else:
        status = "unknown"
    return _verdict(status, tag, ev, [ASYMPTOTIC])


def check_thm26(t, cfg=DEFAULT_CONFIG):
    return _moment_liminf(t, lambda e, le: e / le, cfg, "local-second-moment")


def check_loglog_local(t, cfg=DEFAULT_CONFIG):
    return _moment_liminf(t, lambda e, le: e / (le * math.log(le)), cfg,
                          "local-second-moment-loglog")


def check_repsi_growth(t, variant="log", zgrid=None, cfg=DEFAULT_CONFIG):
    """Growth of ``Re psi``: ``log`` is the liminf of ``Re psi/(|z|/log|z|)``,
    ``hw`` asks ``Re psi / log(1+|z|) -> inf``."""
    if variant not in ("log", "hw"):
        raise ValueError(f"unknown variant {variant!r}")
    rays, err = _safe_rays(t, cfg, zgrid)
    if err:
        return err
    if variant == "log":
        status, ev = _liminf_positive(
            rays, lambda r: np.where(r.z > 1, r.re * np.log(np.maximum(r.z, 1.0 + 1e-12)) / r.z, 0.0), cfg)
        return _verdict(status, "repsi-log-growth", ev, [ASYMPTOTIC])
    status, ev = _tends_to_infinity(rays, lambda r: r.re / np.log1p(r.z), cfg)
    return _verdict(status, "hartman-wintner-gate", ev, [ASYMPTOTIC])


def check_hw(t, cfg=DEFAULT_CONFIG, zgrid=None):
    return check_repsi_growth(t, "hw", zgrid, cfg)


def nu_alpha_mass(mu: LevyMeasure, alpha):
    """Mass of ``|x log|x||^{1+alpha} mu(dx)`` on (-1, 1)."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    p = 1.0 + alpha
    total, err = 0.0, 0.0
    for x, w in mu.atoms.items():
        if 0 < abs(x[0]) < 1:
            total += w * abs(x[0] * math.log(abs(x[0]))) ** p
    for side, key, lo, hi, c in mu.segments():
        b = min(hi, 1.0)
        if lo >= b:
            continue
        if lo == 0.0:
            idx = key.singularity_index()
            if key.kind == "power" and alpha - idx <= -1:
                return ConvergenceReport("diverges", math.inf, 0.0,
                                         tail_exponent=alpha - idx)
            if key.kind == "callable" and key.bracket and alpha - key.bracket[0] <= -1:
                return ConvergenceReport("diverges", math.inf, 0.0,
                                         tail_exponent=alpha - key.bracket[0])

        def f(t_):
            x = math.exp(-t_)
            return (x * t_) ** p * float(key.density(x)) * x

        tb = -math.log(b)
        ta = INF if lo == 0 else -math.log(lo)
        if key.kind == "callable" and lo == 0.0:
            rep = integrate_improper(lambda s: np.array([f(tb + v) for v in np.atleast_1d(s)]),
                                     0.0, schedule=[10.0, 30.0, 100.0, 300.0, 700.0])
            if not rep.converges:
                return rep
            val, e = rep.value, rep.err
        else:
            # beyond t = 200 the density overflows in floating point; the
            # remainders are incomplete gamma functions
            tc = min(ta, 200.0)
            val, e = integrate.quad(f, tb, tc, limit=400, epsabs=0.0, epsrel=1e-10)
            if ta > tc:
                if key.kind == "power":
                    sexp = p - key.alpha
                    val += float(special.gammaincc(p + 1, sexp * tc)
                                 * special.gamma(p + 1) / sexp ** (p + 1))
                elif key.kind == "log":
                    # integrand t**(p-1) e^{-(p-1) t}
                    val += float(special.gammaincc(p, alpha * tc)
                                 * special.gamma(p) / alpha ** p)
        total += c * val
        err += c * e
    return ConvergenceReport("converges", total, err)


@dataclass(frozen=True)
class BGIndices:
    beta1pp: float
    beta2: float
    uncertainty: float = 0.05
    beta1pp_conclusive: bool = True
    beta2_source: str = "metadata"
    slopes: tuple = ()

    def as_dict(self):
        return {"beta1pp": self.beta1pp, "beta2": self.beta2,
                "uncertainty": self.uncertainty,
                "beta1pp_conclusive": self.beta1pp_conclusive,
                "beta2_source": self.beta2_source,
                "slopes": list(self.slopes)}


def beta2_index(mu):
    """Smallness index of ``mu`` at the origin (1-D or atoms)."""
    idx = [0.0]
    source = "metadata"
    for side, key, lo, hi, c in mu.segments():
        if lo > 0:
            continue
        if key.kind == "callable":
            source = "fit"
            eps = np.geomspace(1e-8, 1e-4, 9)
            m = np.array([truncated_moment(mu, 2.0, e) for e in eps])
            idx.append(2.0 - loglog_slope(eps, m))
        else:
            idx.append(key.singularity_index())
    return max(idx), source


def bg_indices(t, cfg=DEFAULT_CONFIG):
    """``(beta1'', beta2)`` with fits over ``|z|`` in 10^2 .. zmax."""
    h = get_handle(t, cfg)
    top = math.log10(cfg.zmax)
    z = np.logspace(2.0, top, int(round((top - 2.0) * 24)) + 1)
    if t.dim == 1:
        re = h.parts_grid(z)[2]
        curves = [re]
    else:
        curves = [h.parts_grid(z[:, None] * d[None, :])[2] for d in _directions(t.dim)]
    slopes = []
    for re in curves:
        mid = z.size // 2
        zc1, v1 = _windows(z[:mid + 1], re[:mid + 1], z[0], 6, "max")
        zc2, v2 = _windows(z[mid:], re[mid:], z[mid], 6, "max")
        s1 = loglog_slope(zc1, v1) if np.all(v1 > 0) else 0.0
        s2 = loglog_slope(zc2, v2) if np.all(v2 > 0) else 0.0
        slopes.append((s1, s2))
    lo_pair = min(slopes, key=lambda s: s[1])
    b1 = float(min(max(lo_pair[1], 0.0), 2.0))
    conclusive = abs(lo_pair[0] - lo_pair[1]) <= 0.1
    b2, src = beta2_index(t.mu)
    return BGIndices(b1, float(b2), 0.05, conclusive, src,
                     tuple(float(s) for s in lo_pair))


def check_bg(t, cfg=DEFAULT_CONFIG):
    ind = bg_indices(t, cfg)
    status = "holds" if ind.beta1pp_conclusive else "unknown"
    return _verdict(status, "bg-indices", ind.as_dict())


def check_type_alpha_beta(component: TypeAlphaBetaDensity, points=64):
    top = min(1.0, component.cutoff)
    x = np.logspace(-12, math.log10(top), points)
    rho = np.asarray(component.rho(x), dtype=float)
    c, a, b = component.c, component.alpha, component.beta
    lower = 1.0 / (c * x ** (1 + a))
    upper = c / x ** (1 + b)
    lo_ok = rho >= lower * (1 - 1e-12)
    hi_ok = rho <= upper * (1 + 1e-12)
    ev = {"alpha": a, "beta": b, "c": c, "points": points,
          "lower_violations": int(np.sum(~lo_ok)),
          "upper_violations": int(np.sum(~hi_ok))}
    if not np.all(lo_ok):
        ev["first_lower_violation_x"] = float(x[np.argmin(lo_ok)])
    if not np.all(hi_ok):
        ev["first_upper_violation_x"] = float(x[np.argmin(hi_ok)])
    return _verdict("holds" if np.all(lo_ok & hi_ok) else "fails", "type-ab", ev)


def pro123_limit(t, nu, f=None, cfg=DEFAULT_CONFIG, lambda_grid=None):
    """lambda-limit evidence for one finite measure ``nu``."""
    f = f or GrowthFunctionFamily("log")
    h = get_handle(t, cfg)
    try:
        energy = one_energy(nu, h, cfg.zmax, cfg.tol)
    except (NumericalError, LevyError) as exc:
        return Verdict(Status.UNKNOWN, {"error": str(exc)}, [], [str(exc)])
    caveats = ["a single nu is evidence, not a certificate of (H)"]
    if not energy.converges:
        return Verdict(Status.UNKNOWN, {"one_energy": energy.verdict}, [],
                       caveats + ["nu not of finite 1-energy"])
    z = np.logspace(-6, 12, 18 * 96 + 1)
    A, B, _, _ = h.parts_grid(z)
    nh = np.abs(measure_fourier(nu, z)) ** 2
    region = B > A * f(A)
    lam_grid = lambda_grid if lambda_grid is not None else np.logspace(1, 6, 6)

    def hval(lam):
        integrand = np.where(region, lam / (lam * lam + B * B) * nh, 0.0) * z
        return 2.0 * float(integrate.trapezoid(integrand, np.log(z)))

    rep = limit_lambda(hval, lam_grid)
    ev = {"one_energy": energy.value, "limit": rep.verdict, "floor": rep.floor,
          "values": [[float(l), float(v)] for l, v in rep.values],
          "region_fraction": float(region.mean()), "family": f.kind}
    status = {"tends_to_zero": "holds", "positive": "fails"}.get(rep.verdict, "unknown")
    if not check_hw(t, cfg).holds:
        caveats.append(DENSITY_CAVEAT)
    return _verdict(status, "lambda-limit", ev, [ASYMPTOTIC] + caveats)


def nu_alpha_verdict(t, alpha):
    rep = nu_alpha_mass(t.mu, alpha)
    status = {"converges": "holds", "diverges": "fails"}.get(rep.verdict, "unknown")
    return _verdict(status, "nu-alpha", {"alpha": alpha, **rep.as_dict()})


__all__ = [
    "Status", "Verdict", "GrowthFunctionFamily", "SplitWitness", "CheckConfig",
    "DEFAULT_CONFIG", "ANCHORS", "get_handle", "grid_rays", "bounded_ratio",
    "check_nd", "check_sym", "check_kf", "check_rao", "check_cba", "check_s",
    "range_member", "RangeResult", "check_thm25", "check_thm26",
    "check_loglog_local", "check_repsi_growth", "check_hw", "nu_alpha_mass",
    "nu_alpha_verdict", "bg_indices", "BGIndices", "check_bg",
    "check_type_alpha_beta", "pro123_limit", "structurally_symmetric",
]
