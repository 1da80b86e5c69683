"""Two-process conditions: exponent domination, energy domination, splits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conditions import (
    ANCHORS,
    ASYMPTOTIC,
    DEFAULT_CONFIG,
    GrowthFunctionFamily,
    Status,
    Verdict,
    _directions,
    bg_indices,
    bounded_ratio,
    get_handle,
)
from .errors import InvalidWitness, NumericalError, Unsupported
from .exponent import ExponentHandle, default_grid
from .model import LevyTriplet
from .numerics import integrate_improper

BG_MARGIN = 0.05


@dataclass(frozen=True)
class PairEvidence:
    c_est: float
    gamma: float
    grids: dict

    def __post_init__(self):
        if self.c_est < 0 or not 0 < self.gamma < 0.25:
            raise ValueError("gamma must lie in (0, 1/4) and c_est >= 0")


@dataclass
class PairRay:
    z: np.ndarray
    p1: np.ndarray
    p2: np.ndarray

    # attribute names mirror conditions.Ray so bounded_ratio can be reused
    @property
    def re1(self):
        return self.p1.real

    @property
    def re2(self):
        return self.p2.real


def _handle(x, cfg):
    if isinstance(x, ExponentHandle):
        return x
    if isinstance(x, LevyTriplet):
        return get_handle(x, cfg)
    raise TypeError("expected an ExponentHandle or a LevyTriplet")


def pair_rays(h1, h2, zgrid=None, cfg=DEFAULT_CONFIG):
    h1, h2 = _handle(h1, cfg), _handle(h2, cfg)
    if h1.dim != h2.dim:
        raise ValueError("processes of different dimension")
    z = (default_grid(cfg.zmin_exp, cfg.zmax, cfg.per_decade)
         if zgrid is None else np.asarray(zgrid, dtype=float))
    if h1.dim == 1:
        return [PairRay(z, h1.psi_grid(z), h2.psi_grid(z))]
    rays = []
    for d in _directions(h1.dim):
        pts = z[:, None] * d[None, :]
        rays.append(PairRay(z, h1.psi_grid(pts), h2.psi_grid(pts)))
    return rays


def _v(status, tag, ev, caveats=(ASYMPTOTIC,)):
    return Verdict(Status(status), ev, [(tag, ANCHORS[tag])], list(caveats))


def _guard(fn):
    def wrapped(*args, **kw):
        try:
            return fn(*args, **kw)
        except NumericalError as exc:
            return Verdict(Status.UNKNOWN, {"error": str(exc)}, [],
                           ["exponent evaluation failed"])
    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


@_guard
def check_im_domination(h1, h2, zgrid=None, cfg=DEFAULT_CONFIG):
    """``|Im psi2| <= c (1 + Re psi1 + Re psi2)`` on the grid."""
    rays = pair_rays(h1, h2, zgrid, cfg)
    st, ev = bounded_ratio(
        rays, lambda r: r.p2.imag / (1.0 + r.p1.real + r.p2.real), cfg)
    return _v(st, "im-domination", ev)


def lemma314_gamma(c):
    """``gamma = min(1/4, 1/(4c^2+1)) / 2``, strictly admissible for ``c``."""
    if not c > 0:
        raise ValueError("c must be positive")
    return 0.5 * min(0.25, 1.0 / (4.0 * c * c + 1.0))


def _lemma314_samples(c, n, rng):
    # log-uniform magnitudes with a share of exact zeros, plus the
    # adversarial choice Im psi2 = -sign(Im psi1) * c (1 + Re psi1 + Re psi2)
    def mag(size):
        m = 10.0 ** rng.uniform(-4, 6, size)
        m[rng.random(size) < 0.1] = 0.0
        return m

    x1, x2, y1 = mag(n), mag(n), mag(n) * rng.choice([-1.0, 1.0], n)
    bound = c * (1.0 + x1 + x2)
    u = rng.uniform(-1.0, 1.0, n)
    edge = rng.random(n) < 0.5
    u[edge] = -np.sign(y1[edge]) * rng.uniform(0.9, 1.0, edge.sum())
    y2 = u * bound
    return x1 + 1j * y1, x2 + 1j * y2


def verify_lemma314(c, gamma, samples=100_000, seed=0, psi2_zero=False):
    """Random search for violations of ``|1+psi1+psi2|^2 >= gamma |1+psi1|^2``."""
    rng = np.random.default_rng(seed)
    p1, p2 = _lemma314_samples(c, int(samples), rng)
    if psi2_zero:
        p2 = np.zeros_like(p2)
    lhs = np.abs(1.0 + p1 + p2) ** 2
    rhs = gamma * np.abs(1.0 + p1) ** 2
    bad = lhs < rhs * (1.0 - 1e-12)
    ev = {"c": c, "gamma": gamma, "samples": int(samples),
          "violations": int(bad.sum()),
          "min_ratio": float(np.min(lhs / rhs))}
    if bad.any():
        i = int(np.argmax(bad))
        ev["counterexample"] = {"psi1": [p1[i].real, p1[i].imag],
                                "psi2": [p2[i].real, p2[i].imag]}
    return Verdict(Status.FAILS if bad.any() else Status.HOLDS, ev,
                   [("lemma-gamma", "|1+psi1+psi2|^2 >= gamma |1+psi1|^2 when "
                     "|Im psi2| <= c(1+Re psi1+Re psi2)")],
                   ["randomized search, not a proof"])


def _pro312_ratios(variant):
    def d1(r):
        a1 = 1.0 + r.p1.real
        return a1 + r.p1.imag ** 2 / a1

    if variant == "i":
        return [lambda r: np.abs(r.p2) / (1.0 + r.p1.real)]
    if variant == "ii":
        return [lambda r: r.p2.real / d1(r),
                lambda r: r.p2.imag / (1.0 + r.p1.real + r.p2.real)]
    if variant == "iii":
        return [lambda r: r.p2.real / d1(r),
                lambda r: r.p2.imag ** 2 / ((1.0 + r.p1.real + r.p2.real) * d1(r))]
    raise ValueError(f"unknown variant {variant!r}")


VARIANTS = ("i", "ii", "iii")


def _pro312_direct(rays, variant, cfg):
    parts = [bounded_ratio(rays, f, cfg) for f in _pro312_ratios(variant)]
    statuses = [p[0] for p in parts]
    c = max(p[1].get("c_est", math.inf) for p in parts)
    ev = {"c_est": c, "parts": [dict(p[1], status=p[0]) for p in parts]}
    if all(s == "holds" for s in statuses):
        return "holds", ev
    if any(s == "fails" for s in statuses):
        return "fails", ev
    return "unknown", ev


@_guard
def check_pro312(h1, h2, variant="i", zgrid=None, cfg=DEFAULT_CONFIG):
    """Energy-domination conditions (i), (ii), (iii); (i) => (ii) => (iii).

    A weaker variant that fails numerically but is implied by a stronger
    one that holds is reported as holding, with ``implied_by`` evidence.
    """
    rays = pair_rays(h1, h2, zgrid, cfg)
    st, ev = _pro312_direct(rays, variant, cfg)
    tag = f"energy-domination-{variant}"
    if st != "holds":
        for stronger in VARIANTS[:VARIANTS.index(variant)]:
            s2, ev2 = _pro312_direct(rays, stronger, cfg)
            if s2 == "holds":
                ev = dict(ev2, implied_by=stronger, direct_status=st)
                st = "holds"
                break
    ev["variant"] = variant
    return _v(st, tag, ev)


def energy_domination_pointwise(h1, h2, c, zgrid=None, cfg=DEFAULT_CONFIG):
    """Minimum over the grid of ``Re(1/(1+psi)) / (Re(1/(1+psi1))/(2+3c))``.

    Values ``>= 1`` mean the pointwise 1-energy comparison holds everywhere.
    """
    rays = pair_rays(h1, h2, zgrid, cfg)
    worst = math.inf
    for r in rays:
        lhs = (1.0 / (1.0 + r.p1 + r.p2)).real
        rhs = (1.0 / (1.0 + r.p1)).real / (2.0 + 3.0 * c)
        worst = min(worst, float(np.min(lhs / rhs)))
    return worst


@_guard
def check_pro43(h1, h2, witness, f=None, zgrid=None, cfg=DEFAULT_CONFIG):
    """Split condition with a caller-supplied witness ``Im psi1 = phi11 + phi12``."""
    f = f or GrowthFunctionFamily("log")
    h1, h2 = _handle(h1, cfg), _handle(h2, cfg)
    if h1.dim != 1:
        raise Unsupported("split witnesses are checked for one-dimensional processes")
    z = (default_grid(cfg.zmin_exp, cfg.zmax, cfg.per_decade)
         if zgrid is None else np.asarray(zgrid, dtype=float))
    zz = np.concatenate([-z[::-1], z])
    p1 = h1.psi_grid(zz)
    p2 = h2.psi_grid(zz)
    phi11 = np.asarray(witness.phi1(zz), dtype=float)
    phi12 = np.asarray(witness.phi2(zz), dtype=float)
    resid = np.abs(phi11 + phi12 - p1.imag)
    if np.any(resid > 1e-9 * np.maximum(1.0, np.abs(p1.imag))):
        raise InvalidWitness(
            f"phi11 + phi12 differs from Im psi1 by up to {resid.max():.3g}")
    a1 = 1.0 + p1.real
    r1 = np.abs(phi11) / (a1 * f(a1))
    asum = 1.0 + p1.real + p2.real
    r2 = np.abs(p2.imag) / (asum * f(asum))

    def integrand(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(x)
        for sgn in (1.0, -1.0):
            q = h1.psi_grid(sgn * x)
            out += np.abs(np.asarray(witness.phi2(sgn * x), dtype=float)) / np.abs(1.0 + q) ** 2
        return out

    if np.all(phi12 == 0):
        rep_verdict, rep = "converges", None
    else:
        rep = integrate_improper(integrand, 0.0, tol=cfg.tol)
        rep_verdict = rep.verdict
    ev = {"phi11_sup_ratio": float(r1.max()), "im2_sup_ratio": float(r2.max()),
          "phi12_integral": None if rep is None else rep.as_dict(),
          "family": f.kind, "c": f.c}
    ok1 = r1.max() <= 1.0 + 1e-12
    ok2 = r2.max() <= 1.0 + 1e-12
    if ok1 and ok2 and rep_verdict == "converges":
        st = "holds"
    elif not ok1 or not ok2 or rep_verdict == "diverges":
        st = "fails"
    else:
        st = "unknown"
    return _v(st, "split-witness", ev)


def check_bg_rule(t1, t2, cfg=DEFAULT_CONFIG):
    """``beta2(X2) + 0.05 < beta1''(X1)``."""
    i1, i2 = bg_indices(t1, cfg), bg_indices(t2, cfg)
    ev = {"beta1pp_x1": i1.beta1pp, "beta2_x2": i2.beta2, "margin": BG_MARGIN,
          "x1": i1.as_dict(), "x2": i2.as_dict()}
    if not i1.beta1pp_conclusive:
        return _v("unknown", "bg-rule", ev)
    st = "holds" if i2.beta2 + BG_MARGIN < i1.beta1pp else "fails"
    return _v(st, "bg-rule", ev)


__all__ = [
    "PairEvidence", "check_im_domination", "lemma314_gamma", "verify_lemma314",
    "check_pro312", "energy_domination_pointwise", "check_pro43",
    "check_bg_rule", "pair_rays",
]
