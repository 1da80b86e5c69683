"""Levy triplets, parametric Levy measures and exact measure algebra.

A Levy measure is a sum of parametric components.  Internally every 1-D
density component is flattened into a *profile*: for each side of the
origin and each density family ("key"), a piecewise-constant coefficient
on half-open intervals ``[lo, hi)`` of ``(0, inf)``.  Addition,
restriction, scaling, reflection and subtraction within one family are
exact operations on profiles; anything that would need a new density
family raises :class:`SignedPartNotRepresentable`.

The truncation function is fixed to ``1{|x| < 1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from scipy import integrate, special

from .errors import (
    AtomAtOrigin,
    DimensionMismatch,
    HypothesisNotVerified,
    InfiniteMass,
    NegativeEigenvalue,
    NonIntegrable,
    NonIntegrableLevyMeasure,
    NonSymmetricQ,
    NotDominated,
    SignedPartNotRepresentable,
    SpecError,
)

SYM_TOL = 1e-12
PSD_TOL = 1e-10
ATOM_TOL = 1e-12
DOMINATION_GRID = 256

INF = math.inf


# ---------------------------------------------------------------------------
# density families


@dataclass(frozen=True)
class PowerSumDensity:
    """``rho(x) = sum coef * x**(-1 - index)``, a callable with closed forms."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((float(c), float(i)) for c, i in self.terms)
        if not terms or any(c <= 0 for c, _ in terms):
            raise SpecError("power-sum density needs positive coefficients")
        object.__setattr__(self, "terms", terms)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return sum(c * x ** (-1.0 - i) for c, i in self.terms)


@dataclass(frozen=True)
class Key:
    """A density family: ``power`` (param alpha), ``log`` or ``callable``."""

    kind: str
    alpha: float = 0.0
    rho: Callable | None = None
    # singularity-index bracket for callables, used for moment finiteness
    bracket: tuple = ()

    def density(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "power":
            return x ** (-1.0 - self.alpha)
        if self.kind == "log":
            with np.errstate(divide="ignore"):
                return 1.0 / (x * x * np.abs(np.log(x)))
        return np.asarray(self.rho(x), dtype=float)

    def singularity_index(self):
        """Index s with density ~ x**(-1-s) at 0 (log family: 1 with a log)."""
        if self.kind == "power":
            return self.alpha
        if self.kind == "log":
            return 1.0
        return self.bracket[1] if self.bracket else None

    def power_integral(self, p, a, b):
        """``int_a^b x**p * density(x) dx`` over ``0 <= a < b <= inf``."""
        if b <= a:
            return 0.0
        if self.kind == "power":
            q = p - self.alpha
            if q == 0:
                if a == 0 or b == INF:
                    return INF
                return math.log(b / a)
            if (a == 0 and q < 0) or (b == INF and q > 0):
                return INF
            try:
                hi = 0.0 if b == INF else b ** q
                lo = 0.0 if a == 0 else a ** q
            except OverflowError:
                return INF
            return min((hi - lo) / q, INF)
        if self.kind == "log":
            return _log_family_integral(p, a, b)
        return _callable_integral(self, p, a, b)


def _log_family_integral(p, a, b):
    # int_a^b x**(p-2) / |log x| dx on (0, 1); t = -log x
    if b > 1:
        raise SpecError("log-singular family lives on (0, 1)")
    s = p - 1.0
    tb = -math.log(b) if b < 1 else 0.0
    ta = INF if a == 0 else -math.log(a)
    if s > 0:
        ea = 0.0 if ta == INF else float(special.exp1(s * ta))
        eb = float(special.exp1(s * tb)) if tb > 0 else INF
        return eb - ea
    if tb == 0:
        return INF
    if s == 0:
        return INF if ta == INF else math.log(ta / tb)
    if ta == INF:
        return INF
    u = -s
    return float(special.expi(u * ta) - special.expi(u * tb))


def _callable_integral(key, p, a, b):
    if a == 0 and key.bracket:
        lo_idx, hi_idx = key.bracket
        # rho >= x**(-1-lo_idx)/c near 0
        if p <= lo_idx:
            return INF

    def f(u):
        x = math.exp(u)
        return x ** (p + 1.0) * float(key.rho(x))

    ua = -INF if a == 0 else math.log(a)
    ub = INF if b == INF else math.log(b)
    val, err = integrate.quad(f, ua, ub, limit=400, epsabs=0, epsrel=1e-11)
    if not math.isfinite(val) or err > 1e-6 * max(abs(val), 1e-300):
        return INF
    return val


def _log_key():
    return Key("log")


def _power_key(alpha):
    return Key("power", alpha=float(alpha))


# ---------------------------------------------------------------------------
# profiles: {(side, key): [(lo, hi, coef), ...]} sorted, disjoint, coef != 0


def _merge_segments(segs):
    """Sum overlapping segments into a disjoint piecewise-constant list."""
    points = sorted({x for s in segs for x in s[:2]})
    out = []
    for lo, hi in zip(points, points[1:]):
        c = math.fsum(s[2] for s in segs if s[0] <= lo and hi <= s[1])
        if c != 0.0:
            if out and out[-1][1] == lo and out[-1][2] == c:
                out[-1] = (out[-1][0], hi, c)
            else:
                out.append((lo, hi, c))
    return out


def _profile_add(p1, p2, scale2=1.0):
    out = {}
    for k in set(p1) | set(p2):
        segs = list(p1.get(k, [])) + [(lo, hi, scale2 * c)
                                      for lo, hi, c in p2.get(k, [])]
        merged = _merge_segments(segs)
        if merged:
            out[k] = merged
    return out


def _profile_clip(profile, lo, hi, side):
    """Restrict the ``side`` part of a profile to ``[lo, hi)`` in |x|."""
    out = {}
    for (s, key), segs in profile.items():
        if s != side:
            continue
        kept = [(max(a, lo), min(b, hi), c) for a, b, c in segs
                if max(a, lo) < min(b, hi)]
        if kept:
            out[(s, key)] = kept
    return out


def _clip_signed(profile, lo, hi):
    """Restrict to the signed interval ``[lo, hi)`` of the real line."""
    out = {}
    if hi > 0:
        out.update(_profile_clip(profile, max(lo, 0.0), hi, +1))
    if lo < 0:
        # x in [lo, hi) with x < 0  <=>  |x| in (-min(hi,0), -lo]
        out.update(_profile_clip(profile, -min(hi, 0.0), -lo, -1))
    return out


# ---------------------------------------------------------------------------
# components


class LevyComponent:
    """Base class of the parametric pieces of a Levy measure."""

    dim = 1

    def profile(self):
        return {}

    def atoms(self):
        return {}


@dataclass(frozen=True)
class StablePowerDensity(LevyComponent):
    """Density ``c_plus x**(-1-alpha)`` on (0, cutoff), ``c_minus |x|**(-1-alpha)`` on (-cutoff, 0)."""

    alpha: float
    c_plus: float
    c_minus: float = 0.0
    cutoff: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise SpecError("alpha must be positive")
        if self.c_plus < 0 or self.c_minus < 0:
            raise SpecError("stable weights must be nonnegative")
        if not self.cutoff > 0:
            raise SpecError("cutoff must be positive")

    def profile(self):
        key = _power_key(self.alpha)
        out = {}
        if self.c_plus > 0:
            out[(+1, key)] = [(0.0, float(self.cutoff), float(self.c_plus))]
        if self.c_minus > 0:
            out[(-1, key)] = [(0.0, float(self.cutoff), float(self.c_minus))]
        return out


@dataclass(frozen=True)
class LogSingularDensity(LevyComponent):
    """Density ``c / (x**2 |log x|)`` on (0, delta)."""

    c: float
    delta: float

    def __post_init__(self):
        if not self.c > 0:
            raise SpecError("c must be positive")
        if not 0 < self.delta < 1:
            raise SpecError("delta must lie in (0, 1)")

    def profile(self):
        return {(+1, _log_key()): [(0.0, float(self.delta), float(self.c))]}


@dataclass(frozen=True)
class Atoms(LevyComponent):
    """Finitely many point masses ``w_k`` at ``x_k``."""

    points: tuple

    def __post_init__(self):
        pts = []
        for x, w in self.points:
            x = tuple(float(v) for v in np.atleast_1d(x))
            w = float(w)
            if not w > 0 or not math.isfinite(w):
                raise SpecError("atom weights must be positive and finite")
            pts.append((x, w))
        dims = {len(x) for x, _ in pts}
        if len(dims) > 1:
            raise DimensionMismatch("atoms of mixed dimension")
        object.__setattr__(self, "points", tuple(pts))

    @property
    def dim(self):
        return len(self.points[0][0]) if self.points else 1

    def atoms(self):
        out = {}
        for x, w in self.points:
            out[x] = out.get(x, 0.0) + w
        return out


@dataclass(frozen=True)
class TypeAlphaBetaDensity(LevyComponent):
    """Subordinator jump density ``rho`` on (0, cutoff].

    ``alpha``, ``beta`` and ``c`` are the claimed type-(alpha, beta)
    bracket; :func:`levyhunt.conditions.check_type_alpha_beta` verifies it.
    """

    rho: Callable
    alpha: float
    beta: float
    c: float
    cutoff: float = 1.0

    def __post_init__(self):
        if not 0 < self.alpha < self.beta < 1:
            raise SpecError("type-(alpha, beta) needs 0 < alpha < beta < 1")
        if not self.c > 0:
            raise SpecError("c must be positive")

    def profile(self):
        if isinstance(self.rho, PowerSumDensity):
            out = {}
            for coef, idx in self.rho.terms:
                out = _profile_add(out, {(+1, _power_key(idx)):
                                         [(0.0, float(self.cutoff), coef)]})
            return out
        key = Key("callable", rho=self.rho, bracket=(self.alpha, self.beta))
        return {(+1, key): [(0.0, float(self.cutoff), 1.0)]}


@dataclass(frozen=True)
class ScaledRestriction(LevyComponent):
    """``k`` times ``inner`` restricted to the signed interval ``[lo, hi)``."""

    inner: LevyComponent
    k: float
    lo: float
    hi: float

    def __post_init__(self):
        if self.k < 0:
            raise SpecError("scale must be nonnegative")
        if not self.lo < self.hi:
            raise SpecError("empty restriction interval")
        if self.inner.dim != 1:
            raise DimensionMismatch("restrictions are 1-D only")

    def profile(self):
        clipped = _clip_signed(self.inner.profile(), self.lo, self.hi)
        return _profile_add({}, clipped, self.k)

    def atoms(self):
        return {x: self.k * w for x, w in self.inner.atoms().items()
                if self.lo <= x[0] < self.hi and self.k > 0}


@dataclass(frozen=True)
class Reflected(LevyComponent):
    """Image of ``inner`` under ``x -> -x``."""

    inner: LevyComponent

    @property
    def dim(self):
        return self.inner.dim

    def profile(self):
        return {(-s, k): list(v) for (s, k), v in self.inner.profile().items()}

    def atoms(self):
        return {tuple(-v for v in x): w for x, w in self.inner.atoms().items()}


# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True)
class LevyMeasure:
    """Sum of :class:`LevyComponent` objects."""

    components: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        dims = {c.dim for c in self.components}
        if len(dims) > 1:
            raise DimensionMismatch("components of mixed dimension")
        if dims and dims != {1} and any(c.profile() for c in self.components):
            raise DimensionMismatch("density components are 1-D only")

    @property
    def dim(self):
        return self.components[0].dim if self.components else None

    @cached_property
    def profile(self):
        out = {}
        for c in self.components:
            out = _profile_add(out, c.profile())
        return out

    @cached_property
    def atoms(self):
        out = {}
        for c in self.components:
            for x, w in c.atoms().items():
                out[x] = out.get(x, 0.0) + w
        return {x: w for x, w in out.items() if w > 0}

    @property
    def is_empty(self):
        return not self.profile and not self.atoms

    def __add__(self, other):
        return LevyMeasure(self.components + other.components)

    def segments(self, side=None):
        """Yield ``(side, key, lo, hi, coef)`` for every density segment."""
        for (s, key), segs in sorted(self.profile.items(),
                                     key=lambda kv: _sort_key(kv[0])):
            if side is None or s == side:
                for lo, hi, c in segs:
                    yield s, key, lo, hi, c

    def density(self, x, side=+1):
        """Density of the side-``side`` part at ``|x| = x`` (array)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for s, key, lo, hi, c in self.segments(side):
            inside = (x >= lo) & (x < hi) & (x > 0)
            if np.any(inside):
                out[inside] += c * key.density(x[inside])
        return out

    def power_integral(self, p, lo, hi, lo_closed=False, hi_closed=False):
        """``int |x|**p mu(dx)`` over the signed interval from ``lo`` to ``hi`` (1-D)."""
        total = 0.0
        for s, key, a, b, c in self.segments():
            if s > 0:
                u, v = max(a, lo, 0.0), min(b, hi)
            else:
                u, v = max(a, -hi, 0.0), min(b, -lo)
            if u < v:
                val = key.power_integral(p, u, v)
                if val == INF:
                    return INF
                total += c * val
        for x, w in self.atoms.items():
            x0 = x[0]
            above = x0 > lo or (lo_closed and x0 == lo)
            below = x0 < hi or (hi_closed and x0 == hi)
            if above and below:
                total += w * abs(x0) ** p
        return total

    def total_mass(self):
        if self.dim not in (None, 1):
            return math.fsum(self.atoms.values())
        return self.power_integral(0.0, -INF, INF)


def _sort_key(k):
    side, key = k
    return (side, key.kind, key.alpha, id(key.rho) if key.rho else 0)


def measure_from_parts(profile, atoms):
    """Rebuild a :class:`LevyMeasure` from a profile and atom map."""
    comps = []
    # merge mirrored power segments starting at 0 into stable components
    power = {}
    for (s, key), segs in profile.items():
        for lo, hi, c in segs:
            if key.kind == "power" and lo == 0.0:
                power.setdefault((key.alpha, hi), {})[s] = c
            else:
                comps.append(_segment_component(s, key, lo, hi, c))
    for (alpha, hi), sides in sorted(power.items()):
        comps.append(StablePowerDensity(alpha, sides.get(+1, 0.0),
                                        sides.get(-1, 0.0), hi))
    if atoms:
        comps.append(Atoms(tuple((x, w) for x, w in sorted(atoms.items()))))
    return LevyMeasure(tuple(_sorted_components(comps)))


def _sorted_components(comps):
    order = {StablePowerDensity: 0, LogSingularDensity: 1,
             TypeAlphaBetaDensity: 2, ScaledRestriction: 3, Reflected: 4,
             Atoms: 5}
    return sorted(comps, key=lambda c: order.get(type(c), 9))


def _segment_component(side, key, lo, hi, coef):
    if key.kind == "power":
        base = StablePowerDensity(key.alpha, 1.0, 0.0, INF)
        comp = ScaledRestriction(base, coef, lo, hi)
    elif key.kind == "log":
        if lo == 0.0:
            comp = LogSingularDensity(coef, hi)
        else:
            comp = ScaledRestriction(LogSingularDensity(1.0, hi), coef, lo, hi)
    else:
        a, b = key.bracket
        base = TypeAlphaBetaDensity(key.rho, a, b, 1.0 + 1e-9, INF)
        comp = ScaledRestriction(base, coef, lo, hi)
    return Reflected(comp) if side < 0 else comp


def _atoms_add(a1, a2, scale2=1.0, clip=False):
    out = dict(a1)
    for x, w in a2.items():
        out[x] = out.get(x, 0.0) + scale2 * w
    cleaned = {}
    for x, w in out.items():
        if w < -ATOM_TOL * max(1.0, abs(a1.get(x, 0.0))):
            if clip:
                continue
            raise NotDominated(f"atom at {x} would get negative weight {w}")
        if w > ATOM_TOL * max(1.0, abs(a1.get(x, 0.0))):
            cleaned[x] = w
    return cleaned


def reflect(mu):
    return measure_from_parts(
        {(-s, k): list(v) for (s, k), v in mu.profile.items()},
        {tuple(-v for v in x): w for x, w in mu.atoms.items()})


def restrict(mu, lo, hi):
    """Restriction of a 1-D measure to the signed interval ``[lo, hi)``."""
    return measure_from_parts(
        _clip_signed(mu.profile, lo, hi),
        {x: w for x, w in mu.atoms.items() if lo <= x[0] < hi})


def scale(mu, k):
    if k == 0:
        return LevyMeasure()
    return measure_from_parts(_profile_add({}, mu.profile, k),
                              {x: k * w for x, w in mu.atoms.items()})


def subtract(mu, nu):
    """Exact ``mu - nu``; requires ``nu <= mu`` family by family."""
    prof = _profile_add(mu.profile, nu.profile, -1.0)
    for (s, key), segs in prof.items():
        for lo, hi, c in segs:
            if c < -ATOM_TOL * 10:
                if (s, key) not in mu.profile:
                    raise SignedPartNotRepresentable(
                        f"{key.kind} density on side {s:+d} has no matching "
                        "family in the minuend")
                raise NotDominated(
                    f"{key.kind} coefficient negative on [{lo}, {hi})")
    prof = {k: [(lo, hi, c) for lo, hi, c in v if c > ATOM_TOL * 10]
            for k, v in prof.items()}
    prof = {k: v for k, v in prof.items() if v}
    return measure_from_parts(prof, _atoms_add(mu.atoms, nu.atoms, -1.0))


def positive_part_difference(mu, nu):
    """``(mu - nu)^+`` when it stays inside the supported families.

    Atoms and densities are mutually singular, so only same-kind parts
    interact.  Within the density part, a family whose coefficient turns
    negative is clipped to zero only where no other family carries mass;
    otherwise the positive part mixes families and is not representable.
    """
    diff = _profile_add(mu.profile, nu.profile, -1.0)
    out = {}
    for (s, key), segs in diff.items():
        kept = []
        for lo, hi, c in segs:
            if c > 0:
                kept.append((lo, hi, c))
                continue
            for (s2, key2), segs2 in diff.items():
                if s2 != s or key2 == key:
                    continue
                if any(c2 > 0 and max(lo, a) < min(hi, b)
                       for a, b, c2 in segs2):
                    raise SignedPartNotRepresentable(
                        "positive part mixes density families")
        if kept:
            out[(s, key)] = kept
    return measure_from_parts(out, _atoms_add(mu.atoms, nu.atoms, -1.0,
                                              clip=True))


# ---------------------------------------------------------------------------
# domination


@dataclass(frozen=True)
class DominationResult:
    ok: bool
    max_violation: float
    detail: str = ""


def dominates(lhs, rhs, side=None, grid=DOMINATION_GRID):
    """Check ``lhs <= rhs`` (1-D) atom-by-atom and on a log grid of densities.

    The density comparison is numerical (``grid`` log-spaced points per
    side plus a singularity-index comparison for power families), so a
    positive answer means "numerically verified", not proven.
    """
    sides = (+1, -1) if side is None else (side,)
    worst = 0.0
    for x, w in lhs.atoms.items():
        if side is not None and np.sign(x[0]) != side:
            continue
        have = rhs.atoms.get(x, 0.0)
        if w > have * (1 + ATOM_TOL) + ATOM_TOL:
            return DominationResult(False, w - have, f"atom at {x[0]}")
    for s in sides:
        lsegs = list(lhs.segments(s))
        if not lsegs:
            continue
        rsegs = list(rhs.segments(s))
        # power singularities at the origin: compare indices structurally
        l0 = [k.singularity_index() for _, k, lo, _, _ in lsegs if lo == 0]
        r0 = [k.singularity_index() for _, k, lo, _, _ in rsegs if lo == 0]
        l0 = [v for v in l0 if v is not None]
        r0 = [v for v in r0 if v is not None]
        lkinds = {k.kind for _, k, lo, _, _ in lsegs if lo == 0}
        rkinds = {k.kind for _, k, lo, _, _ in rsegs if lo == 0}
        if l0 and (not r0 or max(l0) > max(r0) + 1e-12):
            return DominationResult(False, INF,
                                    f"side {s:+d}: stronger singularity at 0")
        if "log" in lkinds and "log" not in rkinds and max(r0, default=0) <= 1:
            return DominationResult(False, INF,
                                    f"side {s:+d}: log singularity not covered")
        top = max(hi for _, _, _, hi, _ in lsegs)
        top = min(top, 1e6) if top == INF else top
        xs = np.unique(np.concatenate([
            np.geomspace(1e-100, top, grid, endpoint=False),
            np.geomspace(1e-12, top, grid, endpoint=False),
            # probe just inside every breakpoint
            [b * (1 - 1e-9) for *_, a, b, _ in lsegs if b < INF and b > 0],
            [a * (1 + 1e-9) for *_, a, b, _ in lsegs if a > 0],
        ]))
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            left = lhs.density(xs, s)
            right = rhs.density(xs, s)
        excess = left - right * (1 + 1e-12)
        bad = excess > 1e-12 * np.maximum(np.abs(right), 1.0)
        if np.any(bad):
            i = int(np.argmax(np.where(bad, excess / np.maximum(right, 1e-300), -INF)))
            return DominationResult(False, float(excess[i]),
                                    f"side {s:+d}: density exceeds at x={xs[i]:.3g}")
        rel = np.where(right > 0, left / np.where(right > 0, right, 1), 0)
        worst = max(worst, float(np.max(rel, initial=0.0)))
    return DominationResult(True, worst, "numerically verified on log grid")


# ---------------------------------------------------------------------------
# triplets


@dataclass(frozen=True, eq=False)
class LevyTriplet:
    """Drift ``a``, Gaussian covariance ``Q`` and Levy measure ``mu``.

    Build through :func:`validate_triplet`, which checks the invariants and
    caches the eigendecomposition of ``Q``.
    """

    dim: int
    a: np.ndarray
    Q: np.ndarray
    mu: LevyMeasure
    eigvals: np.ndarray = field(repr=False, default=None)
    eigvecs: np.ndarray = field(repr=False, default=None)

    @property
    def is_1d(self):
        return self.dim == 1

    @property
    def q_scalar(self):
        return float(self.Q[0, 0])

    def with_measure(self, mu, a=None, Q=None):
        return validate_triplet(self.a if a is None else a,
                                self.Q if Q is None else Q, mu)


def _check_integrability(mu):
    for s, key, lo, hi, c in mu.segments():
        if lo == 0.0:
            idx = key.singularity_index()
            if key.kind == "power" and idx >= 2:
                raise NonIntegrableLevyMeasure(
                    f"singularity exponent {1 + idx} >= 3 at the origin")
            if key.kind == "callable" and idx is not None and idx >= 2:
                raise NonIntegrableLevyMeasure("callable density too singular")
        if hi == INF and key.kind == "power" and key.alpha <= 0:
            raise NonIntegrableLevyMeasure("infinite mass away from the origin")


def validate_triplet(a, Q, mu=None):
    """Validate raw ``(a, Q, mu)`` and return a :class:`LevyTriplet`."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if a.ndim != 1:
        raise DimensionMismatch("drift must be a vector")
    n = a.shape[0]
    Q = np.asarray(Q, dtype=float)
    if Q.ndim == 0:
        Q = Q.reshape(1, 1)
    if Q.shape != (n, n):
        raise DimensionMismatch(f"Q has shape {Q.shape}, expected {(n, n)}")
    if not np.all(np.isfinite(Q)) or not np.all(np.isfinite(a)):
        raise SpecError("non-finite entries")
    scale_q = max(1.0, float(np.max(np.abs(Q))))
    if np.max(np.abs(Q - Q.T)) > SYM_TOL * scale_q:
        raise NonSymmetricQ("Q is not symmetric")
    Q = 0.5 * (Q + Q.T)
    w, v = np.linalg.eigh(Q)
    if w.min() < -PSD_TOL:
        raise NegativeEigenvalue(f"Q has eigenvalue {w.min():.6g}")
    w = np.clip(w, 0.0, None)
    mu = LevyMeasure() if mu is None else mu
    if not isinstance(mu, LevyMeasure):
        mu = LevyMeasure(tuple(mu))
    if mu.dim is not None and mu.dim != n:
        raise DimensionMismatch(f"Levy measure of dim {mu.dim}, triplet dim {n}")
    for x in mu.atoms:
        if all(v == 0.0 for v in x):
            raise AtomAtOrigin("Levy measure has an atom at the origin")
    _check_integrability(mu)
    a.setflags(write=False)
    Q.setflags(write=False)
    return LevyTriplet(n, a, Q, mu, w, v)


def zero_triplet(dim=1):
    return validate_triplet(np.zeros(dim), np.zeros((dim, dim)))


@dataclass(frozen=True)
class FiniteMeasure:
    """Discrete finite measure ``sum w_k delta_{x_k}`` (atoms may sit at 0)."""

    points: tuple

    def __post_init__(self):
        pts = tuple((tuple(float(v) for v in np.atleast_1d(x)), float(w))
                    for x, w in self.points)
        if not pts or any(not w > 0 for _, w in pts):
            raise SpecError("finite measure needs positive weights")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self):
        return len(self.points[0][0])

    @property
    def total_mass(self):
        return math.fsum(w for _, w in self.points)


# ---------------------------------------------------------------------------
# operations


def _require_1d(mu):
    if mu.dim not in (None, 1):
        raise DimensionMismatch("operation defined for 1-D measures only")


def variation_integral(mu, side="both"):
    """``int (1 ^ |x|) mu(dx)`` over the requested side; ``inf`` when divergent."""
    _require_1d(mu)
    parts = {"positive": [(0.0, 1.0, False)], "negative": [(-1.0, 0.0, True)],
             "both": [(0.0, 1.0, False), (-1.0, 0.0, True)]}
    if side not in parts:
        raise ValueError(f"unknown side {side!r}")
    total = 0.0
    for lo, hi, neg in parts[side]:
        small = mu.power_integral(1.0, lo, hi)
        if neg:
            large = mu.power_integral(0.0, -INF, -1.0, hi_closed=True)
        else:
            large = mu.power_integral(0.0, 1.0, INF, lo_closed=True)
        if small == INF or large == INF:
            return INF
        total += small + large
    return total


def truncated_moment(mu, p, eps):
    """``int_{|x| < eps} |x|**p mu(dx)``."""
    _require_1d(mu)
    if not p >= 0:
        raise ValueError("p must be nonnegative")
    if not 0 < eps:
        raise ValueError("eps must be positive")
    val = mu.power_integral(float(p), -eps, eps)
    if val == INF:
        raise NonIntegrable(f"int |x|^{p} mu(dx) diverges near 0")
    return val


def signed_first_moment(mu, radius=1.0):
    """``int_{|x| < radius} x mu(dx)`` as a vector."""
    if mu.dim in (None, 1):
        pos = mu.power_integral(1.0, 0.0, radius)
        neg = mu.power_integral(1.0, -radius, 0.0)
        if pos == INF or neg == INF:
            raise NonIntegrable("first moment diverges near 0")
        return np.array([pos - neg])
    out = np.zeros(mu.dim)
    for x, w in mu.atoms.items():
        xv = np.array(x)
        if np.linalg.norm(xv) < radius:
            out += w * xv
    return out


def sum_triplets(t1, t2):
    """Triplet of the independent sum: ``(a1 + a2, Q1 + Q2, mu1 + mu2)``."""
    if t1.dim != t2.dim:
        raise DimensionMismatch("triplets of different dimension")
    return validate_triplet(t1.a + t2.a, t1.Q + t2.Q, t1.mu + t2.mu)


def split_pm(mu):
    """Return ``(mu_plus, mu_minus, mu_minus_reflected)``."""
    _require_1d(mu)
    plus = restrict(mu, 0.0, INF)
    minus = restrict(mu, -INF, 0.0)
    return plus, minus, reflect(minus)


@dataclass(frozen=True)
class HypothesisCheck:
    ok: bool
    reasons: tuple
    evidence: dict


def thm25_hypothesis(t, k, delta, nu=None):
    """Check the hypotheses of the one-sided domination criterion.

    ``Q = 0``, ``int (1 ^ x) mu_plus = inf``, ``int_(0,delta) x nu < inf`` and
    ``reflect(mu_minus) <= k mu_plus + nu``.
    """
    nu = LevyMeasure() if nu is None else nu
    reasons = []
    ev = {"k": float(k), "delta": float(delta)}
    if not t.is_1d:
        return HypothesisCheck(False, ("requires a 1-D process",), ev)
    if not 0 <= k < 1:
        reasons.append("k outside [0, 1)")
    if not 0 < delta < 1:
        reasons.append("delta outside (0, 1)")
    if t.q_scalar > PSD_TOL:
        reasons.append("Gaussian part present (Q > 0)")
    plus, _, minus_bar = split_pm(t.mu)
    var_plus = variation_integral(plus, "positive")
    ev["variation_plus"] = var_plus
    if var_plus != INF:
        reasons.append("positive jumps have finite variation")
    if nu.dim not in (None, 1) or restrict(nu, -INF, 0.0).is_empty is False:
        reasons.append("nu must live on (0, inf)")
    nu_moment = nu.power_integral(1.0, 0.0, delta)
    ev["nu_first_moment"] = nu_moment
    if nu_moment == INF:
        reasons.append("int_(0,delta) x nu(dx) diverges")
    dom = dominates(minus_bar, scale(plus, k) + nu, side=+1)
    ev["domination"] = dom.detail
    ev["domination_max_ratio"] = dom.max_violation
    if not dom.ok:
        reasons.append("reflected negative jumps not dominated: " + dom.detail)
    return HypothesisCheck(not reasons, tuple(reasons), ev)


def decompose_thm25(t, k, delta, nu=None):
    """Split ``t`` into ``(t1, t2)`` with ``t2`` symmetric pure-jump.

    ``mu2`` is the symmetric measure equal to ``(reflect(mu_minus) - nu)^+``
    on ``(0, delta)``; ``t1 = (a, 0, mu - mu2)`` and ``t2 = (0, 0, mu2)``.
    """
    nu = LevyMeasure() if nu is None else nu
    hyp = thm25_hypothesis(t, k, delta, nu)
    if not hyp.ok:
        raise HypothesisNotVerified("; ".join(hyp.reasons))
    _, _, minus_bar = split_pm(t.mu)
    pos = restrict(positive_part_difference(minus_bar, nu), 0.0, delta)
    mu2 = pos + reflect(pos)
    mu2 = measure_from_parts(mu2.profile, mu2.atoms)
    mu1 = subtract(t.mu, mu2)
    t1 = validate_triplet(t.a, t.Q, mu1)
    t2 = validate_triplet(np.zeros(1), np.zeros((1, 1)), mu2)
    return t1, t2


def decompose_pro35(t, mu1):
    """Remove a finite part ``mu1 <= mu`` and shift the drift to compensate.

    Returns ``(a', Q, mu - mu1)`` with ``a' = a + int_{|x|<1} x mu1(dx)``.
    """
    if mu1.dim is not None and mu1.dim != t.dim:
        raise DimensionMismatch("mu1 dimension differs from the triplet")
    mass = mu1.total_mass()
    if mass == INF or not math.isfinite(mass):
        raise InfiniteMass("mu1 must be a finite measure")
    if t.dim == 1:
        dom = dominates(mu1, t.mu)
        if not dom.ok:
            raise NotDominated(dom.detail)
    rest = subtract(t.mu, mu1)
    a_prime = t.a + signed_first_moment(mu1)
    return validate_triplet(a_prime, t.Q, rest)

