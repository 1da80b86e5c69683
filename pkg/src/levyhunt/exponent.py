"""Levy-Khintchine exponents.

``psi(z) = i<a,z> + 1/2 <z,Qz> + int (1 - e^{i<z,x>} + i<z,x> 1{|x|<1}) mu(dx)``

Density segments are evaluated for ``z > 0`` on the positive half-line;
the negative side contributes the complex conjugate and ``psi(-z)`` is
``conj(psi(z))``.

Power families ``x**(-1-alpha)`` use a semi-analytic path: power series
for ``int_0^R (1 - cos u) u**(-1-alpha) du`` and the sine analogue up to
``R = 4``, exact tail terms, and an asymptotic expansion (or short
quadrature) for the oscillatory remainder.  Every other family goes
through generic quadrature with the substitution ``x = e^{-t}`` near the
origin and QUADPACK's Fourier-weighted rules away from it.
"""

from __future__ import annotations

import math
import threading
import warnings
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import DimensionMismatch, QuadratureFailure, Unsupported
from .model import INF, FiniteMeasure, Key, LevyTriplet
from .numerics import ConvergenceReport, integrate_improper

SERIES_R = 4.0
ASYMPTOTIC_R = 40.0
QUAD_RTOL = 1e-11
ACCEPT_RTOL = 1e-7
T_CAP = 200.0


# ---------------------------------------------------------------------------
# power family helpers


def _series_k(R, alpha):
    # int_0^R (1 - cos u) u^(-1-alpha) du
    out = np.zeros_like(R)
    R2 = R * R
    term_pow = R ** (2.0 - alpha)
    fact = 2.0
    for k in range(1, 40):
        out += (-1) ** (k + 1) * term_pow / (fact * (2 * k - alpha))
        term_pow = term_pow * R2
        fact *= (2 * k + 1) * (2 * k + 2)
    return out


def _series_j(R, alpha):
    # int_0^R (u - sin u) u^(-1-alpha) du
    out = np.zeros_like(R)
    R2 = R * R
    term_pow = R ** (3.0 - alpha)
    fact = 6.0
    for k in range(1, 40):
        out += (-1) ** (k + 1) * term_pow / (fact * (2 * k + 1 - alpha))
        term_pow = term_pow * R2
        fact *= (2 * k + 2) * (2 * k + 3)
    return out


def _tail_asymptotic(R, s):
    """``int_R^inf e^{iu} u^{-s} du`` for large ``R`` (array)."""
    total = np.zeros(R.shape, dtype=complex)
    term = np.ones(R.shape, dtype=complex)
    for k in range(60):
        total += term
        nxt = term * (-1j) * (s + k) / R
        if np.all(np.abs(nxt) < 1e-18):
            break
        term = nxt
    return 1j * np.exp(1j * R) * R ** (-s) * total


@lru_cache(maxsize=256)
def _tail_at(R, s):
    """Scalar ``int_R^inf e^{iu} u^{-s} du`` for ``4 <= R <= 40``."""
    if R >= ASYMPTOTIC_R:
        return complex(_tail_asymptotic(np.array([R]), s)[0])
    opts = dict(epsabs=1e-15, epsrel=1e-12, limit=200)
    # QUADPACK flags roundoff on these smooth integrands when the result is
    # already at machine precision (checked against mpmath); silence it here
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        c, _ = integrate.quad(lambda u: u ** (-s), R, ASYMPTOTIC_R,
                              weight="cos", wvar=1.0, **opts)
        si, _ = integrate.quad(lambda u: u ** (-s), R, ASYMPTOTIC_R,
                               weight="sin", wvar=1.0, **opts)
    return complex(c, si) + _tail_at(ASYMPTOTIC_R, s)


def _tail(R, s):
    R = np.asarray(R, dtype=float)
    out = np.zeros(R.shape, dtype=complex)
    big = R >= ASYMPTOTIC_R
    if np.any(big):
        out[big] = _tail_asymptotic(R[big], s)
    for i in np.flatnonzero(~big & np.isfinite(R)):
        out[i] = _tail_at(float(R[i]), s)
    return out


def _xpow_integral(a, b, q):
    """Elementwise ``int_a^b x**q dx`` (0 where b <= a)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.zeros(np.broadcast(a, b).shape)
    a, b = np.broadcast_arrays(a, b)
    m = b > a
    if q == -1.0:
        out[m] = np.log(b[m] / a[m])
    else:
        bb = np.where(np.isinf(b[m]), 0.0, b[m] ** (q + 1.0))
        out[m] = (bb - a[m] ** (q + 1.0)) / (q + 1.0)
    return out


def _power_G(z, r, alpha):
    """``int_0^r (1 - e^{izx} + izx 1{x<1}) x^(-1-alpha) dx`` for z > 0."""
    z = np.asarray(z, dtype=float)
    x0 = np.minimum(r, SERIES_R / z)
    R0 = z * x0
    za = z ** alpha
    re = za * _series_k(R0, alpha)
    im = za * _series_j(R0, alpha) - z * _xpow_integral(np.minimum(1.0, x0), x0, -alpha)
    far = r > SERIES_R / z
    if np.any(far):
        zf, x0f, zaf = z[far], x0[far], za[far]
        s = 1.0 + alpha
        diff = _tail(np.full(zf.shape, SERIES_R), s) - (
            _tail(zf * r, s) if r < INF else 0.0)
        re[far] += _xpow_integral(x0f, r, -1.0 - alpha) - zaf * diff.real
        im[far] += zf * _xpow_integral(x0f, min(r, 1.0), -alpha) - zaf * diff.imag
    return re + 1j * im


def power_segment(z, alpha, lo, hi):
    """Closed-form-backed segment integral for the power family (z > 0)."""
    g = _power_G(z, hi, alpha)
    if lo > 0:
        g = g - _power_G(z, lo, alpha)
    return g


# ---------------------------------------------------------------------------
# generic quadrature


def _one_minus_cos(y):
    s = math.sin(0.5 * y)
    return 2.0 * s * s


def _y_minus_sin(y):
    if abs(y) < 1e-2:
        y2 = y * y
        return y * y2 / 6.0 * (1.0 - y2 / 20.0 * (1.0 - y2 / 42.0))
    return y - math.sin(y)


def _quad(f, a, b, errs, **kw):
    if not b > a:
        return 0.0
    opts = dict(epsabs=0.0, epsrel=QUAD_RTOL, limit=500)
    opts.update(kw)
    val, err = integrate.quad(f, a, b, **opts)
    errs.append((val, err))
    return val


def _fourier_tail(g, x1, z, weight, errs):
    """``int_x1^inf g(x) w(z x) dx`` by QAWF.

    QAWF's cycle extrapolation occasionally stalls when ``x1`` sits on a
    cycle boundary; a quarter-period shift (gap covered by QAWO) fixes it.
    """
    kw = dict(weight=weight, wvar=z, epsabs=1e-15, limlst=100)
    trial = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val = _quad(g, x1, INF, trial, **kw)
        if trial[-1][1] > 1e-10 * max(1.0, abs(val)):
            trial = []
            x2 = x1 + 0.5 * math.pi / z
            val = (_quad(g, x1, x2, trial, weight=weight, wvar=z)
                   + _quad(g, x2, INF, trial, **kw))
    errs.extend(trial)
    return val


def generic_segment(key, z, lo, hi):
    """Quadrature for one density segment at scalar ``z > 0``.

    Returns ``(value, abs_error_estimate)``.
    """
    errs = []
    rho = key.density
    # below x1 there are at most ~8 oscillations: integrate in t = -log x
    x1 = min(hi, max(lo, 16.0 * math.pi / z))

    def near(lo_x, hi_x, inside_unit):
        tl = -math.log(hi_x)
        th = INF if lo_x == 0 else -math.log(lo_x)
        tail = 0j
        if th > T_CAP:
            # below e^-T_CAP use the leading Taylor terms of the integrand
            xc = math.exp(-T_CAP)
            th = T_CAP
            tail = complex(0.5 * z * z * key.power_integral(2.0, 0.0, xc),
                           z ** 3 / 6.0 * key.power_integral(3.0, 0.0, xc)
                           if inside_unit else 0.0)

        def f_re(t):
            x = math.exp(-t)
            return _one_minus_cos(z * x) * float(rho(x)) * x

        def f_im(t):
            x = math.exp(-t)
            y = z * x
            g = _y_minus_sin(y) if inside_unit else -math.sin(y)
            return g * float(rho(x)) * x

        return tail + complex(_quad(f_re, tl, th, errs),
                              _quad(f_im, tl, th, errs))

    val = 0j
    if x1 > lo:
        if lo < 1.0 < x1:
            val += near(lo, 1.0, True) + near(1.0, x1, False)
        else:
            val += near(lo, x1, x1 <= 1.0)
    if hi > x1:
        g = lambda x: float(rho(x))
        mass = key.power_integral(0.0, x1, hi)
        first = z * key.power_integral(1.0, x1, min(hi, 1.0)) if x1 < 1 else 0.0
        if hi == INF:
            c = _fourier_tail(g, x1, z, "cos", errs)
            s = _fourier_tail(g, x1, z, "sin", errs)
        else:
            c = _quad(g, x1, hi, errs, weight="cos", wvar=z)
            s = _quad(g, x1, hi, errs, weight="sin", wvar=z)
        val += complex(mass - c, first - s)
    err = math.fsum(e for _, e in errs)
    return val, err


# ---------------------------------------------------------------------------
# handle


class ExponentHandle:
    """Evaluator for ``psi`` of a validated triplet.

    ``strategy`` is ``"auto"`` (closed forms where available) or
    ``"quadrature"`` (force generic quadrature).  Results are cached by the
    bit pattern of ``z``; the cache is guarded by a lock so one handle can
    be shared between threads.
    """

    def __init__(self, triplet: LevyTriplet, strategy="auto", threads=1,
                 strict=True):
        if strategy not in ("auto", "quadrature"):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.triplet = triplet
        self.strategy = strategy
        self.threads = max(1, int(threads))
        self.strict = strict
        self._cache = {}
        self._lock = threading.Lock()
        self.segments = list(triplet.mu.segments())
        self.atoms = [(np.array(x), w) for x, w in sorted(triplet.mu.atoms.items())]
        self.max_error = 0.0

    @property
    def dim(self):
        return self.triplet.dim

    def component_strategy(self, key):
        if self.strategy == "auto" and key.kind == "power":
            return "closed_form"
        return "quadrature"

    # -- core evaluation -------------------------------------------------

    def _segments_positive(self, zpos):
        """Sum of density-segment integrals for an array of z > 0."""
        out = np.zeros(zpos.shape, dtype=complex)
        for side, key, lo, hi, c in self.segments:
            if (self.component_strategy(key) == "closed_form"
                    and (lo == 0 or key.alpha < 2)):
                v = power_segment(zpos, key.alpha, lo, hi)
            else:
                v = np.empty(zpos.shape, dtype=complex)
                for i, zi in enumerate(zpos):
                    vi, err = generic_segment(key, float(zi), lo, hi)
                    tol = max(ACCEPT_RTOL * abs(vi), 1e-12)
                    if err > tol and self.strict:
                        raise QuadratureFailure(
                            f"{key.kind} segment at z={zi:.6g}", c * vi, c * err)
                    self.max_error = max(self.max_error, c * err)
                    v[i] = vi
            out += c * (v if side > 0 else np.conj(v))
        return out

    def _psi_1d(self, z):
        z = np.asarray(z, dtype=float)
        a = float(self.triplet.a[0])
        q = self.triplet.q_scalar
        out = 1j * a * z + 0.5 * q * z * z
        for x, w in self.atoms:
            x0 = x[0]
            comp = 1j * z * x0 if abs(x0) < 1 else 0.0
            out = out + w * (1.0 - np.exp(1j * z * x0) + comp)
        nz = z != 0
        if np.any(nz) and self.segments:
            za = np.abs(z[nz])
            seg = self._segments_positive(za)
            out[nz] += np.where(z[nz] > 0, seg, np.conj(seg))
        return out

    def _psi_nd(self, zs):
        a = self.triplet.a
        Q = self.triplet.Q
        out = 1j * zs @ a + 0.5 * np.einsum("ij,jk,ik->i", zs, Q, zs)
        for x, w in self.atoms:
            d = zs @ x
            comp = 1j * d if np.linalg.norm(x) < 1 else 0.0
            out = out + w * (1.0 - np.exp(1j * d) + comp)
        return out

    def psi(self, z):
        """``psi`` at one point (scalar or length-n vector) -> complex."""
        zv = np.atleast_1d(np.asarray(z, dtype=float))
        if zv.shape != (self.dim,):
            raise DimensionMismatch(f"z has shape {zv.shape}, expected ({self.dim},)")
        if not np.any(zv):
            return 0j
        key = zv.tobytes()
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self.dim == 1:
            val = complex(self._psi_1d(zv)[0])
        else:
            val = complex(self._psi_nd(zv[None, :])[0])
        with self._lock:
            self._cache[key] = val
        return val

    def psi_grid(self, zs):
        """Vectorized ``psi`` on a 1-D grid (dim 1) or an (m, n) array."""
        zs = np.asarray(zs, dtype=float)
        if self.dim == 1:
            zs = zs.reshape(-1)
            if self.threads > 1 and zs.size > 64:
                chunks = np.array_split(zs, self.threads)
                with ThreadPoolExecutor(self.threads) as ex:
                    parts = list(ex.map(self._cached_chunk, chunks))
                return np.concatenate(parts)
            return self._cached_chunk(zs)
        zs = np.atleast_2d(zs)
        if zs.shape[1] != self.dim:
            raise DimensionMismatch("grid rows must have length n")
        return self._psi_nd(zs)

    def _cached_chunk(self, zs):
        out = np.empty(zs.shape, dtype=complex)
        missing = []
        with self._lock:
            for i, zi in enumerate(zs):
                hit = self._cache.get(np.float64(zi).tobytes())
                if hit is None:
                    missing.append(i)
                else:
                    out[i] = hit
        if missing:
            vals = self._psi_1d(zs[missing])
            vals[zs[missing] == 0] = 0j
            out[missing] = vals
            with self._lock:
                for i, v in zip(missing, vals):
                    self._cache[np.float64(zs[i]).tobytes()] = complex(v)
        return out

    def parts_grid(self, zs):
        """``(A, B, re, im)`` arrays on a grid."""
        p = self.psi_grid(zs)
        re, im = p.real, p.imag
        return 1.0 + re, np.abs(1.0 + p), re, im


def evaluate_psi(h, z):
    return h.psi(z)


def psi_parts(h, z):
    """``(A, B, Re psi, Im psi)`` with ``A = 1 + Re psi`` and ``B = |1 + psi|``."""
    p = h.psi(z)
    return 1.0 + p.real, abs(1.0 + p), p.real, p.imag


def measure_fourier(nu: FiniteMeasure, z):
    """``sum w_k exp(i <z, x_k>)``.

    For 1-D measures ``z`` may be a scalar or an array of points; in higher
    dimension ``z`` is a length-n vector or an (m, n) array.
    """
    z = np.asarray(z, dtype=float)
    if nu.dim == 1:
        out = sum(w * np.exp(1j * z * x[0]) for x, w in nu.points)
        return complex(out) if np.ndim(out) == 0 else out
    if z.shape[-1] != nu.dim:
        raise DimensionMismatch("z and nu have different dimensions")
    out = sum(w * np.exp(1j * (z @ np.array(x))) for x, w in nu.points)
    return complex(out) if np.ndim(out) == 0 else out


def one_energy(nu, h, zmax=1e6, tol=1e-10):
    """Tail-extrapolated estimate of ``int A/B^2 |nu_hat|^2 dz`` over the line."""
    if h.dim != 1 or nu.dim != 1:
        raise Unsupported("1-energy is implemented for one-dimensional processes only")

    def f(z):
        z = np.atleast_1d(np.asarray(z, dtype=float))
        A, B, _, _ = h.parts_grid(z)
        return 2.0 * A / (B * B) * np.abs(measure_fourier(nu, z)) ** 2

    top = int(round(math.log10(zmax)))
    schedule = [10.0 ** k for k in range(1, max(top, 2) + 1)]
    rep = integrate_improper(f, 0.0, schedule=schedule, tol=tol)
    return rep


def default_grid(zmin_exp=-2, zmax=1e6, per_decade=96):
    """Log grid with ``per_decade`` points per decade from ``10**zmin_exp``."""
    top = math.log10(zmax)
    n = int(round((top - zmin_exp) * per_decade)) + 1
    return np.logspace(zmin_exp, top, n)


__all__ = [
    "ExponentHandle",
    "evaluate_psi",
    "psi_parts",
    "measure_fourier",
    "one_energy",
    "default_grid",
    "power_segment",
    "generic_segment",
    "ConvergenceReport",
    "Key",
]
