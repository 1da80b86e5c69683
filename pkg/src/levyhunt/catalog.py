"""Canonical processes, closed-form exponents and the golden outcome table.

Stable entries are normalised with constants ``K_alpha = int_0^inf
(1 - cos u) u^(-1-alpha) du`` read from ``data/golden.json``, where they
were pinned from a high-precision quadrature (see the ``provenance`` field).
Run ``python3 -m levyhunt.catalog`` to print a freshly computed table.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Callable

import numpy as np

from .classifier import Assertions, h_verdict, h_verdict_sum
from .conditions import (
    DEFAULT_CONFIG,
    GrowthFunctionFamily,
    bg_indices,
    check_cba,
    check_hw,
    check_kf,
    check_loglog_local,
    check_nd,
    check_rao,
    check_repsi_growth,
    check_s,
    check_sym,
    check_thm26,
)
from .errors import UnknownName
from .model import (
    INF,
    Atoms,
    LevyMeasure,
    LevyTriplet,
    LogSingularDensity,
    PowerSumDensity,
    StablePowerDensity,
    TypeAlphaBetaDensity,
    signed_first_moment,
    sum_triplets,
    validate_triplet,
)

EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    triplet: LevyTriplet
    description: str
    expected: dict
    closed_form_psi: Callable | None = None
    pair: tuple | None = None  # (name1, name2) for pair entries
    pair_assertions: dict = field(default_factory=dict)


@lru_cache(maxsize=1)
def golden():
    text = resources.files("levyhunt").joinpath("data/golden.json").read_text()
    return json.loads(text)


def stable_constant(alpha):
    """Pinned ``K_alpha``; ``K_1 = pi/2``."""
    table = golden()["normalization"]["K_alpha"]
    key = repr(float(alpha))
    if key in table:
        return table[key]
    if alpha == 1.0:
        return math.pi / 2
    return -math.gamma(-alpha) * math.cos(math.pi * alpha / 2)


def stable_psi(alpha, c_plus, c_minus, a=0.0):
    """Closed-form exponent for ``c_+ x^(-1-alpha)`` on ``x > 0`` plus the
    reflected ``c_-`` part, untruncated, with compensation on ``|x| < 1``."""
    k = stable_constant(alpha)

    def psi(z):
        z = np.asarray(z, dtype=float)
        az = np.abs(z)
        sg = np.sign(z)
        re = (c_plus + c_minus) * k * az ** alpha
        if alpha == 1.0:
            with np.errstate(divide="ignore", invalid="ignore"):
                im1 = np.where(az > 0, -z * (1.0 - EULER_GAMMA - np.log(az)), 0.0)
        else:
            im1 = (-k * math.tan(math.pi * alpha / 2) * sg * az ** alpha
                   + z / (1.0 - alpha))
        return re + 1j * ((c_plus - c_minus) * im1 + a * z)

    return psi


def gaussian_psi(a, q):
    return lambda z: 0.5 * q * np.asarray(z, dtype=float) ** 2 + 1j * a * np.asarray(z, dtype=float)


def atoms_psi(a, atoms):
    def psi(z):
        z = np.asarray(z, dtype=float)
        out = 1j * a * z
        for x, w in atoms:
            out = out + w * (1.0 - np.exp(1j * z * x) + (1j * z * x if abs(x) < 1 else 0.0))
        return out
    return psi


def _t(a, q=0.0, comps=()):
    return validate_triplet([float(a)], [[float(q)]], LevyMeasure(list(comps)))


def _type_ab(alpha, beta, index, c):
    mu = LevyMeasure([TypeAlphaBetaDensity(PowerSumDensity(((1.0, index),)),
                                           alpha, beta, c)])
    return validate_triplet(-signed_first_moment(mu), [[0.0]], mu)


def _builders():
    def sym(alpha):
        c = 1.0 / (2.0 * stable_constant(alpha))
        return (_t(0.0, 0.0, [StablePowerDensity(alpha, c, c, cutoff=INF)]),
                stable_psi(alpha, c, c),
                f"symmetric {alpha}-stable, Re psi = |z|^{alpha}")

    cp_atoms = ((0.5, 1.0), (-0.3, 2.0))
    return {
        "brownian": lambda: (_t(0.0, 1.0), gaussian_psi(0.0, 1.0),
                             "standard Brownian motion"),
        "drifted-brownian": lambda: (_t(1.0, 1.0), gaussian_psi(1.0, 1.0),
                                     "Brownian motion with unit drift"),
        "symmetric-stable-0.5": lambda: sym(0.5),
        "symmetric-stable-1.0": lambda: sym(1.0),
        "symmetric-stable-1.5": lambda: sym(1.5),
        "asymmetric-cauchy": lambda: (
            _t(0.0, 0.0, [StablePowerDensity(1.0, 1.0, 0.0, cutoff=INF)]),
            stable_psi(1.0, 1.0, 0.0), "jumps x^-2 dx on (0, inf) only"),
        "spectrally-positive-stable-1.5": lambda: (
            _t(0.0, 0.0, [StablePowerDensity(1.5, 1.0, 0.0, cutoff=INF)]),
            stable_psi(1.5, 1.0, 0.0), "jumps x^-2.5 dx on (0, inf)"),
        "stable-subordinator-0.5": lambda: (
            _t(-2.0, 0.0, [StablePowerDensity(0.5, 1.0, 0.0, cutoff=INF)]),
            stable_psi(0.5, 1.0, 0.0, -2.0),
            "driftless 1/2-stable subordinator, x^-1.5 dx on (0, inf)"),
        "compound-poisson": lambda: (
            _t(0.1, 0.0, [Atoms(cp_atoms)]), atoms_psi(0.1, cp_atoms),
            "atoms 1 at 0.5 and 2 at -0.3, zero effective drift"),
        "c2-failure": lambda: (
            _t(-1.0, 0.0, [StablePowerDensity(0.5, 1.0, 0.0, cutoff=1.0)]), None,
            "x^-1.5 dx on (0, 1) with effective drift 1"),
        "example-2.9": lambda: (
            _t(0.0, 0.0, [LogSingularDensity(1.0, 0.5)]), None,
            "density 1/(x^2 |log x|) on (0, 1/2)"),
        "type-ab-0.7-0.8": lambda: (
            _type_ab(0.7, 0.8, 0.75, 1.01), None,
            "subordinator with density x^-1.75 on (0, 1), type (0.7, 0.8)"),
        "type-ab-0.2-0.3": lambda: (
            _type_ab(0.2, 0.3, 0.25, 1.01), None,
            "subordinator with density x^-1.25 on (0, 1), type (0.2, 0.3)"),
        "type-alpha-beta-pair": lambda: (
            sum_triplets(_type_ab(0.7, 0.8, 0.75, 1.01), _type_ab(0.2, 0.3, 0.25, 1.01)),
            None, "sum of the type (0.7, 0.8) and type (0.2, 0.3) subordinators"),
    }


PAIRS = {"type-alpha-beta-pair": (("type-ab-0.7-0.8", "type-ab-0.2-0.3"),
                                  {"h_holds": True})}


def catalog_list():
    return list(_builders())


@lru_cache(maxsize=None)
def catalog_get(name) -> CatalogEntry:
    builders = _builders()
    if name not in builders:
        raise UnknownName(f"no catalog entry named {name!r}")
    triplet, psi, desc = builders[name]()
    expected = golden()["entries"].get(name, {}).get("expected", {})
    pair, pa = PAIRS.get(name, (None, {}))
    return CatalogEntry(name, triplet, desc, expected, psi, pair, pa)


# ---------------------------------------------------------------------------
# live outcome table

CHECKS = {
    "nd": lambda t, cfg: check_nd(t, cfg),
    "sym": lambda t, cfg: check_sym(t, cfg),
    "kf": lambda t, cfg: check_kf(t, cfg=cfg),
    "rao-constant": lambda t, cfg: check_rao(t, GrowthFunctionFamily("constant"), cfg=cfg),
    "rao-log": lambda t, cfg: check_rao(t, GrowthFunctionFamily("log"), cfg=cfg),
    "cba": lambda t, cfg: check_cba(t, cfg=cfg),
    "s": lambda t, cfg: check_s(t, cfg),
    "thm26": lambda t, cfg: check_thm26(t, cfg),
    "loglog": lambda t, cfg: check_loglog_local(t, cfg),
    "repsi-log": lambda t, cfg: check_repsi_growth(t, "log", cfg=cfg),
    "hw": lambda t, cfg: check_hw(t, cfg),
}


def live_outcomes(entry: CatalogEntry, cfg=DEFAULT_CONFIG):
    """Expected-map shaped dict computed by the live checkers."""
    t = entry.triplet
    out = {"checks": {k: fn(t, cfg).status.value for k, fn in CHECKS.items()}}
    rep = h_verdict(t, cfg=cfg)
    out.update(verdict=rep.status.value,
               case=None if rep.case is None else rep.case.case,
               hitting_set=rep.hitting_set,
               chain=[e.rule for e in rep.chain])
    out["beta2"] = round(bg_indices(t, cfg).beta2, 6)
    if entry.pair:
        t1, t2 = (catalog_get(n).triplet for n in entry.pair)
        srep = h_verdict_sum(t1, t2, Assertions.from_dict(entry.pair_assertions), cfg)
        out["sum"] = {"verdict": srep.status.value,
                      "chain": [e.rule for e in srep.chain]}
    return out


def _k_alpha_oracle(alpha):
    import mpmath

    mpmath.mp.dps = 30
    a = mpmath.mpf(alpha)
    # 1 - cos u = 2 sin^2(u/2) avoids cancellation near 0; on (1, inf) the
    # non-oscillating part integrates to 1/alpha exactly
    head = mpmath.quad(lambda u: 2 * mpmath.sin(u / 2) ** 2 * u ** (-1 - a), [0, 1])
    tail = 1 / a - mpmath.quadosc(lambda u: mpmath.cos(u) * u ** (-1 - a),
                                  [1, mpmath.inf], omega=1)
    return float(head + tail)


def build_golden():
    """Recompute the golden document (normalisation constants need mpmath)."""
    ks = {repr(a): _k_alpha_oracle(a) for a in (0.5, 1.0, 1.5)}
    doc = {"format": 1,
           "normalization": {
               "K_alpha": ks,
               "provenance": "K_alpha = int_0^inf (1 - cos u) u^(-1-alpha) du by "
                             "mpmath at 30 digits: tanh-sinh on (0, 1), "
                             "quadosc on (1, inf)"},
           "entries": {}}
    golden.cache_clear()
    catalog_get.cache_clear()
    for name in catalog_list():
        e = catalog_get(name)
        doc["entries"][name] = {"description": e.description,
                                "expected": live_outcomes(e)}
    return doc


if __name__ == "__main__":
    print(json.dumps(build_golden(), indent=2))
