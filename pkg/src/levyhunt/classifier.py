"""Hitting-set classification and the (H) decision procedure.

``h_verdict`` decides whether a single process satisfies Hunt's hypothesis
(H); ``h_verdict_sum`` does the same for an independent sum, trying the
sum rules before falling back to the summed triplet.  Every report carries
a chain of rule applications; each entry is tagged ``computed`` when the
engine verified it numerically or analytically and ``asserted`` when it
rests on a caller-supplied fact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .conditions import (
    ANCHORS,
    DEFAULT_CONFIG,
    GrowthFunctionFamily,
    SplitWitness,
    Status,
    Verdict,
    check_cba,
    check_hw,
    check_kf,
    check_loglog_local,
    check_nd,
    check_rao,
    check_repsi_growth,
    check_s,
    check_sym,
    check_thm25,
    check_thm26,
    get_handle,
)
from .errors import LevyError, NumericalError
from .model import (
    INF,
    PSD_TOL,
    LevyTriplet,
    reflect,
    signed_first_moment,
    sum_triplets,
    validate_triplet,
    variation_integral,
)
from .numerics import integrate_improper
from .pairs import (
    check_bg_rule,
    check_im_domination,
    check_pro312,
    check_pro43,
)

HITTING_SETS = ("AllReals", "Empty", "PositiveHalfLine", "NegativeHalfLine",
                "Unknown")
DEFAULT_THM25 = ((0.0, 0.5), (0.5, 0.5), (0.9, 0.5))


@dataclass(frozen=True)
class Assertions:
    """Facts the caller vouches for; each can only open extra Holds paths."""

    h_holds: bool = False
    bounded_resolvent: bool = False
    has_densities: bool = False
    witness: SplitWitness | None = None
    growth: GrowthFunctionFamily | None = None
    thm25: tuple = ()  # extra (k, delta, nu) attempts

    @classmethod
    def from_dict(cls, d):
        d = d or {}
        unknown = set(d) - {"h_holds", "bounded_resolvent", "has_densities"}
        if unknown:
            raise ValueError(f"unknown assertion(s): {sorted(unknown)}")
        return cls(**{k: bool(v) for k, v in d.items()})


NO_ASSERTIONS = Assertions()


@dataclass(frozen=True)
class BretagnolleCase:
    case: str  # "A", "B", "C1", "C2", "C3"
    a_prime: float | None
    compound_poisson: bool
    reflected: bool = False

    def as_dict(self):
        return {"case": self.case, "a_prime": self.a_prime,
                "compound_poisson": self.compound_poisson,
                "reflected": self.reflected}


@dataclass
class ChainEntry:
    rule: str
    evidence: dict = field(default_factory=dict)
    source: str = "computed"

    @property
    def anchor(self):
        return ANCHORS[self.rule]

    def as_dict(self):
        return {"rule": self.rule, "anchor": self.anchor,
                "evidence": self.evidence, "source": self.source}


@dataclass
class HReport:
    verdict: Verdict
    case: BretagnolleCase | None
    hitting_set: str
    chain: list
    warnings: list = field(default_factory=list)

    @property
    def status(self):
        return self.verdict.status

    def as_dict(self):
        return {"verdict": self.verdict.status.value,
                "case": None if self.case is None else self.case.as_dict(),
                "hitting_set": self.hitting_set,
                "chain": [e.as_dict() for e in self.chain],
                "warnings": list(self.warnings)}


def _report(status, chain, case=None, hitting="Unknown", warnings=()):
    v = Verdict(Status(status), {"hitting_set": hitting},
                [(e.rule, e.anchor) for e in chain], list(warnings))
    return HReport(v, case, hitting, list(chain), list(warnings))


# ---------------------------------------------------------------------------
# one-dimensional case split


def reflect_triplet(t: LevyTriplet) -> LevyTriplet:
    """Triplet of ``-X``."""
    return validate_triplet(-t.a, t.Q, reflect(t.mu))


A_PRIME_TOL = 1e-12


def _is_compound_poisson(t):
    mass = t.mu.total_mass()
    return t.q_scalar <= PSD_TOL and 0 < mass < INF


def bretagnolle_case(t: LevyTriplet) -> BretagnolleCase:
    """Case A/B/C1/C2/C3; negative effective drift is classified on ``-X``."""
    if not t.is_1d:
        raise ValueError("the case split is defined for one-dimensional processes")
    if t.q_scalar > PSD_TOL:
        return BretagnolleCase("A", None, False)
    if variation_integral(t.mu) == INF:
        return BretagnolleCase("B", None, False)
    a_prime = float(t.a[0] + signed_first_moment(t.mu)[0])
    cp = _is_compound_poisson(t)
    if abs(a_prime) <= A_PRIME_TOL:
        return BretagnolleCase("C1", 0.0, cp)
    mu = t.mu if a_prime > 0 else reflect(t.mu)
    neg = mu.power_integral(0.0, -INF, 0.0) > 0
    return BretagnolleCase("C3" if neg else "C2", a_prime, cp, a_prime < 0)


def kesten_hitting(t: LevyTriplet, cfg=DEFAULT_CONFIG):
    """Hitting set in case B: one-sided shortcut, then the resolvent integral.

    Returns ``(hitting_set, chain_entry)``.
    """
    vp = variation_integral(t.mu, "positive")
    vn = variation_integral(t.mu, "negative")
    # the one-sided shortcut needs infinite total variation (case B)
    if t.q_scalar <= PSD_TOL and (vp == INF or vn == INF) and (vp < INF or vn < INF):
        return "AllReals", ChainEntry("kesten-one-sided", {
            "variation_positive": vp, "variation_negative": vn})
    h = get_handle(t, cfg)

    def f(z):
        z = np.atleast_1d(np.asarray(z, dtype=float))
        return (1.0 / (1.0 + h.psi_grid(z))).real

    try:
        rep = integrate_improper(
            f, 0.0, schedule=[10.0 ** k for k in range(1, int(round(math.log10(cfg.zmax))) + 1)],
            tol=cfg.tol, margin=cfg.margin)
    except NumericalError as exc:
        return "Unknown", ChainEntry("kesten-integral", {"error": str(exc)})
    hit = {"converges": "AllReals", "diverges": "Empty"}.get(rep.verdict, "Unknown")
    return hit, ChainEntry("kesten-integral", rep.as_dict())


def hitting_set(t: LevyTriplet, cfg=DEFAULT_CONFIG):
    case = bretagnolle_case(t)
    if case.case == "A":
        return "AllReals"
    if case.case == "B":
        return kesten_hitting(t, cfg)[0]
    if case.compound_poisson:
        return "Unknown"
    if case.case == "C1":
        return "Empty"
    if case.case == "C3":
        return "AllReals"
    return "NegativeHalfLine" if case.reflected else "PositiveHalfLine"


# ---------------------------------------------------------------------------
# single process


def _ev(v: Verdict):
    return dict(v.evidence, status=v.status.value)


def _density_gate(t, assertions, cfg):
    """Returns ``(open, entry)``; ``entry`` documents why the gate is open."""
    if assertions.has_densities:
        return True, ChainEntry("density-asserted", {}, "asserted")
    try:
        hw = check_hw(t, cfg)
    except LevyError:
        return False, None
    if hw.holds:
        return True, ChainEntry("hartman-wintner-gate", _ev(hw))
    return False, None


def _thm25_attempts(t, assertions, cfg):
    tried = []
    for params in tuple(assertions.thm25) + DEFAULT_THM25:
        k, delta = params[0], params[1]
        nu = params[2] if len(params) > 2 else None
        for target, reflected in ((t, False), (None, True)):
            if reflected:
                target = reflect_triplet(t)
            try:
                v = check_thm25(target, k, delta, nu, cfg)
            except LevyError as exc:
                tried.append({"k": k, "delta": delta, "reflected": reflected,
                              "error": str(exc)})
                continue
            if v.holds:
                ev = dict(v.evidence, reflected=reflected)
                return ChainEntry("one-sided-domination", ev), tried
            tried.append({"k": k, "delta": delta, "reflected": reflected,
                          "reasons": v.evidence.get("reasons", [])})
    return None, tried


def h_verdict(t: LevyTriplet, assertions: Assertions = NO_ASSERTIONS,
              cfg=DEFAULT_CONFIG) -> HReport:
    """Decide (H) for a single process."""
    warnings = []
    case, hit = None, "Unknown"

    if t.is_1d:
        case = bretagnolle_case(t)
        case_entry = ChainEntry(f"bretagnolle-case-{case.case.lower()}",
                                case.as_dict())
        pre = [ChainEntry("reflection", {"a_prime": case.a_prime})] if case.reflected else []
        if case.case == "A":
            return _report("holds", [case_entry], case, "AllReals")
        if case.case in ("C2", "C3"):
            if not case.compound_poisson:
                hit = ("AllReals" if case.case == "C3" else
                       "NegativeHalfLine" if case.reflected else "PositiveHalfLine")
                return _report("fails", pre + [case_entry,
                                               ChainEntry("c2-c3-not-hunt")],
                               case, hit)
            warnings.append("compound Poisson: case split inconclusive")
        elif case.case == "C1":
            if case.compound_poisson:
                warnings.append("compound Poisson: case split inconclusive")
            else:
                hit = "Empty"
        else:
            hit, kentry = kesten_hitting(t, cfg)
            if hit == "AllReals":
                return _report("holds", [case_entry, kentry], case, hit)
            if hit == "Unknown":
                warnings.append("resolvent integral inconclusive")

    gate, gate_entry = _density_gate(t, assertions, cfg)
    if gate:
        for tag, fn in (("nd", check_nd), ("sym", check_sym), ("kf", check_kf),
                        ("rao", check_rao), ("cba", check_cba)):
            v = fn(t, cfg=cfg)
            if v.holds:
                return _report("holds", [gate_entry, ChainEntry(tag, _ev(v))],
                               case, hit, warnings)
    else:
        warnings.append("diagram conditions skipped: resolvent densities "
                        "not established")

    v = check_s(t, cfg)
    if v.holds:
        return _report("holds", [ChainEntry("s", _ev(v))], case, hit, warnings)

    if t.is_1d:
        entry, tried = _thm25_attempts(t, assertions, cfg)
        if entry is not None:
            return _report("holds", [entry], case, hit, warnings)
        for tag, fn in (("local-second-moment", check_thm26),
                        ("repsi-log-growth", lambda x, cfg: check_repsi_growth(x, "log", cfg=cfg)),
                        ("local-second-moment-loglog", check_loglog_local)):
            v = fn(t, cfg=cfg)
            if v.holds:
                return _report("holds", [ChainEntry(tag, _ev(v))], case, hit, warnings)

    return _report("unknown", [], case, hit, warnings)


# ---------------------------------------------------------------------------
# sums


def _is_pure_cp(t):
    if t.is_1d:
        if not _is_compound_poisson(t):
            return False
        return abs(float(t.a[0] + signed_first_moment(t.mu)[0])) <= A_PRIME_TOL
    mass = t.mu.total_mass()
    if np.any(np.abs(t.Q) > PSD_TOL) or not 0 < mass < INF:
        return False
    return bool(np.all(np.abs(t.a + signed_first_moment(t.mu)) <= A_PRIME_TOL))


def _auto_bounded_resolvent(t, cfg):
    """Bounded resolvent densities recognised without assertion."""
    if not t.is_1d:
        return None
    if (t.q_scalar > PSD_TOL and t.mu.is_empty
            and abs(float(t.a[0])) <= 1e-12):
        return ChainEntry("bounded-resolvent", {"reason": "Brownian motion"})
    case = bretagnolle_case(t)
    if case.case == "B":
        hit, entry = kesten_hitting(t, cfg)
        if hit == "AllReals":
            return ChainEntry("bounded-resolvent", {
                "reason": "case B with every point hit", "kesten": entry.as_dict()})
    return None


def h_verdict_sum(t1: LevyTriplet, t2: LevyTriplet,
                  assertions: Assertions = NO_ASSERTIONS,
                  cfg=DEFAULT_CONFIG) -> HReport:
    """Decide (H) for ``X1 + X2`` (independent); assertions refer to ``X1``."""
    total = sum_triplets(t1, t2)
    hcache = {}

    def x1_hunt():
        if assertions.h_holds:
            return ChainEntry("x1-hunt-asserted", {}, "asserted")
        if "x1" not in hcache:
            hcache["x1"] = h_verdict(t1, NO_ASSERTIONS, cfg)
        rep = hcache["x1"]
        if rep.verdict.holds:
            return ChainEntry("x1-hunt", {"chain": [e.rule for e in rep.chain]})
        return None

    def finish(chain, rule):
        case = bretagnolle_case(total) if total.is_1d else None
        hit = hitting_set(total, cfg) if total.is_1d else "Unknown"
        return _report("holds", chain + [ChainEntry(rule)], case, hit)

    # R1: compound Poisson perturbation (the sum is symmetric in X1, X2)
    if _is_pure_cp(t2):
        h1 = x1_hunt()
        if h1 is not None:
            return finish([h1], "compound-poisson-sum")
    if _is_pure_cp(t1):
        rep = h_verdict(t2, NO_ASSERTIONS, cfg)
        if rep.verdict.holds:
            return finish([ChainEntry("x1-hunt", {"process": "X2", "chain": [
                e.rule for e in rep.chain]})], "compound-poisson-sum")

    # R2: both satisfy (S)
    s1, s2 = check_s(t1, cfg), check_s(t2, cfg)
    if s1.holds and s2.holds:
        return finish([ChainEntry("s", _ev(s1)), ChainEntry("s", _ev(s2))],
                      "solution-condition-sum")

    h1 = x1_hunt()
    im = None
    if h1 is not None:
        im = check_im_domination(t1, t2, cfg=cfg)

        # R3: energy domination + Im-domination, with densities for X1
        if im.holds:
            gate, gate_entry = _density_gate(t1, assertions, cfg)
            if gate:
                for variant in ("i", "ii", "iii"):
                    e = check_pro312(t1, t2, variant, cfg=cfg)
                    if e.holds:
                        return finish([h1, ChainEntry(f"energy-domination-{variant}", _ev(e)),
                                       gate_entry, ChainEntry("im-domination", _ev(im))],
                                      "im-domination-sum")

            # R4: bounded resolvent densities + Im-domination
            br = (ChainEntry("bounded-resolvent-asserted", {}, "asserted")
                  if assertions.bounded_resolvent else _auto_bounded_resolvent(t1, cfg))
            if br is not None:
                return finish([h1, br, ChainEntry("im-domination", _ev(im))],
                              "bounded-resolvent-sum")

    # R5: split witness
    if assertions.witness is not None and t1.is_1d:
        gate, gate_entry = _density_gate(total, assertions, cfg)
        if gate:
            v = check_pro43(t1, t2, assertions.witness, assertions.growth, cfg=cfg)
            if v.holds:
                return finish([gate_entry, ChainEntry("split-witness", _ev(v),
                                                      "asserted")],
                              "split-witness-sum")

    # R6: Blumenthal-Getoor indices
    if h1 is not None and t1.is_1d:
        bg = check_bg_rule(t1, t2, cfg)
        if bg.holds:
            return finish([h1, ChainEntry("bg-rule", _ev(bg))], "bg-index-sum")

    rep = h_verdict(total, assertions_for_total(assertions), cfg)
    rep.chain = [ChainEntry("direct-sum")] + rep.chain
    rep.verdict.citations = [(e.rule, e.anchor) for e in rep.chain]
    return rep


def assertions_for_total(a: Assertions) -> Assertions:
    # facts about X1 do not transfer to the sum
    return NO_ASSERTIONS


__all__ = [
    "Assertions", "BretagnolleCase", "ChainEntry", "HReport", "HITTING_SETS",
    "bretagnolle_case", "kesten_hitting", "hitting_set", "reflect_triplet",
    "h_verdict", "h_verdict_sum",
]
