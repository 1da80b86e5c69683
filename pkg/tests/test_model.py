import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levyhunt import (
    Atoms,
    ExponentHandle,
    LevyMeasure,
    LogSingularDensity,
    StablePowerDensity,
    TypeAlphaBetaDensity,
    PowerSumDensity,
    decompose_pro35,
    decompose_thm25,
    evaluate_psi,
    split_pm,
    sum_triplets,
    truncated_moment,
    validate_triplet,
    variation_integral,
)
from levyhunt.errors import (
    AtomAtOrigin,
    DimensionMismatch,
    HypothesisNotVerified,
    InfiniteMass,
    NegativeEigenvalue,
    NonIntegrable,
    NonIntegrableLevyMeasure,
    NonSymmetricQ,
    NotDominated,
)
from levyhunt.model import INF, zero_triplet

from conftest import triplet

# mpmath at 30 digits: int_0^0.1 dx/|log x| = E1(log 10)
LOG_SINGULAR_MOMENT_0_1 = 0.0323897895932910216966


def psi(t, z):
    return evaluate_psi(ExponentHandle(t), z)


class TestValidate:
    def test_brownian_valid(self):
        t = validate_triplet([0.0], [[1.0]])
        assert t.dim == 1 and t.q_scalar == 1.0 and t.mu.is_empty

    def test_stable_above_two_rejected(self):
        with pytest.raises(NonIntegrableLevyMeasure):
            validate_triplet([0.0], [[0.0]], LevyMeasure([StablePowerDensity(2.5, 1.0, 1.0)]))

    def test_negative_eigenvalue(self):
        with pytest.raises(NegativeEigenvalue):
            validate_triplet([0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]])

    def test_non_symmetric(self):
        with pytest.raises(NonSymmetricQ):
            validate_triplet([0.0, 0.0], [[1.0, 0.5], [0.0, 1.0]])

    def test_atom_at_origin(self):
        with pytest.raises(AtomAtOrigin):
            validate_triplet([0.0], [[0.0]], LevyMeasure([Atoms(((0.0, 1.0),))]))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            validate_triplet([0.0, 0.0], [[1.0]])

    def test_tiny_negative_eigenvalue_clamped(self):
        t = validate_triplet([0.0], [[-1e-12]])
        assert t.eigvals.min() == 0.0

    def test_immutable_arrays(self):
        t = validate_triplet([1.0], [[1.0]])
        with pytest.raises(ValueError):
            t.a[0] = 2.0


class TestVariation:
    def test_infinite_for_alpha_ge_one(self):
        mu = LevyMeasure([StablePowerDensity(1.5, 1.0, 0.0, cutoff=1.0)])
        assert variation_integral(mu, "positive") == INF

    def test_atoms(self):
        mu = LevyMeasure([Atoms(((0.5, 2.0),))])
        assert variation_integral(mu, "both") == pytest.approx(1.0, abs=1e-15)

    def test_half_stable(self):
        mu = LevyMeasure([StablePowerDensity(0.5, 1.0, 0.0, cutoff=1.0)])
        assert variation_integral(mu, "positive") == pytest.approx(2.0, rel=1e-12)
        assert variation_integral(mu, "negative") == 0.0

    def test_large_jumps_count_once(self):
        mu = LevyMeasure([Atoms(((3.0, 0.25), (-0.2, 1.0)))])
        assert variation_integral(mu, "positive") == pytest.approx(0.25)
        assert variation_integral(mu, "negative") == pytest.approx(0.2)

    def test_log_singular_is_infinite(self):
        mu = LevyMeasure([LogSingularDensity(1.0, 0.5)])
        assert variation_integral(mu) == INF


class TestTruncatedMoment:
    def test_cauchy(self):
        mu = LevyMeasure([StablePowerDensity(1.0, 1.0, 1.0, cutoff=1.0)])
        assert truncated_moment(mu, 2, 0.25) == pytest.approx(0.5, rel=1e-12)

    def test_atom_outside(self):
        mu = LevyMeasure([Atoms(((0.5, 2.0),))])
        assert truncated_moment(mu, 2, 0.25) == 0.0

    def test_log_singular_against_oracle(self):
        mu = LevyMeasure([LogSingularDensity(1.0, 0.5)])
        assert truncated_moment(mu, 2, 0.1) == pytest.approx(LOG_SINGULAR_MOMENT_0_1, rel=1e-9)

    def test_nonintegrable(self):
        mu = LevyMeasure([StablePowerDensity(1.5, 1.0, 0.0)])
        with pytest.raises(NonIntegrable):
            truncated_moment(mu, 1, 0.5)

    @given(st.floats(0.1, 1.9), st.floats(1e-6, 0.9))
    def test_stable_closed_form(self, alpha, eps):
        mu = LevyMeasure([StablePowerDensity(alpha, 1.0, 2.0, cutoff=1.0)])
        expect = 3.0 * eps ** (2 - alpha) / (2 - alpha)
        assert truncated_moment(mu, 2, eps) == pytest.approx(expect, rel=1e-10)


class TestSumAndSplit:
    def test_brownian_plus_cp(self):
        t = sum_triplets(triplet(0, 1), triplet(0, 0, Atoms(((0.5, 1.0),))))
        assert t.q_scalar == 1.0
        assert t.mu.atoms == {(0.5,): 1.0}

    def test_zero_identity(self):
        t = triplet(0.3, 0, StablePowerDensity(1.5, 1.0, 0.5))
        s = sum_triplets(t, zero_triplet())
        for z in (0.5, 3.0, 40.0):
            assert psi(s, z) == pytest.approx(psi(t, z), rel=1e-14)

    def test_stable_additivity(self):
        t1 = triplet(0, 0, StablePowerDensity(1.5, 1.0, 1.0))
        t2 = triplet(0, 0, StablePowerDensity(0.5, 1.0, 0.0))
        s = sum_triplets(t1, t2)
        assert abs(psi(s, 1.0) - psi(t1, 1.0) - psi(t2, 1.0)) < 1e-10

    def test_additivity_random(self, rng):
        t1 = triplet(0.4, 0.2, StablePowerDensity(1.2, 1.0, 0.3, cutoff=2.0),
                     Atoms(((1.5, 0.5),)))
        t2 = triplet(-0.1, 0, LogSingularDensity(0.7, 0.4), Atoms(((-0.4, 2.0),)))
        s = sum_triplets(t1, t2)
        h, h1, h2 = (ExponentHandle(x) for x in (s, t1, t2))
        for z in rng.uniform(-50, 50, size=50):
            assert abs(h.psi(z) - h1.psi(z) - h2.psi(z)) < 1e-9

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            sum_triplets(triplet(0, 1), validate_triplet([0, 0], np.eye(2)))

    def test_psd_preserved(self):
        s = sum_triplets(validate_triplet([0, 0], np.diag([1.0, 0.0])),
                         validate_triplet([0, 0], [[0.5, 0.5], [0.5, 0.5]]))
        assert s.eigvals.min() >= 0

    def test_split_symmetric(self):
        mu = LevyMeasure([StablePowerDensity(1.5, 1.0, 1.0)])
        plus, minus, bar = split_pm(mu)
        assert bar.profile == plus.profile

    def test_split_one_sided(self):
        _, minus, _ = split_pm(LevyMeasure([StablePowerDensity(0.5, 1.0, 0.0)]))
        assert minus.is_empty

    def test_split_atoms(self):
        _, _, bar = split_pm(LevyMeasure([Atoms(((-0.3, 1.5),))]))
        assert bar.atoms == {(0.3,): 1.5}

    @given(st.floats(-3, 3), st.floats(-3, 3))
    @settings(max_examples=50)
    def test_split_resum_exact(self, lo, width):
        mu = LevyMeasure([StablePowerDensity(1.3, 1.0, 0.4, cutoff=2.0),
                          Atoms(((0.5, 1.0), (-1.5, 2.0))), LogSingularDensity(1.0, 0.3)])
        plus, minus, _ = split_pm(mu)
        hi = lo + abs(width) + 0.01
        if lo < 0 < hi:
            lo = 0.05
            hi = max(hi, 0.1)
        total = mu.power_integral(0.0, lo, hi)
        parts = plus.power_integral(0.0, lo, hi) + minus.power_integral(0.0, lo, hi)
        assert parts == pytest.approx(total, rel=1e-12, abs=1e-12)


class TestDecompositions:
    def test_pro35_drift(self):
        t = triplet(0, 0, Atoms(((0.5, 2.0), (2.0, 3.0))))
        x = decompose_pro35(t, LevyMeasure([Atoms(((0.5, 2.0),))]))
        assert x.a[0] == pytest.approx(1.0)
        assert x.mu.atoms == {(2.0,): 3.0}

    def test_pro35_large_atom(self):
        t = triplet(0, 0, Atoms(((2.0, 3.0),)))
        assert decompose_pro35(t, LevyMeasure([Atoms(((2.0, 3.0),))])).a[0] == 0.0

    def test_pro35_full_removal(self):
        t = triplet(0.2, 1.0, Atoms(((0.5, 2.0),)))
        x = decompose_pro35(t, t.mu)
        assert x.mu.is_empty and x.q_scalar == 1.0

    def test_pro35_identity(self):
        t = triplet(0.1, 0.5, StablePowerDensity(1.5, 1.0, 0.5), Atoms(((0.3, 1.0), (-2.0, 0.5))))
        mu1 = LevyMeasure([Atoms(((0.3, 1.0), (-2.0, 0.5)))])
        x = decompose_pro35(t, mu1)
        for z in np.logspace(-2, 4, 64):
            cp = 1.0 * (1 - np.exp(0.3j * z)) + 0.5 * (1 - np.exp(-2.0j * z))
            assert abs(psi(t, z) - psi(x, z) - cp) < 1e-9 * max(1.0, abs(psi(t, z)))

    def test_pro35_not_dominated(self):
        t = triplet(0, 0, Atoms(((0.5, 1.0),)))
        with pytest.raises(NotDominated):
            decompose_pro35(t, LevyMeasure([Atoms(((0.5, 2.0),))]))

    def test_pro35_infinite_mass(self):
        t = triplet(0, 0, StablePowerDensity(0.5, 1.0, 0.0))
        with pytest.raises(InfiniteMass):
            decompose_pro35(t, t.mu)

    def test_thm25_one_sided_is_identity(self):
        t = triplet(0, 0, StablePowerDensity(1.5, 1.0, 0.0))
        t1, t2 = decompose_thm25(t, 0.0, 0.5)
        assert t2.mu.is_empty
        assert psi(t1, 7.0) == pytest.approx(psi(t, 7.0), rel=1e-12)

    def test_thm25_half_density(self):
        t = triplet(0, 0, StablePowerDensity(1.0, 1.0, 0.5, cutoff=INF))
        t1, t2 = decompose_thm25(t, 0.5, 0.5)
        for x in (0.01, 0.2, 0.49):
            assert t2.mu.density(x, +1) == pytest.approx(0.5 * x ** -2, rel=1e-12)
            assert t2.mu.density(x, -1) == pytest.approx(0.5 * x ** -2, rel=1e-12)
        assert t2.mu.density(0.7, +1) == 0.0
        for z in np.logspace(-2, 4, 64):
            want = psi(t, z)
            assert abs(psi(t1, z) + psi(t2, z) - want) < 1e-9 * max(1.0, abs(want))

    def test_thm25_nu_dominates(self):
        t = triplet(0, 0, StablePowerDensity(1.5, 1.0, 0.0),
                    StablePowerDensity(0.5, 0.0, 0.2, cutoff=0.5))
        nu = LevyMeasure([StablePowerDensity(0.5, 0.3, 0.0, cutoff=0.5)])
        _, t2 = decompose_thm25(t, 0.0, 0.5, nu)
        assert t2.mu.is_empty

    def test_thm25_hypothesis_fails(self):
        t = triplet(0, 0, StablePowerDensity(0.5, 1.0, 1.0))
        with pytest.raises(HypothesisNotVerified):
            decompose_thm25(t, 0.9, 0.5)


class TestComponents:
    def test_type_alpha_beta_bracket_enforced(self):
        with pytest.raises(Exception):
            TypeAlphaBetaDensity(PowerSumDensity(((1.0, 0.5),)), 0.6, 0.4, 2.0)

    def test_log_singular_delta(self):
        with pytest.raises(Exception):
            LogSingularDensity(1.0, 1.5)

    def test_atoms_positive_weight(self):
        with pytest.raises(Exception):
            Atoms(((0.5, 0.0),))

    def test_total_mass(self):
        assert LevyMeasure([Atoms(((0.5, 1.0), (-2.0, 2.5)))]).total_mass() == 3.5
        assert LevyMeasure([StablePowerDensity(0.5, 1.0)]).total_mass() == INF
        assert math.isinf(LevyMeasure([LogSingularDensity(1.0, 0.5)]).total_mass())
