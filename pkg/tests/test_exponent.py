import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levyhunt import (
    Atoms,
    ExponentHandle,
    FiniteMeasure,
    LevyMeasure,
    LogSingularDensity,
    StablePowerDensity,
    evaluate_psi,
    measure_fourier,
    one_energy,
    psi_parts,
    validate_triplet,
)
from levyhunt.catalog import catalog_get, stable_psi
from levyhunt.errors import DimensionMismatch, Unsupported
from levyhunt.model import INF

from conftest import triplet

# Reference values from mpmath at 30 digits (tanh-sinh on the x-integral).
ORACLE = [
    # (catalog name, z, psi)
    ("example-2.9", 10.0, complex(8.03044640234103893589, 10.0127066992924993276)),
    ("example-2.9", 1000.0, complex(254.820961384308398533, 2234.34132130608673450)),
    ("type-ab-0.7-0.8", 10.0, complex(9.10836581298491884827, -25.2042492991120270630)),
    ("c2-failure", 7.0, complex(4.56390324154407098642, 0.486774030938526306039)),
    ("asymmetric-cauchy", 10.0, complex(15.7079632679489661923, 18.7980075789557854462)),
]

# pi - 2 (1/R - int_R^inf cos(u) u^-2 du) with R = 1e6, via Si(R)
SYM_CAUCHY_R1E6 = 3.14159065359049322921


def test_brownian():
    h = ExponentHandle(triplet(0, 1))
    assert evaluate_psi(h, 2.0) == 2.0


def test_cauchy_pi():
    h = ExponentHandle(triplet(0, 0, StablePowerDensity(1.0, 1.0, 1.0, cutoff=1e6)))
    val = evaluate_psi(h, 1.0)
    assert val.real == pytest.approx(math.pi, rel=1e-4)
    assert val.real == pytest.approx(SYM_CAUCHY_R1E6, rel=1e-10)
    h_inf = ExponentHandle(triplet(0, 0, StablePowerDensity(1.0, 1.0, 1.0, cutoff=INF)))
    assert evaluate_psi(h_inf, 1.0).real == pytest.approx(math.pi, rel=1e-12)


def test_atom_on_unit_circle():
    h = ExponentHandle(triplet(0, 0, Atoms(((1.0, 3.0),))))
    assert evaluate_psi(h, math.pi) == pytest.approx(6.0, abs=1e-14)


@pytest.mark.parametrize("name,z,want", ORACLE)
def test_oracle_values(name, z, want):
    h = ExponentHandle(catalog_get(name).triplet)
    assert abs(evaluate_psi(h, z) - want) < 1e-8 * abs(want)


@pytest.mark.parametrize("name,z,want", ORACLE[:3])
def test_oracle_values_forced_quadrature(name, z, want):
    h = ExponentHandle(catalog_get(name).triplet, strategy="quadrature")
    assert abs(evaluate_psi(h, z) - want) < 1e-8 * abs(want)


class TestParts:
    def test_origin(self):
        h = ExponentHandle(triplet(0.5, 1, StablePowerDensity(1.5, 1.0, 0.2)))
        assert psi_parts(h, 0.0) == (1.0, 1.0, 0.0, 0.0)

    def test_brownian(self):
        assert psi_parts(ExponentHandle(triplet(0, 1)), 2.0) == (3.0, 3.0, 2.0, 0.0)

    def test_drift(self):
        A, B, re, im = psi_parts(ExponentHandle(triplet(1, 0)), 3.0)
        assert (A, re, im) == (1.0, 0.0, 3.0)
        assert B == pytest.approx(math.sqrt(10), rel=1e-15)

    @given(st.floats(-1e4, 1e4))
    @settings(max_examples=40, deadline=None)
    def test_b_ge_a(self, z):
        h = ExponentHandle(catalog_get("c2-failure").triplet)
        A, B, re, im = psi_parts(h, z)
        assert B >= A - 1e-12 >= 1 - 1e-12
        assert B * B == pytest.approx(A * A + im * im, rel=1e-12)


class TestFourier:
    def test_dirac(self):
        nu = FiniteMeasure(((0.0, 1.0),))
        assert measure_fourier(nu, 3.7) == 1.0

    def test_cosine(self):
        nu = FiniteMeasure(((1.0, 0.5), (-1.0, 0.5)))
        assert measure_fourier(nu, math.pi) == pytest.approx(-1.0, abs=1e-15)

    def test_shifted(self):
        nu = FiniteMeasure(((0.5, 2.0),))
        assert measure_fourier(nu, math.pi) == pytest.approx(2j, abs=1e-15)

    @given(st.floats(-100, 100))
    def test_bounded_by_mass(self, z):
        nu = FiniteMeasure(((0.3, 1.0), (-2.0, 0.5), (1.7, 2.5)))
        assert abs(measure_fourier(nu, z)) <= nu.total_mass + 1e-12

    def test_vector(self):
        nu = FiniteMeasure((((1.0, 0.0), 1.0),))
        assert measure_fourier(nu, np.array([math.pi, 5.0])) == pytest.approx(-1.0)


class TestEnergy:
    def test_brownian(self):
        r = one_energy(FiniteMeasure(((0.0, 1.0),)), ExponentHandle(triplet(0, 1)))
        assert r.converges
        assert r.tail_exponent == pytest.approx(-2.0, abs=0.05)

    def test_drift(self):
        r = one_energy(FiniteMeasure(((0.0, 1.0),)), ExponentHandle(triplet(1, 0)))
        assert r.converges
        assert r.value == pytest.approx(math.pi, rel=1e-3)

    def test_zero_process(self):
        r = one_energy(FiniteMeasure(((0.0, 1.0),)), ExponentHandle(triplet(0, 0)))
        assert r.diverges

    def test_multidimensional_unsupported(self):
        h = ExponentHandle(validate_triplet([0, 0], np.eye(2)))
        with pytest.raises(Unsupported):
            one_energy(FiniteMeasure((((0.0, 0.0), 1.0),)), h)


@pytest.fixture(scope="module")
def handles():
    ts = [catalog_get(n).triplet for n in
          ("asymmetric-cauchy", "example-2.9", "type-ab-0.7-0.8", "c2-failure",
           "compound-poisson", "drifted-brownian")]
    ts.append(triplet(0.3, 0.5, StablePowerDensity(1.2, 1.0, 0.4, cutoff=3.0),
                      LogSingularDensity(2.0, 0.2), Atoms(((-1.5, 0.7), (0.2, 1.0)))))
    return [ExponentHandle(t) for t in ts]


class TestInvariants:
    def test_zero(self, handles):
        assert all(h.psi(0.0) == 0 for h in handles)

    def test_hermitian(self, handles, rng):
        zs = rng.uniform(-1e3, 1e3, size=200)
        for h in handles:
            for z in zs[:40]:
                assert abs(h.psi(-z) - h.psi(z).conjugate()) < 1e-10 * max(1, abs(h.psi(z)))

    def test_nonnegative_real_part(self, handles):
        zs = np.concatenate([np.logspace(-3, 6, 200), -np.logspace(-3, 6, 50)])
        for h in handles:
            assert h.psi_grid(zs).real.min() >= -1e-9

    def test_symmetric_is_real(self):
        t = triplet(0, 0.7, StablePowerDensity(0.8, 1.3, 1.3, cutoff=2.0),
                    Atoms(((0.4, 1.0), (-0.4, 1.0))))
        vals = ExponentHandle(t).psi_grid(np.logspace(-2, 6, 300))
        assert np.abs(vals.imag).max() < 1e-10

    def test_grid_matches_pointwise(self, handles):
        zs = np.logspace(-1, 3, 17)
        for h in handles:
            fresh = ExponentHandle(h.triplet)
            pointwise = np.array([fresh.psi(z) for z in zs])
            assert np.allclose(h.psi_grid(zs), pointwise, rtol=1e-13, atol=0)

    def test_threads(self):
        t = catalog_get("example-2.9").triplet
        zs = np.logspace(-1, 4, 130)
        one = ExponentHandle(t).psi_grid(zs)
        many = ExponentHandle(t, threads=4).psi_grid(zs)
        assert np.array_equal(one, many)

    def test_dimension_checked(self):
        with pytest.raises(DimensionMismatch):
            ExponentHandle(triplet(0, 1)).psi([1.0, 2.0])


@pytest.mark.parametrize("alpha,cp,cm", [(0.5, 1.0, 1.0), (0.5, 1.0, 0.0), (1.0, 1.0, 0.0),
                                          (1.0, 0.7, 0.3), (1.5, 1.0, 1.0), (1.5, 1.0, 0.0),
                                          (0.3, 0.2, 2.0), (1.8, 1.0, 0.5)])
def test_closed_form_vs_quadrature(alpha, cp, cm):
    t = triplet(0, 0, StablePowerDensity(alpha, cp, cm, cutoff=INF))
    zs = np.logspace(-1, 2, 25)
    ref = stable_psi(alpha, cp, cm)(zs)
    quad = ExponentHandle(t, strategy="quadrature").psi_grid(zs)
    auto = ExponentHandle(t).psi_grid(zs)
    assert np.max(np.abs(quad - ref) / np.abs(ref)) < 1e-6
    assert np.max(np.abs(auto - ref) / np.abs(ref)) < 1e-6


def test_multidimensional_atoms():
    t = validate_triplet([1.0, 0.0], np.diag([1.0, 0.0]),
                         LevyMeasure([Atoms((((0.5, 0.2), 1.0),))]))
    z = np.array([1.0, 2.0])
    want = 1j + 0.5 + (1 - cmath.exp(1j * 0.9) + 0.9j)
    assert evaluate_psi(ExponentHandle(t), z) == pytest.approx(want, rel=1e-14)
