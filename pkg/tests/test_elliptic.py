"""Elliptic kernel tests: oracles are scipy quadrature/ellipj and identities."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import ellipj, ellipk

from cnoidal_lab import (
    DivergentPeriod,
    Modulus,
    ModulusError,
    complete_K,
    jacobi,
    jacobi_arrays,
    qtilde,
    qtilde_quartic_root,
)


def K_quadrature(m: float) -> float:
    """Independent oracle: adaptive quadrature of the defining integral."""
    val, _ = quad(lambda t: 1.0 / math.sqrt(1.0 - m * math.sin(t) ** 2),
                  0.0, math.pi / 2.0, epsabs=1e-15, epsrel=1e-14, limit=200)
    return val


class TestCompleteK:
    def test_m0_is_quarter_pi(self):
        assert complete_K(0.0) == pytest.approx(math.pi / 2.0, abs=1e-15)

    def test_half_matches_quadrature(self):
        assert abs(complete_K(0.5) - K_quadrature(0.5)) < 1e-12

    def test_quadrature_grid(self):
        for m in [0.1, 0.3, 0.9, 0.99]:
            assert abs(complete_K(m) - K_quadrature(m)) < 1e-12

    def test_matches_scipy(self):
        for m in np.linspace(0.0, 0.999999, 40):
            assert complete_K(m) == pytest.approx(ellipk(m), rel=1e-14)

    def test_m1_diverges(self):
        with pytest.raises(DivergentPeriod):
            complete_K(1.0)

    def test_rejects_bad_modulus(self):
        with pytest.raises(ModulusError):
            complete_K(-0.1)
        with pytest.raises(ModulusError):
            complete_K(1.2)


class TestJacobi:
    def test_origin(self):
        for m in [0.0, 0.4, 1.0]:
            t = jacobi(0.0, m)
            assert (t.sn, t.cn, t.dn) == (0.0, 1.0, 1.0)

    def test_trigonometric_limit(self):
        x = np.linspace(-7, 7, 101)
        sn, cn, dn = jacobi_arrays(x, 0.0)
        assert np.allclose(sn, np.sin(x), atol=1e-15)
        assert np.allclose(cn, np.cos(x), atol=1e-15)
        assert np.allclose(dn, 1.0, atol=0)

    def test_hyperbolic_limit(self):
        x = np.linspace(-5, 5, 51)
        sn, cn, dn = jacobi_arrays(x, 1.0)
        assert np.allclose(sn, np.tanh(x), atol=1e-15)
        assert np.allclose(cn, 1.0 / np.cosh(x), atol=1e-15)
        assert np.allclose(dn, cn, atol=0)

    def test_quarter_period(self):
        t = jacobi(complete_K(0.5), 0.5)
        assert t.sn == pytest.approx(1.0, abs=1e-12)
        assert t.cn == pytest.approx(0.0, abs=1e-12)
        assert t.dn == pytest.approx(math.sqrt(0.5), abs=1e-12)

    def test_identities_random(self):
        rng = np.random.default_rng(2024)
        worst_sc = worst_dn = 0.0
        for _ in range(100):
            m = rng.uniform(0.0, 0.99)
            x = rng.uniform(-50.0, 50.0, 100)
            sn, cn, dn = jacobi_arrays(x, m)
            worst_sc = max(worst_sc, np.max(np.abs(sn**2 + cn**2 - 1.0)))
            worst_dn = max(worst_dn, np.max(np.abs(dn**2 + m * sn**2 - 1.0)))
        assert worst_sc < 1e-12
        assert worst_dn < 1e-12

    def test_against_scipy(self):
        rng = np.random.default_rng(11)
        for m in [0.05, 0.35, 0.65, 0.95]:
            x = rng.uniform(-25.0, 25.0, 500)
            sn, cn, dn = jacobi_arrays(x, m)
            s2, c2, d2, _ = ellipj(x, m)
            assert np.max(np.abs(sn - s2)) < 1e-9
            assert np.max(np.abs(cn - c2)) < 1e-9
            assert np.max(np.abs(dn - d2)) < 1e-9

    def test_derivative_relations(self):
        h = 1e-5
        rng = np.random.default_rng(5)
        for m in [0.2, 0.7, 0.95]:
            x = rng.uniform(-4.0, 4.0, 50)
            sn, cn, dn = jacobi_arrays(x, m)
            sp, cp, dp = jacobi_arrays(x + h, m)
            sm, cm, dm = jacobi_arrays(x - h, m)
            assert np.max(np.abs((sp - sm) / (2 * h) - cn * dn)) < 1e-6
            assert np.max(np.abs((cp - cm) / (2 * h) + sn * dn)) < 1e-6
            assert np.max(np.abs((dp - dm) / (2 * h) + m * sn * cn)) < 1e-6

    def test_periodicity(self):
        rng = np.random.default_rng(17)
        for m in [0.3, 0.8, 0.99]:
            big_k = complete_K(m)
            x = rng.uniform(-10.0, 10.0, 200)
            sn0, _, dn0 = jacobi_arrays(x, m)
            sn4, _, _ = jacobi_arrays(x + 4 * big_k, m)
            _, _, dn2 = jacobi_arrays(x + 2 * big_k, m)
            assert np.max(np.abs(sn4 - sn0)) < 1e-10
            assert np.max(np.abs(dn2 - dn0)) < 1e-10

    def test_ranges(self):
        rng = np.random.default_rng(23)
        x = rng.uniform(-30.0, 30.0, 2000)
        for m in [0.1, 0.9, 0.999]:
            sn, cn, dn = jacobi_arrays(x, m)
            assert np.all(dn > 0.0)
            assert np.max(np.abs(sn)) <= 1.0 + 1e-14
            assert np.max(np.abs(cn)) <= 1.0 + 1e-14


class TestQtilde:
    def test_endpoints(self):
        assert qtilde(0.0) == 1.0
        assert qtilde(1.0) == 0.0
        assert qtilde_quartic_root(0.0) == 1.0
        assert qtilde_quartic_root(1.0) == 0.0

    def test_satisfies_quartic(self):
        for m in [0.25, 0.5, 0.75]:
            q = qtilde(m)
            residual = q**4 + 2 * q**3 - 2 * (1 - m) * q - (1 - m)
            assert abs(residual) < 1e-12

    def test_cross_oracle_99_grid(self):
        for m in np.linspace(0.01, 0.99, 99):
            assert abs(qtilde(m) - qtilde_quartic_root(m)) < 1e-12

    def test_monotone_decreasing(self):
        values = [qtilde(m) for m in np.linspace(0.0, 1.0, 101)]
        assert all(a > b for a, b in zip(values, values[1:]))


class TestModulus:
    def test_validation(self):
        assert float(Modulus(0.5)) == 0.5
        with pytest.raises(ModulusError):
            Modulus(-1e-9)
        with pytest.raises(ModulusError):
            Modulus(1.0 + 1e-9)
