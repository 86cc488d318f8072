"""Superposed-wave tests: cyclic identities and the single-wave dual form."""

import numpy as np
import pytest

from cnoidal_lab import (
    SuperposedWave,
    WaveKind,
    complete_K,
    identity_residuals,
    landen_params,
    landen_residual,
    superposed_derivative,
    superposed_eval,
)
from cnoidal_lab.superposition import _m_tilde_from_periods

M_GRID = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]


def sample_points(m, p, n=1000, seed=0):
    rng = np.random.default_rng(seed)
    period = 4.0 * complete_K(m) / p
    return rng.uniform(-period, period, n)


class TestSuperposedEval:
    def test_dn_sum_trigonometric(self):
        wave = SuperposedWave(WaveKind.DN, 3, 0.0)
        assert superposed_eval(wave, 1.234) == pytest.approx(3.0, abs=1e-14)

    def test_sn_sum_trigonometric_cancels(self):
        wave = SuperposedWave(WaveKind.SN, 3, 0.0)
        xs = np.linspace(-5, 5, 100)
        assert np.max(np.abs(superposed_eval(wave, xs))) < 1e-13

    def test_dn_sum_origin_equals_alpha(self):
        params = landen_params(0.7, 3)
        wave = SuperposedWave(WaveKind.DN, 3, 0.7)
        assert superposed_eval(wave, 0.0) == pytest.approx(params.alpha,
                                                           abs=1e-13)

    def test_derivative_matches_finite_difference(self):
        wave = SuperposedWave(WaveKind.CN, 5, 0.6)
        xs = np.linspace(-3, 3, 40)
        h = 1e-6
        fd = (superposed_eval(wave, xs + h) - superposed_eval(wave, xs - h)) / (2 * h)
        assert np.max(np.abs(superposed_derivative(wave, xs) - fd)) < 1e-7

    def test_rejects_even_or_large_p(self):
        with pytest.raises(ValueError):
            SuperposedWave(WaveKind.SN, 2, 0.5)
        with pytest.raises(ValueError):
            SuperposedWave(WaveKind.SN, 11, 0.5)


class TestCyclicIdentities:
    def test_trigonometric_case(self):
        res = identity_residuals(0.0, 3, np.linspace(-3, 3, 200))
        assert max(res) < 1e-13

    @pytest.mark.parametrize("p", [3, 5, 7])
    @pytest.mark.parametrize("m", M_GRID)
    def test_full_grid(self, p, m):
        res = identity_residuals(m, p, sample_points(m, p))
        assert max(res) < 1e-10

    def test_p5_spec_point(self):
        res = identity_residuals(0.5, 5, sample_points(0.5, 5))
        assert max(res) < 1e-10


class TestLandenParams:
    def test_trigonometric_endpoint(self):
        params = landen_params(0.0, 3)
        assert params.alpha == pytest.approx(3.0, abs=1e-14)
        assert params.beta == pytest.approx(0.0, abs=1e-14)
        assert params.m_tilde == 0.0

    def test_modulus_tends_to_one(self):
        values = [landen_params(m, 3).m_tilde
                  for m in (0.9, 0.999, 1 - 1e-6, 1 - 1e-9)]
        assert all(a < b for a, b in zip(values, values[1:]))
        assert values[-1] > 0.99

    @pytest.mark.parametrize("m", M_GRID)
    def test_amplitude_identity_p3(self, m):
        lp = landen_params(m, 3)
        assert abs(m * lp.beta**2 - lp.alpha**2 * lp.m_tilde) < 1e-10

    def test_closed_form_agrees_with_period_matching(self):
        for m in [0.2, 0.5, 0.8]:
            lp = landen_params(m, 3)
            via_periods = _m_tilde_from_periods(m, 3, lp.alpha)
            assert abs(lp.m_tilde - via_periods) < 1e-12

    def test_p1_is_identity_transform(self):
        lp = landen_params(0.42, 1)
        assert lp.alpha == 1.0 and lp.beta == 1.0 and lp.m_tilde == 0.42

    def test_amplitude_contrast_monotone(self):
        ratios = [landen_params(m, 3).beta / landen_params(m, 3).alpha
                  for m in M_GRID]
        assert all(a < b for a, b in zip(ratios, ratios[1:]))
        assert landen_params(1e-4, 3).beta / landen_params(1e-4, 3).alpha < 1e-4


class TestLandenResidual:
    def test_trigonometric_case(self):
        res = landen_residual(0.0, 3, np.linspace(-3, 3, 200))
        assert max(res) < 1e-13

    @pytest.mark.parametrize("m", [0.3, 0.7])
    def test_p3_spec_points(self, m):
        res = landen_residual(m, 3, sample_points(m, 3))
        assert max(res) < 1e-9

    @pytest.mark.parametrize("p", [5, 7])
    @pytest.mark.parametrize("m", [0.1, 0.5, 0.9])
    def test_higher_p(self, p, m):
        res = landen_residual(m, p, sample_points(m, p))
        assert max(res) < 1e-9


class TestWaveBounds:
    @pytest.mark.parametrize("m", [0.1, 0.5, 0.9])
    def test_dn_sum_positive_and_oscillating_sums_bounded(self, m):
        params = landen_params(m, 3)
        xs = sample_points(m, 3, n=2000, seed=9)
        d = superposed_eval(SuperposedWave(WaveKind.DN, 3, m), xs)
        s = superposed_eval(SuperposedWave(WaveKind.SN, 3, m), xs)
        c = superposed_eval(SuperposedWave(WaveKind.CN, 3, m), xs)
        assert np.min(d) > 0.0
        bound = params.beta + 1e-12
        assert np.max(np.abs(s)) <= bound
        assert np.max(np.abs(c)) <= bound
