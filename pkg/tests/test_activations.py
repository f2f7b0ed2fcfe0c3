"""Activation pair tests: the logit/sigmoid reference pair."""

import math

import numpy as np
import pytest

from karnet import ConfigError, apply_f, apply_phi, get_pair

PAIR = get_pair("logit-sigmoid")


class TestApplyF:
    def test_midpoint_maps_to_zero(self):
        out = apply_f(PAIR, np.full((3, 2), 0.5))
        np.testing.assert_allclose(out, 0.0, atol=1e-12)

    def test_boundary_clamps_finite(self):
        out = apply_f(PAIR, np.array([[1.0, 0.0]]))
        assert np.all(np.isfinite(out))
        expected_hi = math.log((1.0 - PAIR.clamp_eps) / PAIR.clamp_eps)
        np.testing.assert_allclose(out, [[expected_hi, -expected_hi]])

    def test_scalar_value_against_direct_log(self):
        x = 0.9991
        out = apply_f(PAIR, np.array([[x]]))
        assert out[0, 0] == pytest.approx(math.log(x / (1.0 - x)), abs=1e-10)

    def test_outputs_finite_for_arbitrary_inputs(self):
        rng = np.random.default_rng(0)
        m = rng.normal(scale=100.0, size=(50, 4))
        assert np.all(np.isfinite(apply_f(PAIR, m)))


class TestApplyPhi:
    def test_zero_maps_to_half(self):
        out = apply_phi(PAIR, np.zeros((2, 2)))
        np.testing.assert_allclose(out, 0.5)

    def test_saturation_clamped_into_domain(self):
        out = apply_phi(PAIR, np.array([[-1e4, 1e4]]))
        assert out[0, 0] >= PAIR.lo + PAIR.clamp_eps
        assert out[0, 1] <= PAIR.hi - PAIR.clamp_eps

    def test_outputs_always_inside_band(self):
        rng = np.random.default_rng(1)
        out = apply_phi(PAIR, rng.normal(scale=1e3, size=(100, 3)))
        assert np.all(out >= PAIR.lo + PAIR.clamp_eps)
        assert np.all(out <= PAIR.hi - PAIR.clamp_eps)


class TestPairProperties:
    def test_roundtrip_grid(self):
        """phi(f(x)) = x to 1e-10 on a 1000-point grid inside the safe domain."""
        x = np.linspace(0.01, 0.99, 1000).reshape(40, 25)
        np.testing.assert_allclose(apply_phi(PAIR, apply_f(PAIR, x)), x, atol=1e-10)

    def test_forward_monotone(self):
        x = np.sort(np.random.default_rng(2).uniform(0.001, 0.999, size=500))
        fx = apply_f(PAIR, x.reshape(1, -1)).ravel()
        assert np.all(np.diff(fx) > 0)

    def test_inverse_monotone(self):
        y = np.sort(np.random.default_rng(3).normal(scale=5.0, size=500))
        py = apply_phi(PAIR, y.reshape(1, -1)).ravel()
        assert np.all(np.diff(py) >= 0)

    def test_derivative_matches_finite_differences(self):
        x = np.linspace(0.05, 0.95, 101)
        h = 1e-7
        numeric = (apply_f(PAIR, (x + h).reshape(1, -1)) -
                   apply_f(PAIR, (x - h).reshape(1, -1))) / (2 * h)
        analytic = PAIR.forward_deriv(x.reshape(1, -1))
        np.testing.assert_allclose(numeric, analytic, rtol=1e-5)


def test_unknown_pair_name():
    with pytest.raises(ConfigError):
        get_pair("relu")
