"""Decay-rate root finding and the exponential tail bounds built on it."""

import math

import numpy as np
import pytest

from ruinkit import (
    Exponential,
    PerturbedModel,
    adjustment_coefficient,
    lundberg_bound,
    renyi_coefficient,
)


def test_unit_loading_closed_form():
    # lam=1, theta=1, sigma=1, Exp(1): the root equation is quadratic after
    # clearing and the positive root is (5 - sqrt(17)) / 2
    m = PerturbedModel(Exponential(1.0), lam=1.0, sigma=1.0, loading=1.0)
    res = adjustment_coefficient(m)
    assert res.R == pytest.approx((5.0 - math.sqrt(17.0)) / 2.0, abs=1e-9)


def test_exp_table_model(exp_model):
    res = adjustment_coefficient(exp_model)
    assert res.R == pytest.approx(0.006637103025, abs=1e-10)
    assert res.R == pytest.approx(0.0066371, abs=1e-6)


def test_gamma_table_model(gamma_model):
    res = adjustment_coefficient(gamma_model)
    assert res.R == pytest.approx(0.007974435962, abs=1e-10)
    assert res.R == pytest.approx(0.0079744, abs=1e-6)


def test_mixture_table_model(mix_model):
    res = adjustment_coefficient(mix_model)
    assert res.R == pytest.approx(4.408475716e-4, rel=1e-8)
    # the root must sit inside the mgf convergence region
    assert res.R < mix_model.claims.mgf_sup


def test_sigma_zero_exponential():
    # classical compound Poisson: R = theta*rate/(1+theta) for Exp claims
    m = PerturbedModel(Exponential(1.0), lam=1.0, sigma=0.0, loading=1.0)
    assert adjustment_coefficient(m).R == pytest.approx(0.5, abs=1e-12)


def test_result_diagnostics(exp_model):
    res = adjustment_coefficient(exp_model)
    assert abs(res.residual) < 1e-12
    lo, hi = res.bracket
    assert lo < res.R < hi
    assert res.iterations > 0


def test_root_solves_equation(gamma_model):
    res = adjustment_coefficient(gamma_model)
    m = gamma_model
    g = m.lam * (m.claims.mgf(res.R) - 1.0) - m.c * res.R + 0.5 * m.sigma**2 * res.R**2
    assert g == pytest.approx(0.0, abs=1e-12)


class TestLundbergBound:
    def test_values(self, exp_model):
        R = adjustment_coefficient(exp_model).R
        u = np.array([1.0, 10.0, 50.0])
        np.testing.assert_allclose(lundberg_bound(exp_model, u), np.exp(-R * u), rtol=1e-12)

    def test_explicit_rate_override(self, exp_model):
        assert lundberg_bound(exp_model, 10.0, R=0.01) == pytest.approx(math.exp(-0.1), rel=1e-12)

    def test_bounds_the_exact_curve(self, exp_model):
        from ruinkit import de_vylder_ruin  # exact closed form here

        u = np.linspace(0.0, 100.0, 51)
        assert np.all(de_vylder_ruin(exp_model, u) <= lundberg_bound(exp_model, u) + 1e-12)


def test_renyi_coefficient_values(exp_model, gamma_model, mix_model):
    # 2 q mu1 / mu2
    assert renyi_coefficient(exp_model) == pytest.approx(exp_model.q, rel=1e-12)
    assert renyi_coefficient(gamma_model) == pytest.approx(4.0 * gamma_model.q / 3.0, rel=1e-12)
    assert renyi_coefficient(mix_model) == pytest.approx(4.583974832320889e-4, rel=1e-10)
