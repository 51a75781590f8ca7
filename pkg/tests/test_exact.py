"""Ruin probabilities by transform inversion, and the two-cause split."""

import math

import numpy as np
import pytest

from ruinkit import (
    Exponential,
    PerturbedModel,
    RuinCurve,
    de_vylder_ruin,
    decompose_ruin,
    exact_ruin,
    mixture_exact_ruin,
)

from conftest import MIX_RATES, MIX_WEIGHTS


def test_u_zero_exact_one(exp_model):
    assert exact_ruin(exp_model, 0.0) == 1.0


def test_u_zero_classical():
    m = PerturbedModel(Exponential(1.0), lam=1.0, sigma=0.0, loading=0.1)
    assert exact_ruin(m, 0.0) == 1.0 - m.q


def test_negative_u_rejected(exp_model):
    with pytest.raises(ValueError):
        exact_ruin(exp_model, -0.5)


@pytest.mark.parametrize("sigma", [0.5, 1.0, 2.0])
def test_matches_closed_form_for_exponential_claims(sigma):
    # the four-moment fit is an identity for exponential claims, so its
    # two-exponential formula is the exact answer and the strongest
    # available accuracy oracle for the inversion
    m = PerturbedModel(Exponential(1.0), lam=1.0, sigma=sigma, loading=0.01)
    u = np.linspace(0.0, 100.0, 41)
    got = np.array([exact_ruin(m, x) for x in u])
    np.testing.assert_allclose(got, de_vylder_ruin(m, u), atol=1e-8)


def test_sigma_zero_classical_formula():
    m = PerturbedModel(Exponential(1.0), lam=1.0, sigma=0.0, loading=0.1)
    for u in (0.5, 1.0, 5.0):
        expected = (1.0 / 1.1) * math.exp(-0.1 * u / 1.1)
        assert exact_ruin(m, u) == pytest.approx(expected, abs=1e-9)


def test_gamma_frozen_values(gamma_model):
    assert exact_ruin(gamma_model, 1.0) == pytest.approx(0.988866, abs=5e-7)
    assert exact_ruin(gamma_model, 10.0) == pytest.approx(0.920397, abs=5e-7)
    assert exact_ruin(gamma_model, 50.0) == pytest.approx(0.669029, abs=5e-7)


def test_mixture_matches_partial_fraction_solution(mix_model):
    u = np.array([0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0])
    closed = mixture_exact_ruin(1.0, mix_model.c, 1.0, MIX_WEIGHTS, MIX_RATES, u)
    inverted = np.array([exact_ruin(mix_model, x) for x in u])
    np.testing.assert_allclose(inverted, closed, atol=1e-9)


def test_euler_agrees_with_talbot(exp_model):
    for u in (0.5, 5.0, 50.0):
        a = exact_ruin(exp_model, u, method="talbot")
        b = exact_ruin(exp_model, u, method="euler")
        assert a == pytest.approx(b, abs=1e-8)


def test_array_input(exp_model):
    u = np.array([0.0, 1.0, 10.0])
    vals = exact_ruin(exp_model, u)
    assert isinstance(vals, np.ndarray)
    assert vals[0] == 1.0
    assert vals[1] == pytest.approx(0.989188, abs=5e-7)


def test_scalar_returns_float(exp_model):
    v = exact_ruin(exp_model, 1.0)
    assert isinstance(v, float)


def test_monotone_decreasing(exp_model):
    u = np.linspace(0.0, 30.0, 31)
    vals = exact_ruin(exp_model, u)
    assert np.all(np.diff(vals) < 0)


class TestRuinCurve:
    def test_validates_shapes(self):
        with pytest.raises(ValueError):
            RuinCurve("x", np.array([0.0, 1.0]), np.array([1.0]))

    def test_validates_monotone_grid(self):
        with pytest.raises(ValueError):
            RuinCurve("x", np.array([0.0, 2.0, 1.0]), np.array([1.0, 0.5, 0.4]))

    def test_iterates_pairs(self):
        c = RuinCurve("x", np.array([0.0, 1.0]), np.array([1.0, 0.5]))
        assert list(c) == [(0.0, 1.0), (1.0, 0.5)]


class TestDecomposition:
    def test_boundary_values(self, exp_model):
        dec = decompose_ruin(exp_model, 1.0, step=0.01)
        assert dec.psi1.values[0] == pytest.approx(1.0, abs=1e-12)
        assert dec.psi2.values[0] == pytest.approx(0.0, abs=1e-12)

    def test_frozen_split_at_one(self, exp_model):
        dec = decompose_ruin(exp_model, 1.0, step=0.01)
        assert dec.psi1.values[-1] == pytest.approx(0.36109069253360404, rel=1e-10)
        assert dec.psi2.values[-1] == pytest.approx(0.6280961350848746, rel=1e-10)

    def test_sum_matches_exact(self, exp_model):
        dec = decompose_ruin(exp_model, 5.0, step=0.01)
        total = dec.psi1.values + dec.psi2.values
        exact = de_vylder_ruin(exp_model, dec.psi1.u)
        assert np.max(np.abs(total - exact)) < 1e-5

    def test_refinement_helps(self, exp_model):
        u_ref = None
        errs = {}
        for refine in (1, 4):
            dec = decompose_ruin(exp_model, 5.0, step=0.01, refine=refine)
            total = dec.psi1.values + dec.psi2.values
            if u_ref is None:
                u_ref = de_vylder_ruin(exp_model, dec.psi1.u)
            errs[refine] = np.max(np.abs(total - u_ref))
        assert errs[4] < errs[1]
        assert errs[1] < 1e-4  # coarse march is still usable

    def test_oscillation_part_decreasing(self, exp_model):
        dec = decompose_ruin(exp_model, 5.0, step=0.05)
        assert np.all(np.diff(dec.psi1.values) < 0)

    def test_claim_part_nonnegative(self, gamma_model):
        dec = decompose_ruin(gamma_model, 5.0, step=0.05)
        assert np.all(dec.psi2.values >= 0)

    def test_validation(self, exp_model):
        with pytest.raises(ValueError):
            decompose_ruin(exp_model, -1.0)
        with pytest.raises(ValueError):
            decompose_ruin(exp_model, 1.0, step=0.0)
        with pytest.raises(ValueError):
            decompose_ruin(exp_model, 1.0, step=0.01, refine=0)

    def test_labels(self, exp_model):
        dec = decompose_ruin(exp_model, 1.0, step=0.1)
        assert dec.psi1.method == "oscillation_ruin"
        assert dec.psi2.method == "claim_ruin"
