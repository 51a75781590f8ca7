"""Lattice discretization bounds via the compound-geometric recursion."""

import numpy as np
import pytest

from ruinkit import (
    Exponential,
    PerturbedModel,
    de_vylder_ruin,
    discretize_ladder,
    exact_ruin,
    panjer_bounds,
)


U11 = np.array([0.1, 0.2, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 25.0, 50.0])


class TestDiscretizeLadder:
    def test_cell_masses(self, exp_model):
        lad = discretize_ladder(exp_model, 0.1, 50)
        assert lad.lattice_width == 0.1
        assert np.all(lad.p_lower >= 0) and np.all(lad.p_upper >= 0)
        # ceil cells shift mass down one index: cell 0 is empty
        assert lad.p_upper[0] == 0.0
        assert lad.p_lower.sum() <= 1.0 + 1e-12

    def test_upper_cells_stochastically_dominate(self, gamma_model):
        lad = discretize_ladder(gamma_model, 0.1, 80)
        # partial sums of the ceil cells never exceed those of the floor cells
        assert np.all(np.cumsum(lad.p_upper) <= np.cumsum(lad.p_lower) + 1e-12)

    def test_mass_deficit_shrinks_with_points(self, exp_model):
        small = discretize_ladder(exp_model, 0.1, 50).mass_deficit
        large = discretize_ladder(exp_model, 0.1, 500).mass_deficit
        assert 0.0 <= large < small

    def test_validation(self, exp_model):
        with pytest.raises(ValueError):
            discretize_ladder(exp_model, 0.0, 50)
        with pytest.raises(ValueError):
            discretize_ladder(exp_model, 0.1, 0)


class TestPublishedConvention:
    """Replicates the external tabulation's bound columns (see the frozen
    reference module); those columns bound the record-free compound
    geometric, not the full ruin probability."""

    def test_exp_frozen_cells(self, exp_model):
        pair = panjer_bounds(exp_model, 0.1, np.array([1.0, 50.0]), convention="published")
        assert pair.lower.values[0] == pytest.approx(0.984570, abs=2e-4)
        assert pair.upper.values[0] == pytest.approx(0.985410, abs=2e-4)
        assert pair.lower.values[1] == pytest.approx(0.698694, abs=2e-4)
        assert pair.upper.values[1] == pytest.approx(0.714842, abs=2e-4)

    def test_lower_below_upper(self, mix_model):
        pair = panjer_bounds(mix_model, 0.1, U11, convention="published")
        assert np.all(pair.lower.values <= pair.upper.values + 1e-15)

    def test_rejects_unit_loading(self, heavy_loading_model):
        # the published geometric parameter theta/(1-theta) breaks down here
        with pytest.raises(ValueError):
            panjer_bounds(heavy_loading_model, 0.1, np.array([1.0]), convention="published")


class TestStrictConvention:
    def test_sandwich_exponential(self, exp_model):
        width = 0.1
        u = width * np.arange(1, 101)
        pair = panjer_bounds(exp_model, width, u, convention="strict")
        exact = de_vylder_ruin(exp_model, u)  # closed form, exact here
        assert np.all(pair.lower.values <= exact + 1e-12)
        assert np.all(exact <= pair.upper.values + 1e-12)

    def test_sandwich_gamma(self, gamma_model):
        width = 0.1
        u = width * np.arange(1, 51)
        pair = panjer_bounds(gamma_model, width, u, convention="strict")
        exact = np.array([exact_ruin(gamma_model, x) for x in u])
        assert np.all(pair.lower.values <= exact + 1e-12)
        assert np.all(exact <= pair.upper.values + 1e-12)

    def test_width_shrinks_with_lattice(self, exp_model):
        widths = []
        for w in (0.2, 0.1, 0.05):
            pair = panjer_bounds(exp_model, w, np.array([1.0]), convention="strict")
            widths.append(pair.upper.values[0] - pair.lower.values[0])
        assert widths[0] > widths[1] > widths[2] > 0

    def test_frozen_regression_values(self, exp_model, gamma_model):
        pair = panjer_bounds(exp_model, 0.1, np.array([0.5, 1.0, 2.0]), convention="strict")
        np.testing.assert_allclose(
            pair.lower.values,
            [0.9921741686429114, 0.9881761781137677, 0.9812447626949384],
            rtol=1e-12,
        )
        np.testing.assert_allclose(
            pair.upper.values,
            [0.9933570056492113, 0.9894513836380866, 0.9829339030467033],
            rtol=1e-12,
        )
        pg = panjer_bounds(gamma_model, 0.1, np.array([1.0]), convention="strict")
        assert pg.lower.values[0] == pytest.approx(0.9877050846693548, rel=1e-12)
        assert pg.upper.values[0] == pytest.approx(0.9891784985659039, rel=1e-12)

    def test_unit_loading_allowed(self, heavy_loading_model):
        pair = panjer_bounds(heavy_loading_model, 0.1, np.array([1.0]), convention="strict")
        exact = de_vylder_ruin(heavy_loading_model, 1.0)
        assert pair.lower.values[0] <= exact <= pair.upper.values[0]


class TestSnapping:
    def test_off_lattice_u_is_conservative(self, exp_model):
        # u strictly inside a cell: the upper bound takes the cell below,
        # the lower bound the cell above, widening the pair
        on = panjer_bounds(exp_model, 0.1, np.array([1.0]), convention="strict")
        off = panjer_bounds(exp_model, 0.1, np.array([1.04]), convention="strict")
        assert off.upper.values[0] >= on.upper.values[0] - 1e-15
        lo_next = panjer_bounds(exp_model, 0.1, np.array([1.1]), convention="strict")
        assert off.lower.values[0] == pytest.approx(lo_next.lower.values[0], rel=1e-14)

    def test_float_noise_rounds_to_lattice(self, exp_model):
        a = panjer_bounds(exp_model, 0.1, np.array([1.0]), convention="strict")
        b = panjer_bounds(exp_model, 0.1, np.array([1.0 * (1 + 2e-10)]), convention="strict")
        assert a.lower.values[0] == b.lower.values[0]
        assert a.upper.values[0] == b.upper.values[0]


def test_validation(exp_model):
    with pytest.raises(ValueError):
        panjer_bounds(exp_model, 0.1, np.array([-1.0]))
    with pytest.raises(ValueError):
        panjer_bounds(exp_model, 0.1, np.array([1.0]), convention="fuzzy")
    with pytest.raises(ValueError):
        # truncation shorter than the largest requested u
        panjer_bounds(exp_model, 0.1, np.array([50.0]), n_points=100)


def test_curve_metadata(exp_model):
    pair = panjer_bounds(exp_model, 0.1, np.array([1.0, 2.0]))
    assert pair.lower.method == "dg_lower"
    assert pair.upper.method == "dg_upper"
    assert pair.lattice_width == 0.1
