import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import expit
from scipy.stats import norm

from refinery import (ClassConditionalModel, EstimationError, GaussianDensity,
                      GridDensity, InputError, ParameterError,
                      histogram_from_samples, joint_from_samples,
                      joint_from_table, marginal, posterior)
from refinery.densities import SMOOTH_EPS

from conftest import gaussian_pair


class TestPosterior:
    def test_symmetric_midpoint(self):
        assert posterior(gaussian_pair(1.5), 0.0) == pytest.approx(0.5, abs=1e-12)

    def test_likelihood_ratio(self):
        # odds at x are exp(2 mu x / sigma^2); oracle via the logistic form
        model = gaussian_pair(1.5)
        assert posterior(model, 1.5) == pytest.approx(expit(4.5), abs=1e-12)

    def test_identical_conditionals(self, identical_model):
        xs = np.linspace(0.0, 1.0, 7)
        np.testing.assert_allclose(posterior(identical_model, xs), 0.5,
                                   atol=1e-15)

    def test_floor_falls_back_to_prior(self):
        model = gaussian_pair(1.5, prior=0.3)
        assert posterior(model, 1e6) == pytest.approx(0.3)

    def test_swap_identity(self):
        model = gaussian_pair(0.7, prior=0.3)
        xs = np.linspace(-4.0, 4.0, 33)
        total = posterior(model, xs) + posterior(model.swapped(), xs)
        np.testing.assert_allclose(total, 1.0, atol=1e-12)

    def test_monotone_for_ordered_gaussians(self):
        xs = np.linspace(-6.0, 6.0, 201)
        vals = posterior(gaussian_pair(1.0), xs)
        assert np.all(np.diff(vals) > 0)


class TestMarginal:
    def test_gaussian_value(self):
        expected = 0.5 * (norm.pdf(0.0, 1.5, 1.0) + norm.pdf(0.0, -1.5, 1.0))
        assert marginal(gaussian_pair(1.5), 0.0) == pytest.approx(expected,
                                                                  abs=1e-15)
        assert expected == pytest.approx(norm.pdf(1.5), abs=1e-15)

    def test_identical_equals_common_density(self, identical_model):
        assert marginal(identical_model, 0.25) == pytest.approx(1.0)

    def test_histogram_mixture_linearity(self):
        top = GridDensity(0.0, 1.0, np.array([2.0, 0.0]))
        flat = GridDensity(0.0, 1.0, np.array([1.0, 1.0]))
        model = ClassConditionalModel(top, flat, prior=0.25)
        assert marginal(model, 0.25) == pytest.approx(0.25 * 2.0 + 0.75 * 1.0)

    def test_integrates_to_one(self):
        model = gaussian_pair(1.5, prior=0.37)
        val, _ = quad(lambda x: marginal(model, x), -9.5, 9.5)
        assert val == pytest.approx(1.0, abs=1e-6)


class TestHistogramFromSamples:
    def test_single_bin_point_mass(self):
        d = histogram_from_samples([0.5] * 10, k=1, lo=0.0, hi=2.0)
        assert d.mass[0] == pytest.approx(0.5)

    def test_uniform_law(self, rng):
        d = histogram_from_samples(rng.random(1000), k=10, lo=0.0, hi=1.0)
        # 5 sigma binomial band per bin
        sigma = math.sqrt(1000 * 0.1 * 0.9) / 100.0
        np.testing.assert_allclose(d.mass, 1.0, atol=5 * sigma)

    def test_sample_at_hi_goes_to_last_bin(self):
        d = histogram_from_samples([1.0], k=4, lo=0.0, hi=1.0)
        assert d.mass[-1] > 0

    def test_out_of_range_clamps(self):
        d = histogram_from_samples([-5.0, 0.1, 7.0], k=2, lo=0.0, hi=1.0)
        assert d.mass.sum() * d.delta == pytest.approx(1.0)
        assert d.mass[0] > d.mass[1]

    def test_no_inrange_samples(self):
        with pytest.raises(EstimationError):
            histogram_from_samples([5.0, 6.0], k=2, lo=0.0, hi=1.0)

    def test_invariants_hold(self, rng):
        d = histogram_from_samples(rng.normal(size=500), k=16, lo=-3.0, hi=3.0)
        assert np.all(d.mass >= 0)
        assert abs(d.mass.sum() * d.delta - 1.0) <= 1e-9


class TestGridDensity:
    def test_bad_mass_rejected(self):
        with pytest.raises(ParameterError):
            GridDensity(0.0, 1.0, np.array([1.0, 2.0]))  # does not integrate to 1
        with pytest.raises(ParameterError):
            GridDensity(0.0, 1.0, np.array([-1.0, 3.0]))
        with pytest.raises(ParameterError):
            GridDensity(1.0, 0.0, np.array([1.0]))

    def test_pdf_lookup(self):
        d = GridDensity(0.0, 1.0, np.array([1.5, 0.5]))
        assert d.pdf(0.25) == 1.5
        assert d.pdf(0.75) == 0.5
        assert d.pdf(1.0) == 0.5
        assert d.pdf(1.01) == 0.0

    def test_from_function_normalizes(self):
        d = GridDensity.from_function(lambda x: x, 0.0, 1.0, 100)
        assert abs(d.mass.sum() * d.delta - 1.0) <= 1e-12


class TestDiscreteJoint:
    def test_xor_table_uniform(self):
        rows = [(0, 0, -1), (0, 1, 1), (1, 0, 1), (1, 1, -1)]
        joint = joint_from_samples(rows)
        assert joint.has_z
        np.testing.assert_allclose(joint.p_cells(), 0.25, atol=1e-8)

    def test_single_row_point_mass(self):
        joint = joint_from_samples([(0, 1)] * 5)
        assert joint.table.shape == (1, 2)
        assert joint.table[0, 1] == pytest.approx(1.0, abs=3 * SMOOTH_EPS)

    def test_table_passthrough_normalizes(self):
        joint = joint_from_table([[2.0, 2.0], [4.0, 0.0]])
        assert joint.table.sum() == pytest.approx(1.0, abs=1e-12)
        assert joint.table[1, 0] == pytest.approx(0.5, abs=1e-8)
        assert joint.table.min() > 0  # smoothing kills exact zeros

    def test_label_mapping(self):
        zero_one = joint_from_samples([(0, 0), (1, 1)])
        signed = joint_from_samples([(0, -1), (1, 1)])
        np.testing.assert_allclose(zero_one.table, signed.table)
        with pytest.raises(InputError):
            joint_from_samples([(0, 2)])

    def test_empty_rejected(self):
        with pytest.raises(EstimationError):
            joint_from_samples([])

    def test_marginal_x_keeps_mass(self):
        rows = [(0, 0, -1), (0, 1, 1), (1, 0, 1), (1, 1, -1)]
        collapsed = joint_from_samples(rows).marginal_x()
        assert not collapsed.has_z
        assert collapsed.table.sum() == pytest.approx(1.0, abs=1e-12)


class TestValidation:
    def test_gaussian_sigma(self):
        with pytest.raises(ParameterError):
            GaussianDensity(0.0, 0.0)

    def test_prior_range(self):
        with pytest.raises(ParameterError):
            gaussian_pair(1.0, prior=1.0)
