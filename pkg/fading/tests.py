import math

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import DomainError
from core.numerics import QuadratureSpec, integrate
from fading.distributions import (
    cos_phase_pdf,
    double_rayleigh_moment,
    double_rayleigh_pdf,
    exact_sum_pdf,
    gamma_surrogate,
    rayleigh_cdf,
    rayleigh_pdf,
    rounded_shape,
    sum_S_pdf,
    x_cdf,
    x_pdf,
    xn_pdf,
    xn_pdf_convolution,
    y2_pdf,
    y2_pdf_substituted,
    y_pdf,
    yn_pdf,
)
from specfun.functions import bessel_k0, ln_gamma

Q = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-10)


class DoubleRayleighTests(SimpleTestCase):

    def test_value_and_origin(self):
        self.assertAlmostEqual(double_rayleigh_pdf(1.0), bessel_k0(1.0), places=15)
        self.assertEqual(double_rayleigh_pdf(0.0), 0.0)

    def test_normalization_and_mean(self):
        self.assertAlmostEqual(integrate(double_rayleigh_pdf, 0.0, math.inf, Q), 1.0, places=8)
        mean = integrate(lambda x: x * double_rayleigh_pdf(x), 0.0, math.inf, Q)
        self.assertAlmostEqual(mean, math.pi / 2, places=8)

    def test_closed_form_moments(self):
        self.assertAlmostEqual(double_rayleigh_moment(1), math.pi / 2, places=14)
        self.assertAlmostEqual(double_rayleigh_moment(2), 4.0, places=14)

    def test_exact_sum_of_two_paths_is_normalized(self):
        total = integrate(lambda x: exact_sum_pdf(x, 2), 0.0, 60.0, QuadratureSpec(1e-10, 1e-8))
        self.assertAlmostEqual(total, 1.0, places=6)

    def test_exact_sum_limited_to_two_paths(self):
        with self.assertRaises(DomainError):
            exact_sum_pdf(1.0, 3)


class GammaSurrogateTests(SimpleTestCase):

    def test_constants(self):
        g = gamma_surrogate()
        self.assertAlmostEqual(g.k, 1.60995, places=5)
        self.assertAlmostEqual(g.theta, 0.975683, places=6)
        self.assertAlmostEqual(g.k * g.theta, math.pi / 2, places=14)

    def test_moments_against_double_rayleigh(self):
        g = gamma_surrogate()
        second = g.variance + g.mean ** 2
        self.assertAlmostEqual(second, double_rayleigh_moment(2), places=12)
        third = g.theta ** 3 * g.k * (g.k + 1) * (g.k + 2)
        relative_gap = 1.0 - third / double_rayleigh_moment(3)
        # moment matching stops at the variance; the third moment is 0.3% low
        self.assertTrue(0.002 < relative_gap < 0.005)

    def test_rounded_shapes(self):
        self.assertEqual(rounded_shape(1), 2)
        self.assertEqual(rounded_shape(2), 3)
        self.assertEqual(rounded_shape(8), 13)
        self.assertEqual(rounded_shape(16), 26)

    def test_sum_density(self):
        self.assertAlmostEqual(integrate(lambda x: sum_S_pdf(x, 3), 0.0, math.inf, Q), 1.0, places=8)
        g = gamma_surrogate()
        shape = 2 * g.k
        expected = math.exp((shape - 1) * math.log(math.pi) - math.pi / g.theta
                            - shape * math.log(g.theta) - ln_gamma(shape))
        self.assertAlmostEqual(sum_S_pdf(math.pi, 2), expected, places=14)

    def test_sum_density_mode(self):
        g = gamma_surrogate()
        mode = (4 * g.k - 1) * g.theta
        self.assertGreater(sum_S_pdf(mode, 4), sum_S_pdf(mode - 0.01, 4))
        self.assertGreater(sum_S_pdf(mode, 4), sum_S_pdf(mode + 0.01, 4))


class PhaseComponentTests(SimpleTestCase):

    def test_cos_phase_density(self):
        self.assertAlmostEqual(cos_phase_pdf(0.0), 2 / math.pi)
        self.assertEqual(cos_phase_pdf(1.5), 0.0)
        self.assertAlmostEqual(integrate(cos_phase_pdf, 0.0, 1.0, Q), 1.0, places=8)

    def test_component_densities(self):
        self.assertEqual(xn_pdf(0.0), 1.0)
        self.assertEqual(yn_pdf(0.0), 0.5)
        self.assertEqual(yn_pdf(-1.7), yn_pdf(1.7))

    def test_product_law_reproduces_exponential(self):
        for z in (0.1, 1.0, 3.0):
            self.assertAlmostEqual(xn_pdf_convolution(z, Q), math.exp(-z), delta=1e-6)

    def test_single_element_degenerates_exactly(self):
        for v in (0.0, 0.3, 2.0, 7.5):
            self.assertEqual(x_pdf(v, 1), xn_pdf(v))
            self.assertEqual(y_pdf(v, 1), yn_pdf(v))
            self.assertEqual(y_pdf(-v, 1), yn_pdf(-v))

    def test_erlang_cdf(self):
        self.assertAlmostEqual(x_cdf(1.0, 1), 1 - math.exp(-1), places=14)
        self.assertEqual(x_cdf(0.0, 5), 0.0)
        self.assertAlmostEqual(x_cdf(2.0, 3), 1 - 5 * math.exp(-2), places=14)

    def test_erlang_density_normalized(self):
        self.assertAlmostEqual(integrate(lambda x: x_pdf(x, 4), 0.0, math.inf, Q), 1.0, places=8)

    def test_laplace_sum_values(self):
        self.assertAlmostEqual(y_pdf(0.0, 1), 0.5)
        self.assertAlmostEqual(y_pdf(1.0, 2), 0.5 * math.exp(-1), places=14)

    def test_laplace_sum_normalized(self):
        half = integrate(lambda y: y_pdf(y, 4), 0.0, math.inf, Q)
        self.assertAlmostEqual(2 * half, 1.0, places=8)

    def test_laplace_sum_even_and_stable(self):
        for n in (2, 5, 16, 32, 64):
            for y in (0.0, 0.4, 3.0, 25.0):
                value = y_pdf(y, n)
                self.assertTrue(math.isfinite(value) and value >= 0)
                self.assertEqual(value, y_pdf(-y, n))

    def test_laplace_sum_against_sampling(self):
        rng = np.random.Generator(np.random.Philox(20240601))
        samples = rng.laplace(size=(400_000, 2)).sum(axis=1)
        hits = np.count_nonzero((samples > 0.9) & (samples < 1.1))
        p_window = integrate(lambda y: y_pdf(y, 2), 0.9, 1.1, Q)
        std_err = math.sqrt(p_window * (1 - p_window) / samples.size)
        self.assertLess(abs(hits / samples.size - p_window), 5 * std_err)

    def test_squared_component_density(self):
        for n in (1, 3):
            total = integrate(lambda u: y2_pdf_substituted(u, n), 0.0, math.inf, Q)
            self.assertAlmostEqual(total, 1.0, places=8)
        u = 0.7
        self.assertAlmostEqual(y2_pdf(u * u, 3) * 2 * u, y2_pdf_substituted(u, 3), places=14)
        self.assertEqual(y2_pdf(-1.0, 2), 0.0)


class RayleighTests(SimpleTestCase):

    def test_median_and_origin(self):
        sigma = 1.7
        self.assertAlmostEqual(rayleigh_cdf(sigma * math.sqrt(2 * math.log(2)), sigma), 0.5, places=14)
        self.assertEqual(rayleigh_cdf(0.0, sigma), 0.0)

    def test_mean_and_normalization(self):
        sigma = 0.8
        self.assertAlmostEqual(integrate(lambda r: rayleigh_pdf(r, sigma), 0.0, math.inf, Q), 1.0, places=8)
        mean = integrate(lambda r: r * rayleigh_pdf(r, sigma), 0.0, math.inf, Q)
        self.assertAlmostEqual(mean, sigma * math.sqrt(math.pi / 2), places=8)

    def test_domain(self):
        with self.assertRaises(DomainError):
            rayleigh_pdf(1.0, 0.0)
