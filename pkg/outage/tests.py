import math
from unittest import mock

import numpy as np
from django.test import SimpleTestCase
from scipy import optimize, stats

from channel.geometry import SystemConfig
from core.exceptions import DomainError
from core.numerics import QuadratureSpec
from fading.distributions import gamma_surrogate
from montecarlo.sampling import sample_G2, sample_H
from montecarlo.streams import substream
from outage.curves import CurvePoint, OutageCurve, crossing_snr_db, snr_gap_db
from outage.engines import (
    CdfMode,
    OutageMethod,
    cdf_G2,
    cdf_H,
    clt_moments,
    clt_outage_perfect,
    outage,
    outage_at,
    rounding_discrepancy,
    snr_for_outage,
)
from outage.lemmas import (
    Lemma2Mode,
    Prop1Terms,
    erlang_rayleigh_cdf,
    erlang_rayleigh_terms,
    lemma1_cdf,
    lemma2_integral,
)

TIGHT = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-12, max_subdivisions=500)


def mc_fraction(values, t):
    """Empirical CDF at t and its binomial standard error."""
    p = float(np.mean(values <= t))
    return p, math.sqrt(max(p * (1 - p), 1e-12) / len(values))


class Lemma1Tests(SimpleTestCase):

    def test_zero_argument(self):
        self.assertEqual(lemma1_cdf(lambda s: 0.0, lambda s: 1.0, 1.0, 0.0), 0.0)

    def test_point_mass_at_zero_is_pure_rayleigh(self):
        for z in (0.3, 1.0, 2.5):
            value = lemma1_cdf(lambda s: 0.0, lambda s: 1.0, 1.5, z)
            self.assertAlmostEqual(value, -math.expm1(-z * z / (2 * 1.5 ** 2)), places=12)

    def test_gamma_plus_rayleigh_against_sampling(self):
        rng = substream(2024, 0, 0)
        draws = rng.gamma(2.0, 1.0, 1_000_000) + np.sqrt(-2.0 * np.log1p(-rng.random(1_000_000)))
        p_mc, se = mc_fraction(draws, 3.0)
        value = lemma1_cdf(lambda s: s * math.exp(-s), lambda s: 0.0, 1.0, 3.0)
        self.assertLess(abs(value - p_mc), 4 * se)

    def test_rejects_bad_scale(self):
        with self.assertRaises(DomainError):
            lemma1_cdf(lambda s: 0.0, lambda s: 1.0, 0.0, 1.0)


class Lemma2Tests(SimpleTestCase):

    def test_gaussian_case_matches_erf(self):
        b, t = 0.7, 1.3
        expected = math.sqrt(math.pi / (4 * b)) * math.erf(math.sqrt(b) * t)
        self.assertAlmostEqual(lemma2_integral(0, 0.0, b, t), expected, places=13)
        self.assertAlmostEqual(lemma2_integral(0, 0.0, b, t, Lemma2Mode.QUADRATURE, TIGHT), expected, places=12)

    def test_vanishing_interval(self):
        self.assertEqual(lemma2_integral(2, 1.0, 1.0, 0.0), 0.0)
        self.assertLess(lemma2_integral(2, 1.0, 1.0, 1e-4), 1e-12)

    def test_reference_case_positive_shift(self):
        # m = 1 > 0 here
        closed = lemma2_integral(3, 1.2, 0.4, 2.5)
        quad = lemma2_integral(3, 1.2, 0.4, 2.5, Lemma2Mode.QUADRATURE, TIGHT)
        self.assertLess(abs(closed - quad), 1e-9 * abs(quad))

    def test_printed_form_only_fails_for_positive_shift(self):
        quad = lemma2_integral(3, 1.2, 0.4, 2.5, Lemma2Mode.QUADRATURE, TIGHT)
        printed = lemma2_integral(3, 1.2, 0.4, 2.5, as_printed=True)
        self.assertGreater(abs(printed - quad), 1e-3 * abs(quad))

        # m = -0.5: both forms coincide
        quad = lemma2_integral(3, 1.2, 0.4, 1.0, Lemma2Mode.QUADRATURE, TIGHT)
        printed = lemma2_integral(3, 1.2, 0.4, 1.0, as_printed=True)
        self.assertLess(abs(printed - quad), 1e-9 * abs(quad))

    def test_negative_rate_both_limits_below_zero(self):
        cases = [(0, -1.0, 1.0, 1.0), (1, -1.0, 1.0, 1.0), (2, -0.5, 0.4, 2.5),
                 (3, -0.5, 0.4, 2.5), (4, -2.0, 0.7, 1.5), (5, -0.1, 2.0, 3.0)]
        for I, a, b, t in cases:
            with self.subTest(I=I, a=a, b=b, t=t):
                closed = lemma2_integral(I, a, b, t)
                quad = lemma2_integral(I, a, b, t, Lemma2Mode.QUADRATURE, TIGHT)
                self.assertLess(abs(closed - quad), 1e-9 * abs(quad))

    def test_negative_rate_small_case(self):
        self.assertAlmostEqual(lemma2_integral(0, -1.0, 1.0, 1.0), 1.3784, delta=5e-4)
        self.assertAlmostEqual(lemma2_integral(1, -1.0, 1.0, 1.0), 0.8924, delta=5e-4)

    def test_surrogate_parameter_family(self):
        theta = gamma_surrogate().theta
        cases = [(0.5, 12, (0.2, 1.5, 4.0, 10.0)),
                 (1.0, 12, (0.5, 1.5, 4.0, 10.0)),
                 (3.0, 5, (2.0, 12.0))]
        for sigma, max_power, ts in cases:
            b = 1.0 / (2 * sigma ** 2)
            for I in range(max_power + 1):
                for t in ts:
                    with self.subTest(sigma=sigma, I=I, t=t):
                        closed = lemma2_integral(I, 1.0 / theta, b, t)
                        quad = lemma2_integral(I, 1.0 / theta, b, t, Lemma2Mode.QUADRATURE, TIGHT)
                        self.assertLess(abs(closed - quad), 1e-9 * abs(quad))

    def test_domain(self):
        with self.assertRaises(DomainError):
            lemma2_integral(-1, 1.0, 1.0, 1.0)
        with self.assertRaises(DomainError):
            lemma2_integral(1, 1.0, 0.0, 1.0)


class ErlangRayleighTests(SimpleTestCase):

    def test_terms_reassemble_the_cdf(self):
        theta = gamma_surrogate().theta
        terms = erlang_rayleigh_terms(3.0, 3, theta, 1.0)
        self.assertEqual(terms.rounded_shape, 3)
        self.assertEqual(len(terms.B), 3)
        self.assertAlmostEqual(terms.m, 3.0 - 1.0 / theta, places=14)
        self.assertAlmostEqual(terms.cdf(3.0), erlang_rayleigh_cdf(3.0, 3, theta, 1.0), places=10)

    def test_cdf_is_assembled_from_terms(self):
        theta = gamma_surrogate().theta
        with mock.patch('outage.lemmas.erlang_rayleigh_terms', wraps=erlang_rayleigh_terms) as assembled:
            value = erlang_rayleigh_cdf(3.0, 3, theta, 1.0)
        assembled.assert_called_once_with(3.0, 3, theta, 1.0)
        self.assertEqual(value, erlang_rayleigh_terms(3.0, 3, theta, 1.0).cdf(3.0))

    def test_products_match_prefactor_times_coefficients(self):
        theta = gamma_surrogate().theta
        terms = erlang_rayleigh_terms(4.0, 4, theta, 1.0)
        self.assertTrue(math.isfinite(terms.A))
        for product, coefficient, magnitude in zip(terms.AB, terms.B, terms.magnitudes):
            self.assertAlmostEqual(product, terms.A * coefficient, delta=1e-12 * magnitude)
        plain = Prop1Terms(rounded_shape=4, A=terms.A, m=terms.m, B=terms.B, scale=theta)
        self.assertAlmostEqual(plain.cdf(4.0), terms.cdf(4.0), places=12)


    def test_terms_validate_length(self):
        with self.assertRaises(DomainError):
            Prop1Terms(rounded_shape=3, A=1.0, m=0.5, B=(1.0, 2.0))

    def test_large_direct_link_falls_back_to_quadrature(self):
        with self.assertLogs('outage.lemmas', level='DEBUG') as logs:
            value = cdf_H(20.0, 16, 30.0)
        self.assertTrue(any('using quadrature' in line for line in logs.output))
        reference = cdf_H(20.0, 16, 30.0, mode=CdfMode.LEMMA1_QUADRATURE)
        self.assertAlmostEqual(value, reference, places=8)


class CdfHTests(SimpleTestCase):

    def test_limits(self):
        self.assertEqual(cdf_H(0.0, 2, 1.0), 0.0)
        self.assertEqual(cdf_H(math.inf, 2, 1.0), 1.0)
        self.assertGreater(cdf_H(200.0, 2, 1.0), 1 - 1e-12)

    def test_closed_form_matches_lemma1_quadrature(self):
        for n in (1, 2, 4, 8, 16):
            for sigma in (0.5, 1.0, 3.0):
                for t in (0.1, 1.0, 3.0, 10.0, 30.0):
                    with self.subTest(n=n, sigma=sigma, t=t):
                        closed = cdf_H(t, n, sigma)
                        quad = cdf_H(t, n, sigma, mode=CdfMode.LEMMA1_QUADRATURE)
                        self.assertLess(abs(closed - quad), 1e-6)

    def test_monotone(self):
        values = [cdf_H(t, 4, 1.0) for t in np.linspace(0.05, 25.0, 60)]
        self.assertTrue(all(b >= a - 1e-12 for a, b in zip(values, values[1:])))

    def test_shape_rounding_error(self):
        grid = np.linspace(0.5, 40.0, 40)
        # N k = 6.44 at N = 4 rounds furthest and costs about 0.07
        self.assertAlmostEqual(rounding_discrepancy(4, 1.0, grid), 0.07, delta=0.02)
        self.assertLess(rounding_discrepancy(5, 1.0, grid), 0.01)
        self.assertAlmostEqual(rounding_discrepancy(8, 1.0, grid), 0.013, delta=0.005)

    def test_against_sampling(self):
        rng = substream(7, 0, 0)
        p_mc, se = mc_fraction(sample_H(2, 1.0, rng, size=1_000_000), 3.0)
        exact = cdf_H(3.0, 2, 1.0, mode=CdfMode.EXACT_QUADRATURE)
        self.assertLess(abs(exact - p_mc), max(4 * se, 2e-3))
        unrounded = cdf_H(3.0, 2, 1.0, mode=CdfMode.LEMMA1_QUADRATURE, exact_shape=True)
        self.assertLess(abs(unrounded - p_mc), max(0.01, 5 * se))
        # Rounding 3.22 to 3 costs a few percent at N = 2
        self.assertLess(abs(cdf_H(3.0, 2, 1.0) - p_mc), 0.05)

    def test_exact_mode_limited_to_two_paths(self):
        with self.assertRaises(DomainError):
            cdf_H(1.0, 3, 1.0, mode=CdfMode.EXACT_QUADRATURE)


class CdfG2Tests(SimpleTestCase):

    def test_limits(self):
        self.assertEqual(cdf_G2(0.0, 2, 1.0), 0.0)
        self.assertEqual(cdf_G2(math.inf, 2, 1.0), 1.0)

    def test_monotone(self):
        values = [cdf_G2(t, 2, 1.0) for t in np.linspace(0.1, 30.0, 50)]
        self.assertTrue(all(b >= a - 1e-9 for a, b in zip(values, values[1:])))
        self.assertTrue(all(0.0 <= v <= 1.0 for v in values))

    def test_against_sampling(self):
        rng = substream(11, 0, 0)
        p_mc, se = mc_fraction(sample_G2(2, 1.0, rng, size=1_000_000), 4.0)
        analytic = cdf_G2(4.0, 2, 1.0)
        # X and Y share the element phases; treating them as independent
        # leaves about 0.018 at N = 2 (0.1065 against 0.1241)
        self.assertLess(abs(analytic - p_mc), max(0.02, 5 * se))

    def test_against_sampling_more_elements(self):
        for n, t in ((4, 8.0), (8, 16.0)):
            with self.subTest(n=n):
                rng = substream(11, n, 0)
                p_mc, se = mc_fraction(sample_G2(n, 1.0, rng, size=1_000_000), t)
                self.assertLess(abs(cdf_G2(t, n, 1.0) - p_mc), max(0.01, 5 * se))


class CltTests(SimpleTestCase):

    def test_moments(self):
        mean, _ = clt_moments(8, 1.0)
        self.assertAlmostEqual(mean, 4 * math.pi + math.sqrt(math.pi / 2), places=12)

    def test_median(self):
        mean, _ = clt_moments(4, 1.0)
        gamma_t_db = -20 * math.log10(mean)
        cfg = SystemConfig(n_elements=4, sigma_d=1.0, gamma_th_db=0.0)
        self.assertAlmostEqual(clt_outage_perfect(cfg, gamma_t_db), 0.5, places=10)

    def test_less_accurate_in_the_tail(self):
        t = optimize.brentq(lambda x: cdf_H(x, 8, 1.0) - 5e-3, 1.0, 15.0)
        hits = 0
        total = 0
        for chunk in range(8):
            rng = substream(99, 0, chunk)
            hits += int(np.count_nonzero(sample_H(8, 1.0, rng, size=500_000) < t))
            total += 500_000
        p_mc = hits / total
        mean, variance = clt_moments(8, 1.0)
        p_clt = float(stats.norm.cdf(t, mean, math.sqrt(variance)))
        self.assertGreater(abs(p_clt - p_mc), abs(cdf_H(t, 8, 1.0) - p_mc))


class OutageTests(SimpleTestCase):

    def setUp(self):
        self.grid = tuple(float(g) for g in range(0, 31, 5))

    def test_direct_link_only(self):
        cfg = SystemConfig(n_elements=0, sigma_d=1.0, gamma_th_db=0.0, gamma_t_grid_db=(10.0,))
        for method in OutageMethod:
            with self.subTest(method=method):
                p = outage(method, cfg).points[0].p_out
                self.assertAlmostEqual(p, -math.expm1(-0.05), places=12)
                self.assertAlmostEqual(p, 0.04877, places=5)

    def test_vanishing_threshold(self):
        cfg = SystemConfig(n_elements=2, sigma_d=1.0, gamma_th_db=-200.0, gamma_t_grid_db=self.grid)
        for method in (OutageMethod.PERFECT, OutageMethod.ONE_BIT):
            curve = outage(method, cfg)
            self.assertTrue(all(p < 1e-12 for p in curve.probabilities))

    def test_perfect_below_one_bit(self):
        cfg = SystemConfig(n_elements=2, sigma_d=1.0, gamma_t_grid_db=self.grid)
        perfect = outage(OutageMethod.PERFECT, cfg).probabilities
        one_bit = outage(OutageMethod.ONE_BIT, cfg).probabilities
        for a, b in zip(perfect, one_bit):
            self.assertLess(a, b)

    def test_nonincreasing_in_snr(self):
        cfg = SystemConfig(n_elements=4, sigma_d=1.0, gamma_t_grid_db=self.grid)
        for method in (OutageMethod.PERFECT, OutageMethod.ONE_BIT, OutageMethod.CLT_PERFECT):
            values = outage(method, cfg).probabilities
            self.assertTrue(all(b <= a + 1e-12 for a, b in zip(values, values[1:])))

    def test_worker_count_does_not_change_results(self):
        cfg = SystemConfig(n_elements=4, sigma_d=1.0, gamma_t_grid_db=self.grid)
        self.assertEqual(outage('one_bit', cfg, workers=1), outage('one_bit', cfg, workers=4))

    def test_failed_points_are_recorded(self):
        cfg = SystemConfig(n_elements=2, sigma_d=1.0, gamma_t_grid_db=(-10.0, 20.0))
        curve = outage(OutageMethod.ASYMPTOTIC_PERFECT, cfg)
        self.assertTrue(curve.points[0].failed)
        self.assertIn('0 < t < 1', curve.points[0].error)
        self.assertFalse(curve.points[1].failed)

    def test_unknown_method(self):
        cfg = SystemConfig(n_elements=2, sigma_d=1.0, gamma_t_grid_db=(0.0,))
        with self.assertRaises(DomainError):
            outage('two_bit', cfg)

    def test_snr_for_outage_inverts_the_curve(self):
        cfg = SystemConfig(n_elements=4, sigma_d=1.0)
        gamma_t_db = snr_for_outage(OutageMethod.PERFECT, cfg, 1e-3)
        self.assertAlmostEqual(math.log10(outage_at('perfect', cfg, gamma_t_db)), -3.0, places=5)

    def test_one_bit_penalty(self):
        cfg = SystemConfig(n_elements=16, sigma_d=1.0)
        bracket = (-40.0, 20.0)
        gap = (snr_for_outage('one_bit', cfg, 1e-2, bracket)
               - snr_for_outage('perfect', cfg, 1e-2, bracket))
        self.assertGreaterEqual(gap, 3.0)
        self.assertLessEqual(gap, 7.0)


class CurveTests(SimpleTestCase):

    def test_crossing_on_power_law(self):
        curve = OutageCurve('x', 2, 1.0, 0.0, points=[CurvePoint(float(g), 10 ** (-g / 10.0)) for g in range(0, 41, 10)])
        self.assertAlmostEqual(crossing_snr_db(curve, 1e-3), 30.0, places=12)
        self.assertAlmostEqual(crossing_snr_db(curve, 10 ** -2.5), 25.0, places=12)

    def test_gap(self):
        a = OutageCurve('a', 2, 1.0, 0.0, points=[CurvePoint(float(g), 10 ** (-g / 10.0)) for g in range(0, 41, 10)])
        b = OutageCurve('b', 2, 1.0, 0.0, points=[CurvePoint(float(g), 10 ** (-(g - 5) / 10.0)) for g in range(10, 51, 10)])
        self.assertAlmostEqual(snr_gap_db(a, b, 1e-2), 5.0, places=12)

    def test_no_crossing(self):
        curve = OutageCurve('x', 2, 1.0, 0.0, points=[CurvePoint(0.0, 0.5), CurvePoint(10.0, 0.1)])
        with self.assertRaises(DomainError):
            crossing_snr_db(curve, 1e-3)

    def test_grid_must_increase(self):
        with self.assertRaises(DomainError):
            OutageCurve('x', 2, 1.0, 0.0, points=[CurvePoint(10.0, 0.1), CurvePoint(0.0, 0.5)])
