import math
from fractions import Fraction

from django.test import SimpleTestCase

from channel.geometry import SystemConfig
from core.exceptions import DomainError, InsufficientPointsError
from core.numerics import QuadratureSpec
from fading.distributions import double_rayleigh_pdf, exact_sum_pdf, rounded_shape
from outage.curves import CurvePoint, OutageCurve
from outage.engines import CdfMode, cdf_G2, cdf_H, outage

from .diversity import DiversityReport, diversity_order, diversity_report, estimate_slope
from .leading import (
    cdf_G2_leading,
    cdf_H_leading,
    cdf_H_leading_quadrature,
    f_S_leading,
    f_xr2_leading,
    f_y2_leading,
)

TIGHT = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-10, max_subdivisions=500)

# nested quadratures
NESTED = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-8, max_subdivisions=500)

# ln 2 - Euler's constant: x K0(x) = x (ln(1/x) + K0_OFFSET) + O(x^3 ln x)
K0_OFFSET = math.log(2.0) - 0.5772156649015329


def grid(start, stop, step):
    return tuple(float(g) for g in range(start, stop + 1, step))


def synthetic_curve(p_of_gamma, grid_db, method='synthetic'):
    return OutageCurve(
        method=method,
        n_elements=1,
        sigma_d=1.0,
        gamma_th_db=0.0,
        points=tuple(CurvePoint(gamma_t_db=g, p_out=p_of_gamma(10.0 ** (g / 10.0))) for g in grid_db),
    )


# ============================================================================
# LEADING DENSITIES AND CDFS
# ============================================================================

class PerfectLeadingOrderTests(SimpleTestCase):

    def test_single_path_density(self):
        self.assertAlmostEqual(f_S_leading(0.1, 1), 0.1 * math.log(10.0), places=14)

    def test_single_path_density_against_bessel_form(self):
        x = 1e-4
        ratio = double_rayleigh_pdf(x) / f_S_leading(x, 1)
        self.assertAlmostEqual(ratio, 1.0 + K0_OFFSET / math.log(1.0 / x), delta=1e-6)

    def test_two_path_density_approaches_leading_term(self):
        ratios = [exact_sum_pdf(x, 2, TIGHT) / f_S_leading(x, 2) for x in (1e-3, 1e-6)]
        self.assertGreater(ratios[0], 1.0)
        self.assertLess(ratios[0], 1.5)
        self.assertLess(abs(ratios[1] - 1.0), abs(ratios[0] - 1.0))

    def test_cdf_example_and_scale(self):
        expected = 1e-4 * math.log(10.0) / 24.0
        self.assertAlmostEqual(cdf_H_leading(0.1, 1, 1.0) / expected, 1.0, places=12)
        self.assertAlmostEqual(cdf_H_leading(0.1, 1, 2.0) / expected, 0.25, places=12)

    def test_denominator_is_a_factorial(self):
        t = 0.05
        for n in (1, 2, 3, 5):
            scaled = cdf_H_leading(t, n, 1.0) * math.factorial(2 * n + 2)
            self.assertAlmostEqual(scaled / (t ** (2 * n + 2) * math.log(1.0 / t) ** n), 1.0, places=10)

    def test_leading_density_quadrature_log_correction(self):
        # one path: the ratio is 1 + 13 / (12 ln(1/t)) exactly
        for t in (1e-2, 1e-4):
            ratio = cdf_H_leading_quadrature(t, 1, 1.0, TIGHT) / cdf_H_leading(t, 1, 1.0)
            self.assertAlmostEqual(ratio, 1.0 + 13.0 / (12.0 * math.log(1.0 / t)), delta=1e-7)

    def test_leading_density_quadrature_converges(self):
        ratios = [cdf_H_leading_quadrature(t, 3, 1.0, TIGHT) / cdf_H_leading(t, 3, 1.0) for t in (1e-2, 1e-4)]
        self.assertTrue(all(r > 1.0 for r in ratios))
        self.assertLess(ratios[1], ratios[0])

    def test_single_path_against_exact_engine(self):
        for t in (1e-2, 1e-4):
            exact = cdf_H(t, 1, 1.0, TIGHT, mode=CdfMode.EXACT_QUADRATURE)
            ratio = exact / cdf_H_leading(t, 1, 1.0)
            expected = 1.0 + (13.0 / 12.0 + K0_OFFSET) / math.log(1.0 / t)
            self.assertAlmostEqual(ratio / expected, 1.0, delta=1e-3)

    def test_two_paths_against_exact_engine(self):
        ratios = [
            cdf_H(t, 2, 1.0, NESTED, mode=CdfMode.EXACT_QUADRATURE) / cdf_H_leading(t, 2, 1.0)
            for t in (1e-3, 1e-5)
        ]
        self.assertTrue(all(1.0 < r < 2.0 for r in ratios))
        self.assertLess(ratios[1], ratios[0])

    def test_domain(self):
        with self.assertRaises(DomainError):
            cdf_H_leading(1.0, 2, 1.0)
        with self.assertRaises(DomainError):
            cdf_H_leading(0.1, 0, 1.0)
        with self.assertRaises(DomainError):
            f_S_leading(0.0, 1)


class OneBitLeadingOrderTests(SimpleTestCase):

    def test_cdf_example(self):
        expected = 1e-4 * 0.75 * math.pi / 24.0
        self.assertAlmostEqual(cdf_G2_leading(0.01, 1, 1.0) / expected, 1.0, places=12)

    def test_power_law(self):
        for n in (1, 2, 5):
            ratio = cdf_G2_leading(1e-3, n, 1.5) / cdf_G2_leading(1e-2, n, 1.5)
            self.assertAlmostEqual(math.log10(ratio), -(n + 3) / 2.0, places=10)

    def test_component_densities(self):
        self.assertAlmostEqual(f_xr2_leading(0.04, 2, 1.0), 0.04 / 12.0, places=14)
        self.assertEqual(f_xr2_leading(-1.0, 2, 1.0), 0.0)
        self.assertAlmostEqual(f_y2_leading(0.25, 1), 1.0, places=12)
        with self.assertRaises(DomainError):
            f_y2_leading(0.0, 1)

    def test_gap_to_analytic_curve_closes(self):
        for n in (1, 2):
            gaps = [abs(cdf_G2(t, n, 1.0, NESTED) / cdf_G2_leading(t, n, 1.0) - 1.0) for t in (1e-2, 1e-4)]
            self.assertLess(gaps[1], 0.05, msg=f"N={n}")
            self.assertLess(gaps[1], 0.35 * gaps[0], msg=f"N={n}")

    def test_two_element_gap_in_the_high_snr_region(self):
        self.assertLess(abs(cdf_G2(0.05, 2, 1.0, NESTED) / cdf_G2_leading(0.05, 2, 1.0) - 1.0), 0.2)


class AsymptoticCurveTests(SimpleTestCase):

    def test_points_outside_expansion_fail(self):
        cfg = SystemConfig(n_elements=2, sigma_d=1.0, gamma_t_grid_db=(-10.0, 10.0, 20.0))
        curve = outage('asymptotic_perfect', cfg)
        self.assertEqual(curve.method, 'asymptotic_perfect')
        self.assertTrue(curve.points[0].failed)
        self.assertIn('0 < t < 1', curve.points[0].error)
        self.assertGreater(curve.points[1].p_out, curve.points[2].p_out)

    def test_one_bit_curve_is_capped(self):
        cfg = SystemConfig(n_elements=1, sigma_d=0.01, gamma_t_grid_db=(-20.0, 30.0))
        curve = outage('asymptotic_one_bit', cfg)
        self.assertEqual(curve.points[0].p_out, 1.0)
        self.assertLess(curve.points[1].p_out, 1.0)


# ============================================================================
# DIVERSITY
# ============================================================================

class DiversityOrderTests(SimpleTestCase):

    def test_orders(self):
        self.assertEqual(diversity_order('perfect', 4), Fraction(5))
        self.assertEqual(diversity_order('one_bit', 4), Fraction(7, 2))
        self.assertEqual(diversity_order('one_bit', 3), 3)

    def test_one_bit_loss_grows_with_elements(self):
        for n in range(1, 12):
            loss = diversity_order('perfect', n) - diversity_order('one_bit', n)
            self.assertEqual(loss, Fraction(n - 1, 2))

    def test_domain(self):
        with self.assertRaises(DomainError):
            diversity_order('perfect', 0)
        with self.assertRaises(ValueError):
            diversity_order('two_bit', 2)

    def test_report_checks_its_order(self):
        with self.assertRaises(DomainError):
            DiversityReport(mode='perfect', n_elements=2, theoretical_order=Fraction(5, 2),
                            fitted_slope=2.5, fit_range_db=(0.0, 10.0))


class SlopeFitTests(SimpleTestCase):

    def test_power_law(self):
        curve = synthetic_curve(lambda g: 1e-2 * g ** -3, grid(0, 40, 10))
        self.assertAlmostEqual(estimate_slope(curve), 3.0, places=10)

    def test_log_corrected_power_law_approaches_order_from_below(self):
        curve = synthetic_curve(lambda g: 1e-3 * g ** -3 * math.log(g) ** 2, grid(10, 100, 5))
        low = estimate_slope(curve, fit_range_db=(10.0, 30.0))
        high = estimate_slope(curve, fit_range_db=(80.0, 100.0))
        self.assertLess(low, high)
        self.assertLess(high, 3.0)

    def test_probability_window(self):
        curve = synthetic_curve(lambda g: min(1.0, 10.0 * g ** -2), grid(0, 60, 5))
        self.assertAlmostEqual(estimate_slope(curve, p_range=(1e-6, 1e-2)), 2.0, places=10)

    def test_insufficient_points(self):
        curve = synthetic_curve(lambda g: g ** -2, grid(0, 20, 10))
        with self.assertRaises(InsufficientPointsError):
            estimate_slope(curve, fit_range_db=(15.0, 25.0))
        with self.assertRaises(InsufficientPointsError):
            estimate_slope(synthetic_curve(lambda g: 0.0, grid(0, 20, 10)))


class DiversityReportTests(SimpleTestCase):

    def test_leading_one_bit_is_an_exact_power_law(self):
        cfg = SystemConfig(n_elements=3, sigma_d=1.0, gamma_t_grid_db=grid(10, 40, 5))
        report = diversity_report('one_bit', cfg, engine='asymptotic')
        self.assertEqual(report.theoretical_order, 3)
        self.assertEqual(report.method, 'asymptotic_one_bit')
        self.assertEqual(report.n_points, 7)
        self.assertEqual(report.fit_range_db, (10.0, 40.0))
        self.assertLess(report.relative_error, 1e-9)

    def test_perfect_single_element(self):
        cfg = SystemConfig(n_elements=1, sigma_d=1.0, gamma_t_grid_db=grid(0, 60, 2))
        report = diversity_report('perfect', cfg, p_range=(1e-6, 1e-4))
        self.assertGreaterEqual(report.n_points, 3)
        self.assertLess(report.relative_error, 0.15)

    def test_perfect_two_elements_follow_rounded_shape(self):
        # the closed form's rounded gamma shape (3 instead of 4) sets the slope near 2.5
        cfg = SystemConfig(n_elements=2, sigma_d=1.0, gamma_t_grid_db=grid(0, 40, 1))
        report = diversity_report('perfect', cfg, p_range=(1e-6, 1e-4), workers=4)
        self.assertAlmostEqual(report.fitted_slope, 2.5, delta=0.15)
        self.assertLess(report.fitted_slope, 0.9 * float(report.theoretical_order))

    def test_perfect_more_elements_follow_rounded_shape(self):
        # F_H ~ t^(K + 2) for the Erlang(K) + Rayleigh closed form
        cfg = SystemConfig(n_elements=4, sigma_d=1.0, gamma_t_grid_db=grid(-20, 40, 1))
        report = diversity_report('perfect', cfg, p_range=(1e-6, 1e-4), workers=4)
        expected = (rounded_shape(4) + 2) / 2
        self.assertLess(abs(report.fitted_slope - expected), 0.15 * expected)
        self.assertLess(report.fitted_slope, float(report.theoretical_order))

    def test_one_bit_analytic(self):
        for n in (1, 2, 4):
            cfg = SystemConfig(n_elements=n, sigma_d=1.0, gamma_t_grid_db=grid(-10, 40, 1))
            report = diversity_report('one_bit', cfg, p_range=(1e-6, 1e-4), workers=4)
            self.assertLess(report.relative_error, 0.15, msg=f'N={n}')

    def test_unknown_engine(self):
        cfg = SystemConfig(n_elements=1, sigma_d=1.0, gamma_t_grid_db=grid(0, 20, 10))
        with self.assertRaises(DomainError):
            diversity_report('perfect', cfg, engine='exact')
