import math

from django.test import SimpleTestCase
from scipy import integrate, special

from core.exceptions import DomainError
from specfun.functions import (
    AccuracyBudget,
    bessel_k0,
    bessel_k1,
    binomial,
    ln_gamma,
    log_bessel_k0,
    log_upper_incomplete_gamma,
    lower_incomplete_gamma,
    regularized_lower_gamma,
    regularized_upper_gamma,
    upper_incomplete_gamma,
)

EULER_GAMMA = 0.5772156649015329


class LnGammaTests(SimpleTestCase):

    def test_known_values(self):
        self.assertEqual(ln_gamma(1), 0.0)
        self.assertAlmostEqual(ln_gamma(5), math.log(24), places=13)
        self.assertAlmostEqual(ln_gamma(0.5), 0.5 * math.log(math.pi), places=13)

    def test_domain(self):
        for bad in (0, -1.5):
            with self.assertRaises(DomainError):
                ln_gamma(bad)


class IncompleteGammaTests(SimpleTestCase):

    def test_exponential_case(self):
        self.assertAlmostEqual(upper_incomplete_gamma(1, 2), math.exp(-2), places=14)

    def test_value_at_zero_is_complete_gamma(self):
        for a in (0.5, 2.5, 7.0):
            self.assertAlmostEqual(upper_incomplete_gamma(a, 0.0) / math.gamma(a), 1.0, places=13)

    def test_against_quadrature(self):
        reference, _ = integrate.quad(lambda t: t ** 1.5 * math.exp(-t), 1.3, math.inf,
                                      epsabs=1e-14, epsrel=1e-13)
        self.assertLess(abs(upper_incomplete_gamma(2.5, 1.3) / reference - 1.0), 1e-10)

    def test_recurrence(self):
        for a in (0.5, 1.5, 3.0, 10.5):
            for x in (0.1, 1.0, 2.5, 8.0, 30.0):
                lhs = upper_incomplete_gamma(a + 1, x)
                rhs = a * upper_incomplete_gamma(a, x) + x ** a * math.exp(-x)
                self.assertLess(abs(lhs / rhs - 1.0), 1e-9, msg=f"a={a}, x={x}")

    def test_regularized_forms_match_scipy(self):
        for a in (0.5, 1.0, 4.0, 12.5, 40.0):
            for x in (1e-3, 0.7, 5.0, 13.0, 60.0):
                self.assertAlmostEqual(regularized_upper_gamma(a, x), special.gammaincc(a, x), places=12)
                self.assertAlmostEqual(regularized_lower_gamma(a, x), special.gammainc(a, x), places=12)

    def test_lower_is_relatively_accurate_when_tiny(self):
        value = regularized_lower_gamma(16, 0.05)
        self.assertLess(abs(value / special.gammainc(16, 0.05) - 1.0), 1e-10)

    def test_lower_plus_upper_is_complete(self):
        a, x = 3.5, 2.0
        total = lower_incomplete_gamma(a, x) + upper_incomplete_gamma(a, x)
        self.assertAlmostEqual(total / math.gamma(a), 1.0, places=13)

    def test_monotone_in_x(self):
        values = [upper_incomplete_gamma(2.5, 0.25 * i) for i in range(60)]
        self.assertTrue(all(b <= a for a, b in zip(values, values[1:])))

    def test_log_form_survives_underflow(self):
        self.assertEqual(upper_incomplete_gamma(1.5, 800.0), 0.0)
        expected = -800.0 + 0.5 * math.log(800.0)
        self.assertAlmostEqual(log_upper_incomplete_gamma(1.5, 800.0), expected, places=2)

    def test_budget_is_validated(self):
        from django.core.exceptions import ValidationError
        with self.assertRaises(ValidationError):
            AccuracyBudget(max_iter=0)

    def test_domain(self):
        with self.assertRaises(DomainError):
            upper_incomplete_gamma(0.0, 1.0)
        with self.assertRaises(DomainError):
            upper_incomplete_gamma(1.0, -0.5)

    def test_pure(self):
        self.assertEqual(upper_incomplete_gamma(3.3, 4.4), upper_incomplete_gamma(3.3, 4.4))


class BesselTests(SimpleTestCase):

    def test_k0_at_one(self):
        self.assertAlmostEqual(bessel_k0(1.0), 0.42102443824070834, places=14)

    def test_k0_small_argument(self):
        x = 1e-6
        approx = -math.log(x / 2) - EULER_GAMMA
        self.assertLess(abs(bessel_k0(x) / approx - 1.0), 1e-6)

    def test_k0_large_argument(self):
        x = 10.0
        total, term = 1.0, 1.0
        for k in range(1, 11):
            term *= -((2 * k - 1) ** 2) / (k * 8 * x)
            total += term
        approx = math.exp(-x) * math.sqrt(math.pi / (2 * x)) * total
        self.assertLess(abs(bessel_k0(x) / approx - 1.0), 1e-6)

    def test_derivative_identity(self):
        h = 1e-5
        for x in (0.5, 1.0, 5.0):
            derivative = (bessel_k0(x + h) - bessel_k0(x - h)) / (2 * h)
            self.assertLess(abs(derivative / -bessel_k1(x) - 1.0), 1e-6)

    def test_underflow_is_graceful(self):
        self.assertEqual(bessel_k0(800.0), 0.0)
        self.assertTrue(math.isfinite(log_bessel_k0(800.0)))
        self.assertAlmostEqual(log_bessel_k0(3.0), math.log(bessel_k0(3.0)), places=12)

    def test_domain(self):
        with self.assertRaises(DomainError):
            bessel_k0(0.0)
        with self.assertRaises(DomainError):
            bessel_k1(-1.0)


class BinomialTests(SimpleTestCase):

    def test_small_values(self):
        self.assertEqual(binomial(5, 2), 10)
        self.assertEqual(binomial(17, 0), 1)
        self.assertEqual(binomial(40, 20), 137846528820)

    def test_large_n_uses_log_gamma(self):
        self.assertLess(abs(binomial(70, 35) / math.comb(70, 35) - 1.0), 1e-10)

    def test_domain(self):
        with self.assertRaises(DomainError):
            binomial(3, 4)
        with self.assertRaises(DomainError):
            binomial(-1, 0)
