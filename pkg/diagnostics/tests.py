import math

from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from core.exceptions import DomainError
from core.numerics import QuadratureSpec, integrate
from diagnostics.entropy import (
    ENTROPY_X,
    ENTROPY_Y,
    KlSpec,
    differential_entropy,
    joint_pdf_xy,
    kl_double_rayleigh_vs_gamma,
    kl_student_t_vs_normal,
    marginal_x_pdf,
    mutual_information_xy,
    phase_correlation,
    xy_covariance,
)
from fading.distributions import gamma_surrogate, rounded_shape, xn_pdf, yn_pdf

Q = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-10, max_subdivisions=400)


class KlSpecTests(SimpleTestCase):

    def test_shape(self):
        spec = KlSpec(4, 0.5)
        self.assertAlmostEqual(spec.shape, gamma_surrogate().k + 0.125, places=14)
        self.assertEqual(spec.law.theta, gamma_surrogate().theta)

    def test_validation(self):
        with self.assertRaises(ValidationError):
            KlSpec(0, 0.0)
        with self.assertRaises(ValidationError):
            KlSpec(4, 0.6)

    def test_from_rounding(self):
        for n in (1, 2, 5, 8, 16):
            spec = KlSpec.from_rounding(n)
            self.assertAlmostEqual(n * spec.shape, rounded_shape(n), places=12)


class RelativeEntropyTests(SimpleTestCase):

    def test_base_value(self):
        base = kl_double_rayleigh_vs_gamma(KlSpec(1, 0.0), Q)
        self.assertGreater(base, 0.0)
        self.assertLess(base, 0.05)
        self.assertAlmostEqual(kl_double_rayleigh_vs_gamma(KlSpec(16, 0.0), Q), base, places=12)

    def test_nonnegative(self):
        for n in (1, 2, 4, 8, 16):
            for eps in (-0.5, -0.1, 0.1, 0.3, 0.5):
                with self.subTest(n=n, eps=eps):
                    self.assertGreaterEqual(kl_double_rayleigh_vs_gamma(KlSpec(n, eps), Q), -1e-9)

    def test_decreasing_in_n(self):
        for eps in (0.1, 0.3, 0.5):
            values = [kl_double_rayleigh_vs_gamma(KlSpec(n, eps), Q) for n in (1, 2, 4, 8)]
            self.assertEqual(values, sorted(values, reverse=True))
        values = [kl_double_rayleigh_vs_gamma(KlSpec(n, 0.5), Q) for n in (4, 8, 16)]
        self.assertEqual(values, sorted(values, reverse=True))

    def test_below_student_t_reference(self):
        for n in (16, 24, 32):
            reference = kl_student_t_vs_normal(n, Q).value_nats
            for eps in (0.1, 0.3, 0.5):
                with self.subTest(n=n, eps=eps):
                    self.assertLess(kl_double_rayleigh_vs_gamma(KlSpec(n, eps), Q), reference)


class StudentTTests(SimpleTestCase):

    def test_decreasing(self):
        values = [kl_student_t_vs_normal(n, Q).value_nats for n in (3, 4, 8, 16, 32, 64)]
        self.assertEqual(values, sorted(values, reverse=True))

    def test_large_dof(self):
        self.assertLess(kl_student_t_vs_normal(200, Q).value_nats, 1e-4)

    def test_heavy_tails_saturate(self):
        for dof in (1, 2):
            result = kl_student_t_vs_normal(dof)
            self.assertTrue(result.saturated)
            self.assertEqual(result.value_nats, math.inf)

    def test_domain(self):
        with self.assertRaises(DomainError):
            kl_student_t_vs_normal(0.5)


class JointLawTests(SimpleTestCase):

    def test_normalized(self):
        # polar: the angle spans pi
        total = integrate(lambda r: r * joint_pdf_xy(r, 0.0) * math.pi if r > 0 else 0.0, 0.0, 700.0, Q)
        self.assertAlmostEqual(total, 1.0, places=8)

    def test_marginal_is_exponential(self):
        for x in (0.5, 1.0, 2.0):
            self.assertAlmostEqual(marginal_x_pdf(x, Q), math.exp(-x), delta=1e-5)

    def test_symmetry_and_support(self):
        self.assertEqual(joint_pdf_xy(0.7, 1.3), joint_pdf_xy(0.7, -1.3))
        self.assertEqual(joint_pdf_xy(-0.1, 0.5), 0.0)
        with self.assertRaises(DomainError):
            joint_pdf_xy(0.0, 0.0)

    def test_uncorrelated(self):
        self.assertAlmostEqual(phase_correlation(Q), 0.0, places=12)
        self.assertAlmostEqual(xy_covariance(Q), 0.0, places=9)


class MutualInformationTests(SimpleTestCase):

    def test_marginal_entropies(self):
        self.assertAlmostEqual(differential_entropy(xn_pdf, 0.0, math.inf, Q), ENTROPY_X, places=8)
        laplace = 2.0 * differential_entropy(yn_pdf, 0.0, math.inf, Q)
        self.assertAlmostEqual(laplace, ENTROPY_Y, places=8)
        self.assertAlmostEqual(ENTROPY_Y, 1.69315, places=5)

    def test_value(self):
        value = mutual_information_xy(Q)
        self.assertGreater(value, 0.0)
        self.assertAlmostEqual(value, 0.04441, delta=5e-4)
