import math

from django.conf import settings
from django.core import checks
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase, override_settings

from core.exceptions import NonFiniteResultError, QuadratureError
from core.numerics import QuadratureSpec, clamp_probability, integrate


class QuadratureSpecTests(SimpleTestCase):

    def test_rejects_nonpositive_tolerances(self):
        with self.assertRaises(ValidationError):
            QuadratureSpec(abs_tol=0.0)
        with self.assertRaises(ValidationError):
            QuadratureSpec(rel_tol=-1e-8)
        with self.assertRaises(ValidationError):
            QuadratureSpec(max_subdivisions=0)

    @override_settings(IRSLAB_QUADRATURE={'ABS_TOL': 1e-12, 'REL_TOL': 1e-9, 'MAX_SUBDIVISIONS': 50})
    def test_default_reads_settings(self):
        q = QuadratureSpec.default()
        self.assertEqual(q.abs_tol, 1e-12)
        self.assertEqual(q.rel_tol, 1e-9)
        self.assertEqual(q.max_subdivisions, 50)

    def test_tolerance_for_uses_larger_target(self):
        q = QuadratureSpec(abs_tol=1e-10, rel_tol=1e-8)
        self.assertEqual(q.tolerance_for(1e-6), 1e-10)
        self.assertAlmostEqual(q.tolerance_for(10.0), 1e-7)


class IntegrateTests(SimpleTestCase):

    def test_exponential_on_half_line(self):
        self.assertAlmostEqual(integrate(lambda x: math.exp(-x), 0.0, math.inf), 1.0, places=10)

    def test_empty_interval(self):
        self.assertEqual(integrate(math.sin, 2.0, 2.0), 0.0)

    def test_breakpoints_outside_interval_are_ignored(self):
        value = integrate(lambda x: x, 0.0, 1.0, points=[-1.0, 0.5, 3.0])
        self.assertAlmostEqual(value, 0.5, places=12)

    def test_divergent_integral_raises(self):
        with self.assertRaises(QuadratureError) as ctx:
            integrate(lambda x: 1.0 / x, 0.0, 1.0)
        self.assertIsNotNone(ctx.exception.error_estimate)


class ClampProbabilityTests(SimpleTestCase):

    def test_values_inside_pass_through(self):
        self.assertEqual(clamp_probability(0.25), 0.25)

    def test_small_excursion_clamped_silently(self):
        self.assertEqual(clamp_probability(-1e-9), 0.0)
        self.assertEqual(clamp_probability(1.0 + 1e-9), 1.0)

    def test_large_excursion_logged(self):
        with self.assertLogs('core.numerics', level='WARNING'):
            self.assertEqual(clamp_probability(-0.01, 'cdf'), 0.0)

    def test_nan_rejected(self):
        with self.assertRaises(NonFiniteResultError):
            clamp_probability(float('nan'))


class SettingsTests(SimpleTestCase):

    def test_admin_runs_on_the_trimmed_stack(self):
        errors = [m for m in checks.run_checks() if m.level >= checks.ERROR]
        self.assertEqual(errors, [])

    def test_no_web_serving_settings(self):
        self.assertNotIn('django.contrib.staticfiles', settings.INSTALLED_APPS)
        self.assertNotIn('django.middleware.csrf.CsrfViewMiddleware', settings.MIDDLEWARE)
        self.assertIsNone(settings.WSGI_APPLICATION)
