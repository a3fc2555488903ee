import math

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase
from scipy import stats

from channel.geometry import PhaseMode, SystemConfig, gain_threshold
from montecarlo.sampling import mc_curve, mc_outage, sample_components, sample_G2, sample_H
from montecarlo.streams import CHUNK_SIZE, McConfig, McEstimate, chunk_sizes, substream
from outage.engines import CdfMode, cdf_H, rounding_discrepancy


class StreamTests(SimpleTestCase):

    def test_same_key_same_stream(self):
        a = substream(5, 3, 1).random(8)
        b = substream(5, 3, 1).random(8)
        np.testing.assert_array_equal(a, b)

    def test_keys_are_independent(self):
        base = substream(5, 3, 1).random(4)
        for other in (substream(6, 3, 1), substream(5, 4, 1), substream(5, 3, 2)):
            self.assertFalse(np.array_equal(base, other.random(4)))

    def test_chunking(self):
        self.assertEqual(chunk_sizes(10), [10])
        self.assertEqual(chunk_sizes(2 * CHUNK_SIZE + 3), [CHUNK_SIZE, CHUNK_SIZE, 3])
        self.assertEqual(sum(chunk_sizes(1_000_001)), 1_000_001)


class McConfigTests(SimpleTestCase):

    def test_validation(self):
        with self.assertRaises(ValidationError):
            McConfig(seed=-1, n_samples=10)
        with self.assertRaises(ValidationError):
            McConfig(seed=1, n_samples=0)
        with self.assertRaises(ValidationError):
            McConfig(seed=1, n_samples=10, n_streams=0)

    def test_samples_for_target(self):
        self.assertEqual(McConfig.samples_for_target(1e-3, 0.1), 99900)

    def test_estimate_from_counts(self):
        est = McEstimate.from_counts(25, 100, 7)
        self.assertEqual(est.p_hat, 0.25)
        self.assertAlmostEqual(est.std_err, math.sqrt(0.25 * 0.75 / 100), places=15)


class SamplingTests(SimpleTestCase):

    def test_direct_link_only_is_rayleigh(self):
        draws = sample_H(0, 1.5, substream(1, 0, 0), size=20000)
        self.assertGreater(stats.kstest(draws, 'rayleigh', args=(0, 1.5)).pvalue, 1e-3)

    def test_mean_of_sum(self):
        draws = np.concatenate([sample_H(8, 0.0, substream(2, 0, c), size=100_000) for c in range(4)])
        se = draws.std() / math.sqrt(len(draws))
        self.assertLess(abs(draws.mean() - 8 * math.pi / 2), 4 * se)

    def test_variance_of_single_path(self):
        draws = sample_H(1, 0.0, substream(3, 0, 0), size=1_000_000)
        self.assertAlmostEqual(draws.var() / (4 - math.pi ** 2 / 4), 1.0, delta=0.01)

    def test_scalar_draw(self):
        self.assertIsInstance(sample_H(2, 1.0, substream(1, 0, 0)), float)
        self.assertIsInstance(sample_G2(2, 1.0, substream(1, 0, 0)), float)

    def test_in_phase_component_is_unit_exponential(self):
        x, y, r = sample_components(1, 0.0, substream(4, 0, 0), size=1_000_000)
        self.assertLess(abs(x.mean() - 1.0), 4 * x.std() / 1000)
        self.assertTrue(np.all(x >= 0))
        self.assertTrue(np.all(r == 0))

    def test_quadrature_component_is_symmetric(self):
        _, y, _ = sample_components(2, 1.0, substream(5, 0, 0), size=1_000_000)
        positive = np.count_nonzero(y > 0) / len(y)
        self.assertLess(abs(positive - 0.5), 4 * 0.5 / 1000)

    def test_one_bit_without_surface_is_direct_power(self):
        draws = sample_G2(0, 1.0, substream(6, 0, 0), size=50000)
        self.assertGreater(stats.kstest(draws, 'expon', args=(0, 2.0)).pvalue, 1e-3)


class McOutageTests(SimpleTestCase):

    def test_direct_link_only(self):
        cfg = SystemConfig(n_elements=0, sigma_d=1.0, gamma_th_db=0.0, gamma_t_grid_db=(10.0,))
        expected = -math.expm1(-0.05)
        for mode in ('perfect', 'one_bit'):
            est = mc_outage(mode, cfg, McConfig(seed=11, n_samples=1_000_000, n_streams=4))[0]
            self.assertLess(abs(est.p_hat - expected), 4 * est.std_err)

    def test_vanishing_threshold(self):
        cfg = SystemConfig(n_elements=2, sigma_d=1.0, gamma_th_db=-200.0, gamma_t_grid_db=(0.0, 10.0))
        for est in mc_outage('perfect', cfg, McConfig(seed=1, n_samples=100_000)):
            self.assertEqual(est.p_hat, 0.0)

    def test_deterministic_and_independent_of_streams(self):
        cfg = SystemConfig(n_elements=2, sigma_d=1.0, gamma_t_grid_db=(-10.0, 0.0))
        one = mc_outage('one_bit', cfg, McConfig(seed=42, n_samples=200_000, n_streams=1))
        again = mc_outage('one_bit', cfg, McConfig(seed=42, n_samples=200_000, n_streams=1))
        many = mc_outage('one_bit', cfg, McConfig(seed=42, n_samples=200_000, n_streams=3))
        self.assertEqual(one, again)
        self.assertEqual(one, many)

    def test_perfect_alignment_is_never_worse(self):
        cfg = SystemConfig(n_elements=2, sigma_d=1.0, gamma_t_grid_db=(-15.0, -10.0, -5.0, 0.0))
        mc = McConfig(seed=3, n_samples=200_000)
        for p, o in zip(mc_outage('perfect', cfg, mc), mc_outage('one_bit', cfg, mc)):
            self.assertLessEqual(p.p_hat, o.p_hat + 3 * math.hypot(p.std_err, o.std_err))

    def test_more_elements_help(self):
        mc = McConfig(seed=8, n_samples=200_000)
        values = []
        for n in (1, 2, 4):
            cfg = SystemConfig(n_elements=n, sigma_d=1.0, gamma_t_grid_db=(-5.0,))
            values.append(mc_outage('perfect', cfg, mc)[0])
        for a, b in zip(values, values[1:]):
            self.assertLessEqual(b.p_hat, a.p_hat + 3 * math.hypot(a.std_err, b.std_err))

    def test_curve_tagging(self):
        cfg = SystemConfig(n_elements=1, sigma_d=1.0, gamma_t_grid_db=(0.0, 5.0))
        curve = mc_curve('one_bit', cfg, McConfig(seed=9, n_samples=1000))
        self.assertEqual(curve.method, 'mc_one_bit')
        self.assertEqual([p.n_samples for p in curve.points], [1000, 1000])
        self.assertEqual(curve.points[0].seed, 9)


class AnalyticAgreementTests(SimpleTestCase):

    def test_perfect_alignment_sweep(self):
        grid = tuple(float(g) for g in range(-40, 11, 2))
        mc = McConfig(seed=20200101, n_samples=400_000, n_streams=4)
        for n in (2, 8, 16):
            cfg = SystemConfig(n_elements=n, sigma_d=1.0, gamma_th_db=0.0, gamma_t_grid_db=grid)
            checked = 0
            for gamma_t_db, est in zip(grid, mc_outage('perfect', cfg, mc)):
                if not 1e-3 <= est.p_hat <= 0.9:
                    continue
                checked += 1
                t = gain_threshold(0.0, gamma_t_db, PhaseMode.PERFECT)
                tolerance = max(0.01, 5 * est.std_err)
                with self.subTest(n=n, gamma_t_db=gamma_t_db):
                    unrounded = cdf_H(t, n, 1.0, mode=CdfMode.LEMMA1_QUADRATURE, exact_shape=True)
                    self.assertLess(abs(unrounded - est.p_hat), tolerance)
                    # the closed form also pays for rounding the gamma shape
                    allowance = rounding_discrepancy(n, 1.0, (t,))
                    self.assertLess(abs(cdf_H(t, n, 1.0) - est.p_hat), tolerance + allowance + 1e-6)
            self.assertGreaterEqual(checked, 3, msg=f"N={n}")
