import math

from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from channel.geometry import (
    REFERENCE_GEOMETRY,
    STRONG_DIRECT_GEOMETRY,
    LinkBudget,
    PhaseMode,
    SystemConfig,
    SystemGeometry,
    db_to_linear,
    gain_threshold,
    link_budget,
    path_loss_db,
    physical_to_normalized_snr_db,
)
from core.exceptions import DomainError


class PathLossTests(SimpleTestCase):

    def test_known_distances(self):
        self.assertEqual(path_loss_db(1), -40.9)
        self.assertAlmostEqual(path_loss_db(50), -103.2522, places=3)
        self.assertAlmostEqual(path_loss_db(40), -99.6956, places=3)

    def test_strictly_decreasing(self):
        values = [path_loss_db(d) for d in (1, 2, 5, 10, 30, 100, 1000)]
        self.assertTrue(all(b < a for a, b in zip(values, values[1:])))

    def test_domain(self):
        with self.assertRaises(DomainError):
            path_loss_db(0)


class LinkBudgetTests(SimpleTestCase):

    def test_from_gains(self):
        self.assertAlmostEqual(LinkBudget.from_gains(1, 1, 0.5).sigma_d, 1.0, places=15)
        self.assertAlmostEqual(LinkBudget.from_gains(1, 1, 1).sigma_d, math.sqrt(2), places=15)

    def test_reference_geometry(self):
        budget = link_budget(REFERENCE_GEOMETRY)
        self.assertAlmostEqual(budget.xi1, db_to_linear(path_loss_db(40)), delta=1e-20)
        expected_db = (10 * math.log10(2) + path_loss_db(50) - path_loss_db(40) - path_loss_db(30))
        self.assertAlmostEqual(20 * math.log10(budget.sigma_d), expected_db, places=9)
        self.assertTrue(5.3e4 < budget.sigma_d < 5.4e4)

    def test_shorter_direct_link_is_stronger(self):
        self.assertGreater(link_budget(STRONG_DIRECT_GEOMETRY).sigma_d,
                           link_budget(REFERENCE_GEOMETRY).sigma_d)

    def test_normalized_snr_offset(self):
        budget = LinkBudget.from_gains(0.04, 0.01, 0.5)
        self.assertAlmostEqual(physical_to_normalized_snr_db(0.0, budget), -40.0, places=9)

    def test_invalid_geometry(self):
        with self.assertRaises(ValidationError):
            SystemGeometry(40, -1, 50)


class GainThresholdTests(SimpleTestCase):

    def test_perfect_mode(self):
        self.assertAlmostEqual(gain_threshold(0, 0, PhaseMode.PERFECT), 1.0)
        self.assertAlmostEqual(gain_threshold(0, 20, 'perfect'), 0.1)

    def test_one_bit_mode(self):
        self.assertAlmostEqual(gain_threshold(0, 20, PhaseMode.ONE_BIT), 0.01)

    def test_one_bit_is_square_of_perfect(self):
        for th, gt in ((0, -7.5), (3, 12), (-2, 31)):
            perfect = gain_threshold(th, gt, PhaseMode.PERFECT)
            self.assertAlmostEqual(gain_threshold(th, gt, PhaseMode.ONE_BIT), perfect ** 2, places=12)

    def test_unknown_mode(self):
        with self.assertRaises(DomainError):
            gain_threshold(0, 0, 'two_bit')


class SystemConfigTests(SimpleTestCase):

    def test_direct_only_allowed(self):
        cfg = SystemConfig(n_elements=0, sigma_d=1.0, gamma_t_grid_db=[0, 10])
        self.assertEqual(cfg.gamma_t_grid_db, (0.0, 10.0))

    def test_grid_must_increase(self):
        with self.assertRaises(ValidationError):
            SystemConfig(n_elements=2, sigma_d=1.0, gamma_t_grid_db=[0, 10, 10])

    def test_rejects_negative_elements(self):
        with self.assertRaises(ValidationError):
            SystemConfig(n_elements=-1, sigma_d=1.0)

    def test_from_geometry(self):
        cfg = SystemConfig.from_geometry(REFERENCE_GEOMETRY, 8, gamma_t_grid_db=[-25, -20])
        self.assertEqual(cfg.sigma_d, link_budget(REFERENCE_GEOMETRY).sigma_d)
        self.assertEqual(cfg.n_elements, 8)
