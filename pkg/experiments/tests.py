import io
import shutil
import tempfile
from pathlib import Path
from unittest import mock

from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, override_settings

from channel.geometry import REFERENCE_GEOMETRY, STRONG_DIRECT_GEOMETRY, link_budget
from experiments.csvio import OUTAGE_COLUMNS, file_sha256, format_value, read_csv, write_csv
from experiments.models import CurvePoint, DiagnosticValue, DiversityResult, ExperimentRun
from experiments.spec import ExperimentSpec, load_spec, read_config_file
from experiments.tasks import execute_experiment_run


class TempDirMixin:

    def setUp(self):
        super().setUp()
        self.tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, self.tmp, ignore_errors=True)

    def write_config(self, text, name='experiment.env'):
        path = self.tmp / name
        path.write_text(text)
        return str(path)


# ============================================================================
# SPEC RESOLUTION
# ============================================================================

class SpecTests(TempDirMixin, SimpleTestCase):

    def setUp(self):
        super().setUp()
        self.settings_override = override_settings(IRSLAB_OUTPUT_DIR=str(self.tmp))
        self.settings_override.enable()
        self.addCleanup(self.settings_override.disable)

    def test_defaults_reproduce_reference_setup(self):
        spec = load_spec('outage')
        self.assertEqual(spec.system.n_elements, 8)
        self.assertEqual(spec.system.gamma_th_db, 0.0)
        self.assertEqual(spec.geometry, 'reference')
        self.assertAlmostEqual(spec.system.sigma_d, link_budget(REFERENCE_GEOMETRY).sigma_d)
        self.assertEqual(len(spec.system.gamma_t_grid_db), 13)
        self.assertEqual(spec.system.gamma_t_grid_db[0], -40.0)
        self.assertEqual(spec.system.gamma_t_grid_db[-1], 20.0)
        self.assertEqual(spec.methods, ('perfect', 'one_bit'))
        self.assertEqual(spec.out, str(self.tmp / 'outage.csv'))

    def test_flags_override_file_override_defaults(self):
        path = self.write_config("# sweep\nN_ELEMENTS=4\nSNR_POINTS=5\nMETHODS=perfect\n")
        spec = load_spec('outage', path, {'N_ELEMENTS': 2, 'SNR_TO_DB': None})
        self.assertEqual(spec.system.n_elements, 2)
        self.assertEqual(len(spec.system.gamma_t_grid_db), 5)
        self.assertEqual(spec.system.gamma_t_grid_db[-1], 20.0)
        self.assertEqual(spec.methods, ('perfect',))

    def test_string_flags_are_cast_like_file_values(self):
        spec = load_spec('diagnostics', overrides={'N_VALUES': '1,4', 'EPSILONS': '0,0.5'})
        self.assertEqual(spec.n_values, (1, 4))
        self.assertEqual(spec.epsilons, (0.0, 0.5))

    def test_config_file_values_are_typed(self):
        path = self.write_config("SIGMA_D=1.5\nN_VALUES=1,2,8\nSVG=\n")
        values = read_config_file(path)
        self.assertEqual(values['SIGMA_D'], 1.5)
        self.assertEqual(values['N_VALUES'], [1, 2, 8])
        self.assertIsNone(values['SVG'])

    def test_unknown_key_is_rejected(self):
        path = self.write_config("N_ELEMENT=4\n")
        with self.assertRaises(ValidationError):
            load_spec('outage', path)

    def test_unparsable_value_is_rejected(self):
        path = self.write_config("N_ELEMENTS=four\n")
        with self.assertRaises(ValidationError):
            load_spec('outage', path)

    def test_outage_needs_a_method(self):
        with self.assertRaises(ValidationError):
            load_spec('outage', overrides={'METHODS': ''})
        with self.assertRaises(ValidationError):
            load_spec('outage', overrides={'METHODS': 'perfect,exact'})

    def test_sigma_d_follows_geometry_unless_given(self):
        strong = load_spec('outage', overrides={'GEOMETRY': 'strong_direct'})
        self.assertAlmostEqual(strong.system.sigma_d, link_budget(STRONG_DIRECT_GEOMETRY).sigma_d)
        given = load_spec('outage', overrides={'GEOMETRY': 'strong_direct', 'SIGMA_D': 2.0})
        self.assertEqual(given.system.sigma_d, 2.0)
        with self.assertRaises(ValidationError):
            load_spec('outage', overrides={'GEOMETRY': 'far'})

    def test_reversed_grid_is_rejected(self):
        with self.assertRaises(ValidationError):
            load_spec('outage', overrides={'SNR_FROM_DB': 10.0, 'SNR_TO_DB': 0.0})

    def test_diagnostics_epsilon_range(self):
        with self.assertRaises(ValidationError):
            load_spec('diagnostics', overrides={'EPSILONS': '0.7'})

    def test_fingerprint_ignores_output_and_parallelism(self):
        base = load_spec('outage')
        moved = load_spec('outage', overrides={'OUT': str(self.tmp / 'other.csv'), 'WORKERS': 4, 'STREAMS': 3})
        reseeded = load_spec('outage', overrides={'SEED': 1})
        self.assertEqual(base.fingerprint(), moved.fingerprint())
        self.assertNotEqual(base.fingerprint(), reseeded.fingerprint())

    def test_parameters_rebuild_the_spec(self):
        spec = load_spec('diversity', overrides={'MODE': 'one_bit', 'FIT_FROM_DB': 10.0})
        rebuilt = ExperimentSpec.from_parameters(spec.as_parameters())
        self.assertEqual(rebuilt.fingerprint(), spec.fingerprint())
        self.assertEqual(rebuilt.out, spec.out)
        self.assertEqual(rebuilt.fit_range_db, (10.0, None))


class CsvTests(TempDirMixin, SimpleTestCase):

    def test_field_formatting(self):
        self.assertEqual(format_value(None), '')
        self.assertEqual(format_value(float('inf')), 'inf')
        self.assertEqual(format_value(0.1), '0.1')
        self.assertEqual(format_value(3), '3')

    def test_header_and_unix_line_endings(self):
        path = self.tmp / 'out' / 'rows.csv'
        count = write_csv(path, ['a', 'b'], [[1, None], [0.5, 'x']])
        self.assertEqual(count, 2)
        self.assertEqual(path.read_bytes(), b'a,b\n1,\n0.5,x\n')


# ============================================================================
# COMMANDS
# ============================================================================

class CommandTestCase(TempDirMixin, TestCase):

    def call(self, name, **options):
        out = io.StringIO()
        call_command(name, stdout=out, **options)
        return out.getvalue()

    def outage_options(self, **extra):
        options = {
            'methods': 'perfect',
            'n': 2,
            'sigma_d': 1.0,
            'snr_from_db': 0.0,
            'snr_to_db': 20.0,
            'snr_points': 3,
            'out': str(self.tmp / 'outage.csv'),
        }
        options.update(extra)
        return options


class RunOutageTests(CommandTestCase):

    def test_analytic_rows(self):
        self.call('run_outage', **self.outage_options())
        rows = read_csv(self.tmp / 'outage.csv')
        self.assertEqual(len(rows), 3)
        self.assertEqual(list(rows[0].keys()), OUTAGE_COLUMNS)
        for row in rows:
            self.assertEqual(row['method'], 'perfect')
            self.assertEqual(row['N'], '2')
            self.assertEqual(row['std_err'], '')
            self.assertEqual(row['seed'], '')
            self.assertTrue(0.0 <= float(row['p_out']) <= 1.0)
        self.assertEqual([float(r['gamma_t_db']) for r in rows], [0.0, 10.0, 20.0])

    def test_rerun_is_byte_identical(self):
        self.call('run_outage', **self.outage_options(methods='perfect,one_bit'))
        first = (self.tmp / 'outage.csv').read_bytes()
        self.call('run_outage', **self.outage_options(methods='perfect,one_bit', workers=3))
        self.assertEqual((self.tmp / 'outage.csv').read_bytes(), first)

    def test_monte_carlo_columns(self):
        self.call('run_outage', **self.outage_options(methods='mc_perfect', samples=20000, seed=7))
        rows = read_csv(self.tmp / 'outage.csv')
        self.assertEqual(len(rows), 3)
        for row in rows:
            self.assertEqual(row['method'], 'mc_perfect')
            self.assertEqual(row['n_samples'], '20000')
            self.assertEqual(row['seed'], '7')
            self.assertNotEqual(row['std_err'], '')

    def test_failed_points_do_not_stop_the_run(self):
        self.call('run_outage', **self.outage_options(
            methods='asymptotic_perfect', snr_from_db=-10.0, snr_to_db=10.0, snr_points=2,
        ))
        rows = read_csv(self.tmp / 'outage.csv')
        self.assertEqual(rows[0]['p_out'], '')
        self.assertIn('0 < t < 1', rows[0]['error'])
        self.assertNotEqual(rows[1]['p_out'], '')
        self.assertEqual(rows[1]['error'], '')

    def test_svg_plot(self):
        svg = self.tmp / 'plots' / 'outage.svg'
        output = self.call('run_outage', **self.outage_options(methods='perfect,one_bit', svg=str(svg)))
        self.assertIn('<svg', svg.read_text())
        self.assertIn(str(svg), output)

    def test_config_error_exit_code(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('run_outage', **self.outage_options(methods='nearest'))
        self.assertEqual(ctx.exception.returncode, 1)

    def test_missing_config_file_exit_code(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('run_outage', config=str(self.tmp / 'absent.env'))
        self.assertEqual(ctx.exception.returncode, 1)

    def test_io_error_exit_code(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('run_outage', **self.outage_options(out=str(self.tmp)))
        self.assertEqual(ctx.exception.returncode, 3)

    def test_config_file_drives_the_run(self):
        path = self.write_config(
            "METHODS=one_bit\nN_ELEMENTS=1\nSIGMA_D=1\nSNR_FROM_DB=0\nSNR_TO_DB=10\nSNR_POINTS=2\n"
            f"OUT={self.tmp / 'from_file.csv'}\n"
        )
        self.call('run_outage', config=path)
        rows = read_csv(self.tmp / 'from_file.csv')
        self.assertEqual([r['method'] for r in rows], ['one_bit', 'one_bit'])

    def test_save_stores_run_and_points(self):
        output = self.call('run_outage', **self.outage_options(save=True))
        run = ExperimentRun.objects.get()
        self.assertEqual(run.status, 'COMPLETED')
        self.assertEqual(run.command, 'outage')
        self.assertTrue(run.run_number.startswith('RUN-'))
        self.assertIn(run.run_number, output)
        self.assertEqual(run.csv_sha256, file_sha256(self.tmp / 'outage.csv'))
        self.assertEqual(run.row_count, 3)
        self.assertEqual(CurvePoint.objects.filter(run=run).count(), 3)
        self.assertIsNotNone(run.duration_seconds)

    def test_unsaved_run_leaves_database_alone(self):
        self.call('run_outage', **self.outage_options())
        self.assertFalse(ExperimentRun.objects.exists())

    def test_queue_dispatches_task(self):
        with mock.patch('experiments.management.commands._base.execute_experiment_run') as task:
            self.call('run_outage', **self.outage_options(queue=True))
        run = ExperimentRun.objects.get()
        self.assertEqual(run.status, 'QUEUED')
        task.delay.assert_called_once_with(str(run.pk))
        self.assertFalse((self.tmp / 'outage.csv').exists())


class RunDiversityTests(CommandTestCase):

    def test_one_bit_leading_order_slope(self):
        self.call(
            'run_diversity', mode='one_bit', engine='asymptotic', n=3, sigma_d=1.0,
            snr_from_db=10.0, snr_to_db=40.0, snr_points=7, fit_p_min=1e-300, fit_p_max=1.0,
            out=str(self.tmp / 'diversity.csv'),
        )
        row, = read_csv(self.tmp / 'diversity.csv')
        self.assertEqual(row['theoretical_order'], '3')
        self.assertEqual(row['method'], 'asymptotic_one_bit')
        self.assertAlmostEqual(float(row['fitted_slope']), 3.0, delta=1e-6)
        self.assertEqual(row['n_points'], '7')

    def test_empty_grid_is_a_numeric_failure(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('run_diversity', mode='perfect', n=1, sigma_d=1.0, snr_points=0,
                      out=str(self.tmp / 'diversity.csv'))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_failed_run_is_recorded(self):
        with self.assertRaises(CommandError):
            self.call('run_diversity', mode='perfect', n=1, sigma_d=1.0, snr_points=0,
                      out=str(self.tmp / 'diversity.csv'), save=True)
        run = ExperimentRun.objects.get()
        self.assertEqual(run.status, 'FAILED')
        self.assertIn('InsufficientPointsError', run.error_message)

    def test_save_stores_report(self):
        self.call(
            'run_diversity', mode='one_bit', engine='asymptotic', n=3, sigma_d=1.0,
            snr_from_db=10.0, snr_to_db=40.0, snr_points=4, fit_p_min=1e-300, fit_p_max=1.0,
            out=str(self.tmp / 'diversity.csv'), save=True,
        )
        result = DiversityResult.objects.get()
        self.assertEqual(result.theoretical_order, '3')
        self.assertEqual(result.fit_from_db, 10.0)
        self.assertEqual(result.fit_to_db, 40.0)


class RunDiagnosticsTests(CommandTestCase):

    def test_rows(self):
        out = self.tmp / 'diagnostics.csv'
        self.call('run_diagnostics', n_values='2,4,8', epsilons='0,0.5', out=str(out), save=True)
        rows = read_csv(out)
        self.assertEqual(list(rows[0].keys()), ['diagnostic_name', 'N', 'epsilon', 'value_nats'])
        by_name = {}
        for row in rows:
            by_name.setdefault(row['diagnostic_name'], []).append(row)
        self.assertEqual(len(by_name['kl_gamma']), 6)
        self.assertEqual(len(by_name['kl_gamma_rounded']), 3)

        for row in by_name['kl_gamma'] + by_name['kl_gamma_rounded']:
            self.assertGreaterEqual(float(row['value_nats']), 0.0)

        student = [float(r['value_nats']) for r in by_name['kl_student_t']]
        self.assertEqual(student[0], float('inf'))
        self.assertGreater(student[1], student[2])

        mi, = by_name['mutual_information']
        self.assertEqual(mi['N'], '')
        self.assertAlmostEqual(float(mi['value_nats']), 0.04441, delta=5e-4)

        saturated = DiagnosticValue.objects.get(diagnostic_name='kl_student_t', n_elements=2)
        self.assertTrue(saturated.saturated)
        self.assertIsNone(saturated.value_nats)


# ============================================================================
# GOLDEN RUNS
# ============================================================================

class GoldenRunTests(CommandTestCase):

    def test_promoting_demotes_previous_golden(self):
        self.call('run_outage', **self.outage_options(golden=True))
        self.call('run_outage', **self.outage_options(golden=True, out=str(self.tmp / 'again.csv')))
        runs = ExperimentRun.objects.order_by('run_number')
        self.assertEqual(runs.count(), 2)
        self.assertEqual(runs[0].fingerprint, runs[1].fingerprint)
        self.assertEqual([r.is_golden for r in runs], [False, True])

    def test_check_golden_reproduces(self):
        self.call('run_outage', **self.outage_options(golden=True))
        output = self.call('check_golden')
        self.assertIn('ok', output)

    def test_check_golden_detects_drift(self):
        self.call('run_outage', **self.outage_options(golden=True))
        ExperimentRun.objects.update(csv_sha256='0' * 64)
        with self.assertRaises(CommandError) as ctx:
            self.call('check_golden')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_check_golden_without_runs(self):
        self.assertIn('No golden runs', self.call('check_golden'))

    def test_check_golden_skips_deleted_runs(self):
        self.call('run_outage', **self.outage_options(golden=True))
        run = ExperimentRun.objects.get()
        ExperimentRun.objects.update(csv_sha256='0' * 64)
        run.refresh_from_db()
        run.soft_delete()
        self.assertTrue(run.is_golden)
        self.assertIn('No golden runs', self.call('check_golden'))
        self.assertFalse(ExperimentRun.objects.alive().exists())
        run.restore()
        self.assertEqual(ExperimentRun.objects.alive().count(), 1)


class ExperimentRunModelTests(TestCase):

    def test_run_numbers_increase(self):
        first = ExperimentRun.objects.create(command='outage', fingerprint='a' * 64)
        second = ExperimentRun.objects.create(command='outage', fingerprint='a' * 64)
        self.assertRegex(first.run_number, r'^RUN-\d{4}-0001$')
        self.assertTrue(second.run_number.endswith('-0002'))

    def test_golden_requires_completed_run(self):
        run = ExperimentRun(command='outage', fingerprint='b' * 64, is_golden=True)
        with self.assertRaises(ValidationError):
            run.clean()

    def test_task_executes_stored_run(self):
        tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, tmp, ignore_errors=True)
        spec = load_spec('outage', overrides={
            'METHODS': 'one_bit', 'N_ELEMENTS': 1, 'SIGMA_D': 1.0,
            'SNR_POINTS': 2, 'SNR_FROM_DB': 0.0, 'SNR_TO_DB': 10.0, 'OUT': str(tmp / 'task.csv'),
        })
        run = ExperimentRun.objects.create(
            command='outage', parameters=spec.as_parameters(), fingerprint=spec.fingerprint(),
        )
        sha = execute_experiment_run(str(run.pk))
        run.refresh_from_db()
        self.assertEqual(run.status, 'COMPLETED')
        self.assertEqual(run.csv_sha256, sha)
        self.assertEqual(run.row_count, 2)
