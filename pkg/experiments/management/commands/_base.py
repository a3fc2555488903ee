"""
Shared Experiment Command
=========================
Flags, config resolution, persistence and exit codes common to run_outage,
run_diversity and run_diagnostics.

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 I/O failure.
"""

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from core.exceptions import IrsLabError
from experiments.models import ExperimentRun
from experiments.runner import execute
from experiments.spec import load_spec
from experiments.tasks import execute_experiment_run

CONFIG_ERROR = 1
NUMERIC_ERROR = 2
IO_ERROR = 3

# option dest -> config key
FLAG_KEYS = {
    'methods': 'METHODS',
    'mode': 'MODE',
    'engine': 'ENGINE',
    'geometry': 'GEOMETRY',
    'n': 'N_ELEMENTS',
    'sigma_d': 'SIGMA_D',
    'gamma_th_db': 'GAMMA_TH_DB',
    'snr_from_db': 'SNR_FROM_DB',
    'snr_to_db': 'SNR_TO_DB',
    'snr_points': 'SNR_POINTS',
    'seed': 'SEED',
    'samples': 'SAMPLES',
    'streams': 'STREAMS',
    'workers': 'WORKERS',
    'out': 'OUT',
    'svg': 'SVG',
    'fit_from_db': 'FIT_FROM_DB',
    'fit_to_db': 'FIT_TO_DB',
    'fit_p_min': 'FIT_P_MIN',
    'fit_p_max': 'FIT_P_MAX',
    'n_values': 'N_VALUES',
    'epsilons': 'EPSILONS',
}


class ExperimentCommand(BaseCommand):
    """Base for commands that resolve an ExperimentSpec and execute it."""

    command_name = None

    def add_arguments(self, parser):
        parser.add_argument('--config', type=str, help='KEY=VALUE experiment config file')
        parser.add_argument('--n', type=int, help='Number of IRS elements N')
        parser.add_argument('--sigma-d', type=float, help='Direct-link Rayleigh scale (derived from geometry if omitted)')
        parser.add_argument('--geometry', type=str, help='Named geometry: reference or strong_direct')
        parser.add_argument('--gamma-th-db', type=float, help='SNR threshold in dB')
        parser.add_argument('--snr-from-db', type=float, help='First transmit SNR (dB)')
        parser.add_argument('--snr-to-db', type=float, help='Last transmit SNR (dB)')
        parser.add_argument('--snr-points', type=int, help='Number of grid points')
        parser.add_argument('--workers', type=int, help='Thread-pool size for grid points')
        parser.add_argument('--out', type=str, help='CSV output path')
        parser.add_argument('--save', action='store_true', help='Store the run in the database')
        parser.add_argument('--golden', action='store_true', help='Store the run and mark it golden')
        parser.add_argument('--queue', action='store_true', help='Store the run and hand it to a Celery worker')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        overrides = {key: options.get(dest) for dest, key in FLAG_KEYS.items() if dest in options}
        try:
            spec = load_spec(self.command_name, options.get('config'), overrides)
        except ValidationError as exc:
            raise CommandError('Invalid configuration: ' + '; '.join(exc.messages), returncode=CONFIG_ERROR)
        except FileNotFoundError as exc:
            raise CommandError(f'Config file not found: {exc.filename}', returncode=CONFIG_ERROR)

        run = None
        if options['save'] or options['golden'] or options['queue']:
            run = ExperimentRun.objects.create(
                command=spec.command,
                parameters=spec.as_parameters(),
                fingerprint=spec.fingerprint(),
            )

        if options['queue']:
            run.status = 'QUEUED'
            run.save(update_fields=['status', 'updated_at'])
            execute_experiment_run.delay(str(run.pk))
            self.stdout.write(self.style.SUCCESS(f'✓ Queued {run.run_number}'))
            return

        try:
            result = execute(spec, run)
        except IrsLabError as exc:
            raise CommandError(f'Numerical failure: {exc}', returncode=NUMERIC_ERROR)
        except OSError as exc:
            raise CommandError(f'I/O failure: {exc}', returncode=IO_ERROR)

        self.report(spec, result)

        if run is not None:
            if options['golden']:
                run.is_golden = True
                run.full_clean()
                run.save()
            label = ' (golden)' if run.is_golden else ''
            self.stdout.write(f'Saved as {run.run_number}{label}')
        self.stdout.write(self.style.SUCCESS(f'\n✓ {result.row_count} rows written to {result.csv_path}'))

    def report(self, spec, result):
        pass
