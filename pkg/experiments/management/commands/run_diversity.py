"""
Run Diversity Command
=====================
Fits the high-SNR slope of an outage curve and compares it with the
theoretical diversity order.

Usage:
    python manage.py run_diversity --mode perfect --n 1 --sigma-d 1 \
        --snr-from-db 0 --snr-to-db 60 --snr-points 31
    python manage.py run_diversity --mode one_bit --engine asymptotic --n 3
"""

from ._base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Estimates the diversity order from an outage curve'
    command_name = 'diversity'

    def add_command_arguments(self, parser):
        parser.add_argument('--mode', type=str, help='perfect or one_bit')
        parser.add_argument('--engine', type=str, help='analytic or asymptotic')
        parser.add_argument('--fit-from-db', type=float, help='Lowest gamma_t in the fit (dB)')
        parser.add_argument('--fit-to-db', type=float, help='Highest gamma_t in the fit (dB)')
        parser.add_argument('--fit-p-min', type=float, help='Smallest outage probability in the fit')
        parser.add_argument('--fit-p-max', type=float, help='Largest outage probability in the fit')

    def report(self, spec, result):
        self.stdout.write('\n=== DIVERSITY ===\n')
        for report in result.reports:
            low, high = report.fit_range_db
            self.stdout.write(
                f'{report.method} N={report.n_elements}: theoretical {report.theoretical_order}, '
                f'fitted {report.fitted_slope:.4f} ({report.n_points} points, {low:g} to {high:g} dB)'
            )
