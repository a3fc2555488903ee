"""
Run Outage Command
==================
Outage probability versus transmit SNR for one or more methods.

Usage:
    python manage.py run_outage
    python manage.py run_outage --methods perfect,one_bit,mc_perfect --n 16
    python manage.py run_outage --config fig3.env --svg results/fig3.svg
    python manage.py run_outage --config fig3.env --save --golden
"""

from ._base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Computes outage curves and writes them to CSV (and optionally SVG)'
    command_name = 'outage'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--methods',
            type=str,
            help='Comma list of perfect, one_bit, clt_perfect, asymptotic_perfect, '
                 'asymptotic_one_bit, mc_perfect, mc_one_bit',
        )
        parser.add_argument('--seed', type=int, help='Monte-Carlo seed')
        parser.add_argument('--samples', type=int, help='Monte-Carlo samples per grid point')
        parser.add_argument('--streams', type=int, help='Monte-Carlo worker threads')
        parser.add_argument('--svg', type=str, help='SVG plot path')

    def report(self, spec, result):
        self.stdout.write('\n=== OUTAGE ===\n')
        self.stdout.write(f'N = {spec.system.n_elements}, sigma_d = {spec.system.sigma_d:.6g}, '
                          f'gamma_th = {spec.system.gamma_th_db:g} dB')
        for curve in result.curves:
            failures = curve.failures()
            line = f'  {curve.method}: {len(curve.points)} points'
            if failures:
                self.stdout.write(self.style.WARNING(f'{line}, {len(failures)} failed'))
            else:
                self.stdout.write(line)
        if result.svg_path:
            self.stdout.write(f'Plot written to {result.svg_path}')
