"""
Run Diagnostics Command
=======================
Relative entropy of the gamma and Student-t approximations and the mutual
information between the in-phase and quadrature components.

Usage:
    python manage.py run_diagnostics
    python manage.py run_diagnostics --n-values 1,2,4,8 --epsilons 0,0.5
"""

from ._base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Computes approximation-accuracy diagnostics'
    command_name = 'diagnostics'

    def add_command_arguments(self, parser):
        parser.add_argument('--n-values', type=str, help='Comma list of N')
        parser.add_argument('--epsilons', type=str, help='Comma list of shape rounding offsets')

    def report(self, spec, result):
        self.stdout.write('\n=== DIAGNOSTICS ===\n')
        for name, n, epsilon, value in result.diagnostics:
            if name == 'mutual_information':
                self.stdout.write(f'mutual information: {value:.6f} nats')
        saturated = sum(1 for row in result.diagnostics if row[3] == float('inf'))
        if saturated:
            self.stdout.write(self.style.WARNING(f'{saturated} divergence(s) are infinite'))
