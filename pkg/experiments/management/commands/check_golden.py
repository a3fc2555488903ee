"""
Check Golden Command
====================
Re-executes golden runs into a scratch directory and compares CSV checksums.

Usage:
    python manage.py check_golden
    python manage.py check_golden --fingerprint 3fa1c2
"""

import tempfile
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from core.exceptions import IrsLabError
from experiments.models import ExperimentRun
from experiments.runner import execute
from experiments.spec import ExperimentSpec

from ._base import NUMERIC_ERROR


class Command(BaseCommand):
    help = 'Checks that golden runs still reproduce byte-identical CSV output'

    def add_arguments(self, parser):
        parser.add_argument(
            '--fingerprint',
            type=str,
            help='Only check runs whose fingerprint starts with this prefix',
        )

    def handle(self, *args, **options):
        runs = ExperimentRun.objects.alive().filter(is_golden=True)
        if options.get('fingerprint'):
            runs = runs.filter(fingerprint__startswith=options['fingerprint'])

        if not runs.exists():
            self.stdout.write(self.style.WARNING('No golden runs to check'))
            return

        mismatches = []
        with tempfile.TemporaryDirectory() as scratch:
            for run in runs:
                out = Path(scratch) / f'{run.run_number}.csv'
                spec = ExperimentSpec.from_parameters(run.parameters, out=str(out))
                try:
                    result = execute(spec)
                except IrsLabError as exc:
                    mismatches.append(run.run_number)
                    self.stdout.write(self.style.ERROR(f'  {run.run_number}: failed ({exc})'))
                    continue

                if result.csv_sha256 == run.csv_sha256:
                    self.stdout.write(f'  {run.run_number}: ok')
                else:
                    mismatches.append(run.run_number)
                    self.stdout.write(self.style.ERROR(
                        f'  {run.run_number}: checksum {result.csv_sha256[:12]} != {run.csv_sha256[:12]}'
                    ))

        if mismatches:
            raise CommandError(f'Golden runs drifted: {", ".join(mismatches)}', returncode=NUMERIC_ERROR)
        self.stdout.write(self.style.SUCCESS(f'\n✓ {runs.count()} golden run(s) reproduced'))
