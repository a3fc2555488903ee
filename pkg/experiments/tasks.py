"""
Experiment Tasks
================
Celery entry point for runs dispatched with --queue.
"""

from celery import shared_task

from .models import ExperimentRun
from .runner import execute
from .spec import ExperimentSpec


@shared_task
def execute_experiment_run(run_id):
    """
    Execute a stored run from its saved parameters.

    Returns:
        str: SHA-256 of the written CSV
    """
    run = ExperimentRun.objects.get(pk=run_id)
    spec = ExperimentSpec.from_parameters(run.parameters)
    result = execute(spec, run)
    return result.csv_sha256
