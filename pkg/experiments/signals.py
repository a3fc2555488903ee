"""
Experiment Signals
==================
Golden-run bookkeeping.
"""

import logging

from django.db.models.signals import pre_save
from django.dispatch import receiver

from .models import ExperimentRun

logger = logging.getLogger(__name__)


@receiver(pre_save, sender=ExperimentRun)
def demote_previous_golden_run(sender, instance, **kwargs):
    """
    Keep at most one golden run per fingerprint.

    Promoting a run demotes any other golden run with the same fingerprint.
    """
    if not instance.is_golden or not instance.fingerprint or instance.is_deleted:
        return

    demoted = (
        ExperimentRun.objects
        .filter(fingerprint=instance.fingerprint, is_golden=True)
        .exclude(pk=instance.pk)
        .update(is_golden=False)
    )
    if demoted:
        logger.info("Demoted %d golden run(s) with fingerprint %s", demoted, instance.fingerprint[:12])
