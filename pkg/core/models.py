"""
Core Models
===========
This module contains:
1. RecordQuerySet - filters out soft-deleted records
2. BaseModel - UUID key, timestamps and soft delete for stored irslab records

The numerical apps have no models; only experiment bookkeeping is persisted.
"""

import uuid

from django.db import models
from django.utils import timezone


class RecordQuerySet(models.QuerySet):

    def alive(self):
        return self.filter(deleted_at__isnull=True)

    def deleted(self):
        return self.filter(deleted_at__isnull=False)


# ============================================================================
# ABSTRACT BASE MODEL
# ============================================================================

class BaseModel(models.Model):
    """
    Abstract base for stored records.

    Deleting is soft: deleted_at is stamped and the row stays, so run
    history and golden references survive cleanup.

    Usage:
        class ExperimentRun(BaseModel):
            ...

        ExperimentRun.objects.alive()
    """
    id = models.UUIDField(
        primary_key=True,
        default=uuid.uuid4,
        editable=False,
        help_text="Unique identifier (UUID)"
    )
    created_at = models.DateTimeField(
        auto_now_add=True,
        help_text="Timestamp when record was created"
    )
    updated_at = models.DateTimeField(
        auto_now=True,
        help_text="Timestamp when record was last updated"
    )
    deleted_at = models.DateTimeField(
        null=True,
        blank=True,
        help_text="Timestamp when record was soft-deleted"
    )

    objects = RecordQuerySet.as_manager()

    class Meta:
        abstract = True
        ordering = ['-created_at']

    def soft_delete(self):
        self.deleted_at = timezone.now()
        self.save(update_fields=['deleted_at', 'updated_at'])

    def restore(self):
        self.deleted_at = None
        self.save(update_fields=['deleted_at', 'updated_at'])

    @property
    def is_deleted(self):
        return self.deleted_at is not None
