"""
Experiment Models
=================
This module contains:
1. ExperimentRun - one execution of run_outage / run_diversity / run_diagnostics
2. CurvePoint - stored outage-curve rows
3. DiagnosticValue - stored relative-entropy / mutual-information rows
4. DiversityResult - stored slope fits
"""

from django.core.exceptions import ValidationError
from django.db import models
from django.utils import timezone

from core.models import BaseModel


# ============================================================================
# EXPERIMENT RUN
# ============================================================================

class ExperimentRun(BaseModel):
    """
    A stored experiment: its parameters, output files and status.

    Runs sharing a fingerprint were produced by identical specs; at most one
    of them is golden.
    """

    COMMAND_CHOICES = [
        ('outage', 'Outage sweep'),
        ('diversity', 'Diversity order'),
        ('diagnostics', 'Diagnostics'),
    ]

    STATUS_CHOICES = [
        ('PENDING', 'Pending'),
        ('QUEUED', 'Queued'),
        ('RUNNING', 'Running'),
        ('COMPLETED', 'Completed'),
        ('FAILED', 'Failed'),
    ]

    run_number = models.CharField(
        max_length=50,
        unique=True,
        blank=True,
        help_text="Run number (RUN-YYYY-NNNN)"
    )
    command = models.CharField(
        max_length=20,
        choices=COMMAND_CHOICES,
        help_text="Command that produced the run"
    )
    status = models.CharField(
        max_length=20,
        choices=STATUS_CHOICES,
        default='PENDING',
        help_text="Run status"
    )
    parameters = models.JSONField(
        default=dict,
        help_text="Resolved experiment parameters"
    )
    fingerprint = models.CharField(
        max_length=64,
        db_index=True,
        help_text="SHA-256 of the parameters that determine the output"
    )
    csv_path = models.CharField(
        max_length=500,
        blank=True,
        help_text="CSV output path"
    )
    svg_path = models.CharField(
        max_length=500,
        blank=True,
        help_text="SVG output path"
    )
    csv_sha256 = models.CharField(
        max_length=64,
        blank=True,
        help_text="SHA-256 of the CSV content"
    )
    row_count = models.IntegerField(
        default=0,
        help_text="Number of CSV data rows"
    )
    is_golden = models.BooleanField(
        default=False,
        help_text="Reference run for regression checks"
    )
    error_message = models.TextField(
        blank=True,
        help_text="Failure reason"
    )
    started_at = models.DateTimeField(
        null=True,
        blank=True,
        help_text="Execution start"
    )
    finished_at = models.DateTimeField(
        null=True,
        blank=True,
        help_text="Execution end"
    )

    class Meta:
        db_table = 'experiment_runs'
        verbose_name = 'Experiment Run'
        verbose_name_plural = 'Experiment Runs'
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['command', 'status'], name='exp_run_command_status_idx'),
            models.Index(fields=['fingerprint', 'is_golden'], name='exp_run_fingerprint_gold_idx'),
        ]

    def __str__(self):
        return f"{self.run_number} - {self.command} ({self.status})"

    def clean(self):
        """A golden run must have completed with a CSV checksum."""
        if self.is_golden and (self.status != 'COMPLETED' or not self.csv_sha256):
            raise ValidationError({
                'is_golden': 'Only completed runs with a CSV checksum can be golden.'
            })

    def save(self, *args, **kwargs):
        """Auto-generate run number."""
        if not self.run_number:
            year = timezone.now().year
            last_run = ExperimentRun.objects.filter(
                run_number__startswith=f'RUN-{year}'
            ).order_by('-run_number').first()

            if last_run:
                new_num = int(last_run.run_number.split('-')[-1]) + 1
            else:
                new_num = 1

            self.run_number = f'RUN-{year}-{new_num:04d}'

        super().save(*args, **kwargs)

    @property
    def duration_seconds(self):
        if self.started_at and self.finished_at:
            return (self.finished_at - self.started_at).total_seconds()
        return None

    def mark_running(self):
        self.status = 'RUNNING'
        self.started_at = timezone.now()
        self.save(update_fields=['status', 'started_at', 'updated_at'])

    def mark_completed(self, csv_sha256, row_count):
        self.status = 'COMPLETED'
        self.csv_sha256 = csv_sha256
        self.row_count = row_count
        self.finished_at = timezone.now()
        self.save(update_fields=['status', 'csv_sha256', 'row_count', 'finished_at', 'updated_at'])

    def mark_failed(self, message):
        self.status = 'FAILED'
        self.error_message = message
        self.finished_at = timezone.now()
        self.save(update_fields=['status', 'error_message', 'finished_at', 'updated_at'])


# ============================================================================
# RESULTS
# ============================================================================

class CurvePoint(models.Model):
    """One (method, gamma_t) row of an outage sweep."""

    run = models.ForeignKey(
        ExperimentRun,
        on_delete=models.CASCADE,
        related_name='curve_points',
        help_text="Run"
    )
    method = models.CharField(
        max_length=30,
        help_text="Outage method (perfect, one_bit, mc_perfect, ...)"
    )
    n_elements = models.IntegerField(help_text="Number of IRS elements N")
    sigma_d = models.FloatField(help_text="Direct-link Rayleigh scale")
    gamma_th_db = models.FloatField(help_text="SNR threshold (dB)")
    gamma_t_db = models.FloatField(help_text="Transmit SNR (dB)")
    p_out = models.FloatField(
        null=True,
        blank=True,
        help_text="Outage probability; empty when the point failed"
    )
    std_err = models.FloatField(
        null=True,
        blank=True,
        help_text="Monte-Carlo standard error"
    )
    n_samples = models.BigIntegerField(
        null=True,
        blank=True,
        help_text="Monte-Carlo samples"
    )
    seed = models.DecimalField(
        max_digits=20,
        decimal_places=0,
        null=True,
        blank=True,
        help_text="Monte-Carlo seed"
    )
    error = models.TextField(
        blank=True,
        help_text="Engine error at this point"
    )

    class Meta:
        db_table = 'experiment_curve_points'
        verbose_name = 'Curve Point'
        verbose_name_plural = 'Curve Points'
        ordering = ['run', 'method', 'gamma_t_db']

    def __str__(self):
        return f"{self.method} @ {self.gamma_t_db} dB: {self.p_out}"


class DiagnosticValue(models.Model):
    """One row of a diagnostics run."""

    run = models.ForeignKey(
        ExperimentRun,
        on_delete=models.CASCADE,
        related_name='diagnostic_values',
        help_text="Run"
    )
    diagnostic_name = models.CharField(
        max_length=50,
        help_text="kl_gamma, kl_student_t or mutual_information"
    )
    n_elements = models.IntegerField(
        null=True,
        blank=True,
        help_text="N (degrees of freedom for the Student-t reference)"
    )
    epsilon = models.FloatField(
        null=True,
        blank=True,
        help_text="Shape rounding epsilon"
    )
    value_nats = models.FloatField(
        null=True,
        blank=True,
        help_text="Value in nats; empty when infinite"
    )
    saturated = models.BooleanField(
        default=False,
        help_text="Divergence is infinite"
    )

    class Meta:
        db_table = 'experiment_diagnostic_values'
        verbose_name = 'Diagnostic Value'
        verbose_name_plural = 'Diagnostic Values'
        ordering = ['run', 'diagnostic_name', 'n_elements', 'epsilon']

    def __str__(self):
        return f"{self.diagnostic_name} N={self.n_elements} eps={self.epsilon}: {self.value_nats}"


class DiversityResult(models.Model):
    """Fitted slope next to the theoretical diversity order."""

    run = models.ForeignKey(
        ExperimentRun,
        on_delete=models.CASCADE,
        related_name='diversity_results',
        help_text="Run"
    )
    mode = models.CharField(max_length=20, help_text="perfect or one_bit")
    method = models.CharField(max_length=30, help_text="Curve the slope was fitted on")
    n_elements = models.IntegerField(help_text="Number of IRS elements N")
    theoretical_order = models.CharField(
        max_length=20,
        help_text="Exact order as a fraction"
    )
    fitted_slope = models.FloatField(help_text="Least-squares slope")
    fit_from_db = models.FloatField(help_text="Lowest gamma_t used (dB)")
    fit_to_db = models.FloatField(help_text="Highest gamma_t used (dB)")
    n_points = models.IntegerField(help_text="Points in the fit")

    class Meta:
        db_table = 'experiment_diversity_results'
        verbose_name = 'Diversity Result'
        verbose_name_plural = 'Diversity Results'
        ordering = ['run', 'mode', 'n_elements']

    def __str__(self):
        return f"{self.mode} N={self.n_elements}: {self.fitted_slope:.3f} vs {self.theoretical_order}"
