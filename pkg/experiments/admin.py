"""
Experiments Admin Configuration
===============================
Register experiment models with Django admin interface.
"""

from django.contrib import admin
from django.utils.html import format_html

from .models import CurvePoint, DiagnosticValue, DiversityResult, ExperimentRun


class DiversityResultInline(admin.TabularInline):
    """Inline for slope fits."""
    model = DiversityResult
    extra = 0
    fields = ['mode', 'method', 'n_elements', 'theoretical_order', 'fitted_slope', 'fit_from_db', 'fit_to_db']
    readonly_fields = fields


class DiagnosticValueInline(admin.TabularInline):
    """Inline for diagnostic rows."""
    model = DiagnosticValue
    extra = 0
    fields = ['diagnostic_name', 'n_elements', 'epsilon', 'value_nats', 'saturated']
    readonly_fields = fields


@admin.register(ExperimentRun)
class ExperimentRunAdmin(admin.ModelAdmin):
    list_display = ['run_number', 'command', 'status_badge', 'is_golden', 'row_count', 'created_at']
    list_filter = ['command', 'status', 'is_golden']
    search_fields = ['run_number', 'fingerprint', 'csv_sha256']
    readonly_fields = [
        'id', 'run_number', 'fingerprint', 'csv_sha256', 'row_count',
        'started_at', 'finished_at', 'created_at', 'updated_at', 'deleted_at'
    ]
    inlines = [DiversityResultInline, DiagnosticValueInline]

    fieldsets = (
        ('Run', {
            'fields': ('run_number', 'command', 'status', 'is_golden')
        }),
        ('Parameters', {
            'fields': ('parameters', 'fingerprint')
        }),
        ('Output', {
            'fields': ('csv_path', 'svg_path', 'csv_sha256', 'row_count', 'error_message')
        }),
        ('Timing', {
            'fields': ('started_at', 'finished_at')
        }),
        ('Audit', {
            'fields': ('id', 'created_at', 'updated_at', 'deleted_at'),
            'classes': ('collapse',)
        }),
    )

    def status_badge(self, obj):
        """Display status with color."""
        colors = {
            'COMPLETED': 'green',
            'FAILED': 'red',
            'RUNNING': 'orange',
            'QUEUED': 'blue',
        }
        return format_html(
            '<span style="color: {};">{}</span>',
            colors.get(obj.status, 'gray'),
            obj.get_status_display(),
        )
    status_badge.short_description = 'Status'


@admin.register(CurvePoint)
class CurvePointAdmin(admin.ModelAdmin):
    list_display = ['run', 'method', 'n_elements', 'gamma_t_db', 'p_out', 'std_err']
    list_filter = ['method', 'n_elements']
    search_fields = ['run__run_number', 'method']


@admin.register(DiagnosticValue)
class DiagnosticValueAdmin(admin.ModelAdmin):
    list_display = ['run', 'diagnostic_name', 'n_elements', 'epsilon', 'value_nats', 'saturated']
    list_filter = ['diagnostic_name']
    search_fields = ['run__run_number']


@admin.register(DiversityResult)
class DiversityResultAdmin(admin.ModelAdmin):
    list_display = ['run', 'mode', 'method', 'n_elements', 'theoretical_order', 'fitted_slope']
    list_filter = ['mode', 'method']
    search_fields = ['run__run_number']
