# Generated by Django 5.0.1 on 2026-09-14 10:12

import django.db.models.deletion
import uuid
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, help_text='Unique identifier (UUID)', primary_key=True, serialize=False)),
                ('created_at', models.DateTimeField(auto_now_add=True, help_text='Timestamp when record was created')),
                ('updated_at', models.DateTimeField(auto_now=True, help_text='Timestamp when record was last updated')),
                ('deleted_at', models.DateTimeField(blank=True, help_text='Timestamp when record was soft-deleted', null=True)),
                ('run_number', models.CharField(blank=True, help_text='Run number (RUN-YYYY-NNNN)', max_length=50, unique=True)),
                ('command', models.CharField(choices=[('outage', 'Outage sweep'), ('diversity', 'Diversity order'), ('diagnostics', 'Diagnostics')], help_text='Command that produced the run', max_length=20)),
                ('status', models.CharField(choices=[('PENDING', 'Pending'), ('QUEUED', 'Queued'), ('RUNNING', 'Running'), ('COMPLETED', 'Completed'), ('FAILED', 'Failed')], default='PENDING', help_text='Run status', max_length=20)),
                ('parameters', models.JSONField(default=dict, help_text='Resolved experiment parameters')),
                ('fingerprint', models.CharField(db_index=True, help_text='SHA-256 of the parameters that determine the output', max_length=64)),
                ('csv_path', models.CharField(blank=True, help_text='CSV output path', max_length=500)),
                ('svg_path', models.CharField(blank=True, help_text='SVG output path', max_length=500)),
                ('csv_sha256', models.CharField(blank=True, help_text='SHA-256 of the CSV content', max_length=64)),
                ('row_count', models.IntegerField(default=0, help_text='Number of CSV data rows')),
                ('is_golden', models.BooleanField(default=False, help_text='Reference run for regression checks')),
                ('error_message', models.TextField(blank=True, help_text='Failure reason')),
                ('started_at', models.DateTimeField(blank=True, help_text='Execution start', null=True)),
                ('finished_at', models.DateTimeField(blank=True, help_text='Execution end', null=True)),
            ],
            options={
                'verbose_name': 'Experiment Run',
                'verbose_name_plural': 'Experiment Runs',
                'db_table': 'experiment_runs',
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['command', 'status'], name='exp_run_command_status_idx'), models.Index(fields=['fingerprint', 'is_golden'], name='exp_run_fingerprint_gold_idx')],
            },
        ),
        migrations.CreateModel(
            name='CurvePoint',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('method', models.CharField(help_text='Outage method (perfect, one_bit, mc_perfect, ...)', max_length=30)),
                ('n_elements', models.IntegerField(help_text='Number of IRS elements N')),
                ('sigma_d', models.FloatField(help_text='Direct-link Rayleigh scale')),
                ('gamma_th_db', models.FloatField(help_text='SNR threshold (dB)')),
                ('gamma_t_db', models.FloatField(help_text='Transmit SNR (dB)')),
                ('p_out', models.FloatField(blank=True, help_text='Outage probability; empty when the point failed', null=True)),
                ('std_err', models.FloatField(blank=True, help_text='Monte-Carlo standard error', null=True)),
                ('n_samples', models.BigIntegerField(blank=True, help_text='Monte-Carlo samples', null=True)),
                ('seed', models.DecimalField(blank=True, decimal_places=0, help_text='Monte-Carlo seed', max_digits=20, null=True)),
                ('error', models.TextField(blank=True, help_text='Engine error at this point')),
                ('run', models.ForeignKey(help_text='Run', on_delete=django.db.models.deletion.CASCADE, related_name='curve_points', to='experiments.experimentrun')),
            ],
            options={
                'verbose_name': 'Curve Point',
                'verbose_name_plural': 'Curve Points',
                'db_table': 'experiment_curve_points',
                'ordering': ['run', 'method', 'gamma_t_db'],
            },
        ),
        migrations.CreateModel(
            name='DiagnosticValue',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('diagnostic_name', models.CharField(help_text='kl_gamma, kl_student_t or mutual_information', max_length=50)),
                ('n_elements', models.IntegerField(blank=True, help_text='N (degrees of freedom for the Student-t reference)', null=True)),
                ('epsilon', models.FloatField(blank=True, help_text='Shape rounding epsilon', null=True)),
                ('value_nats', models.FloatField(blank=True, help_text='Value in nats; empty when infinite', null=True)),
                ('saturated', models.BooleanField(default=False, help_text='Divergence is infinite')),
                ('run', models.ForeignKey(help_text='Run', on_delete=django.db.models.deletion.CASCADE, related_name='diagnostic_values', to='experiments.experimentrun')),
            ],
            options={
                'verbose_name': 'Diagnostic Value',
                'verbose_name_plural': 'Diagnostic Values',
                'db_table': 'experiment_diagnostic_values',
                'ordering': ['run', 'diagnostic_name', 'n_elements', 'epsilon'],
            },
        ),
        migrations.CreateModel(
            name='DiversityResult',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('mode', models.CharField(help_text='perfect or one_bit', max_length=20)),
                ('method', models.CharField(help_text='Curve the slope was fitted on', max_length=30)),
                ('n_elements', models.IntegerField(help_text='Number of IRS elements N')),
                ('theoretical_order', models.CharField(help_text='Exact order as a fraction', max_length=20)),
                ('fitted_slope', models.FloatField(help_text='Least-squares slope')),
                ('fit_from_db', models.FloatField(help_text='Lowest gamma_t used (dB)')),
                ('fit_to_db', models.FloatField(help_text='Highest gamma_t used (dB)')),
                ('n_points', models.IntegerField(help_text='Points in the fit')),
                ('run', models.ForeignKey(help_text='Run', on_delete=django.db.models.deletion.CASCADE, related_name='diversity_results', to='experiments.experimentrun')),
            ],
            options={
                'verbose_name': 'Diversity Result',
                'verbose_name_plural': 'Diversity Results',
                'db_table': 'experiment_diversity_results',
                'ordering': ['run', 'mode', 'n_elements'],
            },
        ),
    ]
