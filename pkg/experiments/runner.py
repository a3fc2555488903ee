"""
Experiment Runner
=================
This module contains:
1. RunResult - what an executed spec produced
2. run_outage / run_diversity / run_diagnostics - library calls to CSV (+ SVG)
3. execute - dispatch on spec.command, optionally tracking an ExperimentRun

Every number written here comes from a library call; nothing is computed
in this module.
"""

import logging
from dataclasses import dataclass, field

from django.db import transaction

from asymptotics.diversity import diversity_report
from diagnostics.entropy import KlSpec, kl_double_rayleigh_vs_gamma, kl_student_t_vs_normal, mutual_information_xy
from montecarlo.sampling import mc_curve
from outage.engines import outage

from .csvio import (
    DIAGNOSTIC_COLUMNS,
    DIVERSITY_COLUMNS,
    OUTAGE_COLUMNS,
    diagnostic_rows,
    diversity_rows,
    file_sha256,
    outage_rows,
    write_csv,
)
from .models import CurvePoint, DiagnosticValue, DiversityResult
from .plotting import write_outage_svg

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    command: str
    csv_path: str
    csv_sha256: str
    row_count: int
    svg_path: str = None
    curves: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)


# ============================================================================
# COMMANDS
# ============================================================================

def run_outage(spec):
    """One curve per selected method; failed points stay in the CSV."""
    curves = [outage(method, spec.system, spec.quad, workers=spec.workers) for method in spec.analytic_methods]
    for method in spec.mc_methods:
        curves.append(mc_curve(method.removeprefix('mc_'), spec.system, spec.mc))

    rows = write_csv(spec.out, OUTAGE_COLUMNS, outage_rows(curves))
    svg_path = None
    if spec.svg:
        title = f'N = {spec.system.n_elements}, gamma_th = {spec.system.gamma_th_db:g} dB'
        svg_path = str(write_outage_svg(curves, spec.svg, title))
    return RunResult(
        command=spec.command,
        csv_path=spec.out,
        csv_sha256=file_sha256(spec.out),
        row_count=rows,
        svg_path=svg_path,
        curves=curves,
    )


def run_diversity(spec):
    """
    Fit the outage slope for spec.mode on spec.engine's curve.

    Raises:
        InsufficientPointsError: Fewer than two usable points in the fit window
    """
    report = diversity_report(
        spec.mode,
        spec.system,
        engine=spec.engine,
        fit_range_db=spec.fit_range_db,
        p_range=spec.p_range,
        q=spec.quad,
        workers=spec.workers,
    )
    rows = write_csv(spec.out, DIVERSITY_COLUMNS, diversity_rows([report], spec.system.sigma_d))
    return RunResult(
        command=spec.command,
        csv_path=spec.out,
        csv_sha256=file_sha256(spec.out),
        row_count=rows,
        reports=[report],
    )


def diagnostic_values(spec):
    """
    (name, N, epsilon, value_nats) tuples.

    kl_gamma for every (N, epsilon) pair, kl_gamma_rounded at the rounding the
    closed-form CDF makes, kl_student_t with N degrees of freedom, and the
    in-phase / quadrature mutual information once.
    """
    values = []
    for n in spec.n_values:
        for epsilon in spec.epsilons:
            kl = kl_double_rayleigh_vs_gamma(KlSpec(n, epsilon), spec.quad)
            values.append(('kl_gamma', n, epsilon, kl))
        rounded = KlSpec.from_rounding(n)
        values.append(('kl_gamma_rounded', n, rounded.epsilon, kl_double_rayleigh_vs_gamma(rounded, spec.quad)))
    for n in spec.n_values:
        values.append(('kl_student_t', n, None, kl_student_t_vs_normal(n, spec.quad).value_nats))
    values.append(('mutual_information', None, None, mutual_information_xy(spec.quad)))
    return values


def run_diagnostics(spec):
    values = diagnostic_values(spec)
    rows = write_csv(spec.out, DIAGNOSTIC_COLUMNS, diagnostic_rows(values))
    return RunResult(
        command=spec.command,
        csv_path=spec.out,
        csv_sha256=file_sha256(spec.out),
        row_count=rows,
        diagnostics=values,
    )


RUNNERS = {
    'outage': run_outage,
    'diversity': run_diversity,
    'diagnostics': run_diagnostics,
}


def execute(spec, run=None):
    """
    Run spec; with an ExperimentRun, track status and store the results.

    Exceptions propagate after the run is marked failed.
    """
    logger.info("Starting %s run %s", spec.command, run.run_number if run else '(unsaved)')
    if run is not None:
        run.mark_running()
    try:
        result = RUNNERS[spec.command](spec)
    except Exception as exc:
        if run is not None:
            run.mark_failed(f'{type(exc).__name__}: {exc}')
        raise

    if run is not None:
        with transaction.atomic():
            _store_results(run, result)
            run.csv_path = result.csv_path
            run.svg_path = result.svg_path or ''
            run.save(update_fields=['csv_path', 'svg_path', 'updated_at'])
            run.mark_completed(result.csv_sha256, result.row_count)
    logger.info("Finished %s run: %d rows, sha256 %s", spec.command, result.row_count, result.csv_sha256[:12])
    return result


# ============================================================================
# HELPER FUNCTIONS
# ============================================================================

def _store_results(run, result):
    CurvePoint.objects.bulk_create([
        CurvePoint(
            run=run,
            method=curve.method,
            n_elements=curve.n_elements,
            sigma_d=curve.sigma_d,
            gamma_th_db=curve.gamma_th_db,
            gamma_t_db=point.gamma_t_db,
            p_out=point.p_out,
            std_err=point.std_err,
            n_samples=point.n_samples,
            seed=point.seed,
            error=point.error,
        )
        for curve in result.curves
        for point in curve.points
    ])
    DiversityResult.objects.bulk_create([
        DiversityResult(
            run=run,
            mode=report.mode,
            method=report.method,
            n_elements=report.n_elements,
            theoretical_order=str(report.theoretical_order),
            fitted_slope=report.fitted_slope,
            fit_from_db=report.fit_range_db[0],
            fit_to_db=report.fit_range_db[1],
            n_points=report.n_points,
        )
        for report in result.reports
    ])
    DiagnosticValue.objects.bulk_create([
        DiagnosticValue(
            run=run,
            diagnostic_name=name,
            n_elements=n,
            epsilon=epsilon,
            value_nats=None if value == float('inf') else value,
            saturated=value == float('inf'),
        )
        for name, n, epsilon, value in result.diagnostics
    ])
