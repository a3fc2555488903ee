"""
CSV Output
==========
This module contains:
1. OUTAGE_COLUMNS / DIVERSITY_COLUMNS / DIAGNOSTIC_COLUMNS - header rows
2. outage_rows / diversity_rows / diagnostic_rows - result objects to rows
3. write_csv - header plus rows, '\n' line endings
4. file_sha256 - checksum of a written file

Floats are written with repr() so reruns are byte-identical; missing values
are empty fields and infinite divergences are written as 'inf'.
"""

import csv
import hashlib
import math
from pathlib import Path

OUTAGE_COLUMNS = [
    'method', 'N', 'sigma_d', 'gamma_th_db', 'gamma_t_db',
    'p_out', 'std_err', 'n_samples', 'seed', 'error',
]

DIVERSITY_COLUMNS = [
    'mode', 'method', 'N', 'sigma_d', 'theoretical_order',
    'fitted_slope', 'fit_from_db', 'fit_to_db', 'n_points',
]

DIAGNOSTIC_COLUMNS = ['diagnostic_name', 'N', 'epsilon', 'value_nats']


def format_value(value):
    """One CSV field."""
    if value is None:
        return ''
    if isinstance(value, float):
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return repr(value)
    return str(value)


def outage_rows(curves):
    for curve in curves:
        for point in curve.points:
            yield [
                curve.method,
                curve.n_elements,
                float(curve.sigma_d),
                float(curve.gamma_th_db),
                float(point.gamma_t_db),
                None if point.p_out is None else float(point.p_out),
                None if point.std_err is None else float(point.std_err),
                point.n_samples,
                point.seed,
                point.error,
            ]


def diversity_rows(reports, sigma_d):
    for report in reports:
        low, high = report.fit_range_db
        yield [
            report.mode,
            report.method,
            report.n_elements,
            float(sigma_d),
            str(report.theoretical_order),
            float(report.fitted_slope),
            float(low),
            float(high),
            report.n_points,
        ]


def diagnostic_rows(values):
    """values: iterable of (name, n, epsilon, value_nats)."""
    for name, n, epsilon, value in values:
        yield [name, n, None if epsilon is None else float(epsilon), float(value)]


def write_csv(path, columns, rows):
    """
    Write a header and rows to path, creating parent directories.

    Returns:
        int: Number of data rows written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, 'w', newline='', encoding='utf-8') as csvfile:
        writer = csv.writer(csvfile, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
            count += 1
    return count


def file_sha256(path):
    digest = hashlib.sha256()
    with open(path, 'rb') as handle:
        for block in iter(lambda: handle.read(65536), b''):
            digest.update(block)
    return digest.hexdigest()


def read_csv(path):
    """Rows of a written CSV as dicts keyed by header."""
    with open(path, newline='', encoding='utf-8') as csvfile:
        return list(csv.DictReader(csvfile))
