"""
Experiment Specification
========================
This module contains:
1. ExperimentSpec - everything a run needs, validated
2. resolve_values - defaults < config file < command-line flags
3. build_spec - typed values to an ExperimentSpec
4. load_spec - both steps for a command

Config files are flat KEY=VALUE text read with decouple's RepositoryEnv;
lines starting with '#' are comments. Keys are listed in CONFIG_KEYS.
"""

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from decouple import Csv, RepositoryEnv
from django.conf import settings
from django.core.exceptions import ValidationError

from channel.geometry import (
    REFERENCE_GEOMETRY,
    STRONG_DIRECT_GEOMETRY,
    PhaseMode,
    SystemConfig,
    SystemGeometry,
    link_budget,
)
from core.numerics import QuadratureSpec
from montecarlo.streams import McConfig
from outage.engines import OutageMethod

COMMANDS = ('outage', 'diversity', 'diagnostics')

MC_METHODS = ('mc_perfect', 'mc_one_bit')

ENGINES = ('analytic', 'asymptotic')

GEOMETRIES = {
    'reference': REFERENCE_GEOMETRY,
    'strong_direct': STRONG_DIRECT_GEOMETRY,
}


def _optional_float(value):
    return None if value in (None, '') else float(value)


def _optional_text(value):
    return None if value in (None, '') else str(value)


CONFIG_KEYS = {
    'METHODS': Csv(),
    'MODE': str,
    'ENGINE': str,
    'GEOMETRY': str,
    'N_ELEMENTS': int,
    'SIGMA_D': _optional_float,
    'D_SR': _optional_float,
    'D_RD': _optional_float,
    'D_SD': _optional_float,
    'GAMMA_TH_DB': float,
    'SNR_FROM_DB': float,
    'SNR_TO_DB': float,
    'SNR_POINTS': int,
    'SEED': int,
    'SAMPLES': int,
    'STREAMS': int,
    'WORKERS': int,
    'OUT': _optional_text,
    'SVG': _optional_text,
    'QUAD_ABS_TOL': _optional_float,
    'QUAD_REL_TOL': _optional_float,
    'QUAD_MAX_SUBDIVISIONS': int,
    'FIT_FROM_DB': _optional_float,
    'FIT_TO_DB': _optional_float,
    'FIT_P_MIN': _optional_float,
    'FIT_P_MAX': _optional_float,
    'N_VALUES': Csv(cast=int),
    'EPSILONS': Csv(cast=float),
}

DEFAULTS = {
    'METHODS': ['perfect', 'one_bit'],
    'MODE': 'perfect',
    'ENGINE': 'analytic',
    'GEOMETRY': 'reference',
    'N_ELEMENTS': 8,
    'SIGMA_D': None,
    'D_SR': None,
    'D_RD': None,
    'D_SD': None,
    'GAMMA_TH_DB': 0.0,
    'SNR_FROM_DB': -40.0,
    'SNR_TO_DB': 20.0,
    'SNR_POINTS': 13,
    'SEED': 20200101,
    'SAMPLES': 1_000_000,
    'STREAMS': 1,
    'WORKERS': 1,
    'OUT': None,
    'SVG': None,
    'QUAD_ABS_TOL': None,
    'QUAD_REL_TOL': None,
    'QUAD_MAX_SUBDIVISIONS': None,
    'FIT_FROM_DB': None,
    'FIT_TO_DB': None,
    'FIT_P_MIN': 1e-6,
    'FIT_P_MAX': 1e-4,
    'N_VALUES': [1, 2, 4, 8, 16, 24, 32],
    'EPSILONS': [0.1, 0.3, 0.5],
}

# Parameters that do not change the CSV content
NON_OUTPUT_PARAMETERS = ('out', 'svg', 'workers', 'streams')


# ============================================================================
# EXPERIMENT SPEC
# ============================================================================

@dataclass(frozen=True)
class ExperimentSpec:
    """
    A validated experiment.

    methods applies to outage runs, mode/engine/fit windows to diversity
    runs and n_values/epsilons to diagnostics runs.
    """
    command: str
    system: SystemConfig
    out: str
    methods: tuple = ()
    mode: str = PhaseMode.PERFECT.value
    engine: str = 'analytic'
    geometry: str = 'reference'
    mc: McConfig = None
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    workers: int = 1
    svg: str = None
    fit_range_db: tuple = None
    p_range: tuple = None
    n_values: tuple = ()
    epsilons: tuple = ()

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"Unknown command {self.command!r}")
        if int(self.workers) < 1:
            raise ValidationError("workers must be at least 1.")

        if self.command == 'outage':
            if not self.methods:
                raise ValidationError("An outage run needs at least one method.")
            known = set(OutageMethod.values) | set(MC_METHODS)
            unknown = [m for m in self.methods if m not in known]
            if unknown:
                raise ValidationError(f"Unknown methods: {', '.join(unknown)}")
            if any(m in MC_METHODS for m in self.methods) and self.mc is None:
                raise ValidationError("Monte-Carlo methods need an McConfig.")

        if self.command == 'diversity':
            if self.mode not in PhaseMode.values:
                raise ValidationError(f"Unknown mode {self.mode!r}")
            if self.engine not in ENGINES:
                raise ValidationError(f"Unknown engine {self.engine!r}")

        if self.command == 'diagnostics':
            if not self.n_values or any(int(n) != n or n < 1 for n in self.n_values):
                raise ValidationError("n_values must be positive integers.")
            if any(not -0.5 <= e <= 0.5 for e in self.epsilons):
                raise ValidationError("epsilons must lie in [-0.5, 0.5].")

        for path in (self.out, self.svg):
            if path:
                _check_writable(path)

        object.__setattr__(self, 'methods', tuple(self.methods))
        object.__setattr__(self, 'n_values', tuple(int(n) for n in self.n_values))
        object.__setattr__(self, 'epsilons', tuple(float(e) for e in self.epsilons))

    @property
    def analytic_methods(self):
        return [m for m in self.methods if m not in MC_METHODS]

    @property
    def mc_methods(self):
        return [m for m in self.methods if m in MC_METHODS]

    def as_parameters(self):
        """JSON-safe dict; from_parameters rebuilds the same spec."""
        return {
            'command': self.command,
            'methods': list(self.methods),
            'mode': self.mode,
            'engine': self.engine,
            'geometry': self.geometry,
            'n_elements': self.system.n_elements,
            'sigma_d': self.system.sigma_d,
            'gamma_th_db': self.system.gamma_th_db,
            'grid_db': list(self.system.gamma_t_grid_db),
            'seed': self.mc.seed if self.mc else None,
            'samples': self.mc.n_samples if self.mc else None,
            'streams': self.mc.n_streams if self.mc else None,
            'quad': self.quad.as_dict(),
            'workers': self.workers,
            'fit_range_db': list(self.fit_range_db) if self.fit_range_db else None,
            'p_range': list(self.p_range) if self.p_range else None,
            'n_values': list(self.n_values),
            'epsilons': list(self.epsilons),
            'out': self.out,
            'svg': self.svg,
        }

    @classmethod
    def from_parameters(cls, params, out=None, svg=None):
        """Rebuild a spec, optionally redirecting its outputs."""
        mc = None
        if params.get('seed') is not None:
            mc = McConfig(seed=params['seed'], n_samples=params['samples'], n_streams=params.get('streams') or 1)
        return cls(
            command=params['command'],
            system=SystemConfig(
                n_elements=params['n_elements'],
                sigma_d=params['sigma_d'],
                gamma_th_db=params['gamma_th_db'],
                gamma_t_grid_db=tuple(params['grid_db']),
            ),
            out=out or params['out'],
            methods=tuple(params.get('methods') or ()),
            mode=params.get('mode', PhaseMode.PERFECT.value),
            engine=params.get('engine', 'analytic'),
            geometry=params.get('geometry', 'reference'),
            mc=mc,
            quad=QuadratureSpec(**params['quad']),
            workers=params.get('workers', 1),
            svg=svg if out else params.get('svg'),
            fit_range_db=tuple(params['fit_range_db']) if params.get('fit_range_db') else None,
            p_range=tuple(params['p_range']) if params.get('p_range') else None,
            n_values=tuple(params.get('n_values') or ()),
            epsilons=tuple(params.get('epsilons') or ()),
        )

    def fingerprint(self):
        """SHA-256 of the parameters that determine the CSV content."""
        params = {k: v for k, v in self.as_parameters().items() if k not in NON_OUTPUT_PARAMETERS}
        return hashlib.sha256(json.dumps(params, sort_keys=True).encode('utf-8')).hexdigest()


# ============================================================================
# RESOLUTION
# ============================================================================

def read_config_file(path):
    """
    Typed values from a KEY=VALUE file.

    Raises:
        FileNotFoundError: Missing file
        ValidationError: Unknown key or a value that does not parse
    """
    repository = RepositoryEnv(str(path))
    values = {}
    for key, raw in repository.data.items():
        if key not in CONFIG_KEYS:
            raise ValidationError(f"Unknown config key {key!r} in {path}")
        values[key] = _cast(key, raw)
    return values


def resolve_values(config_path=None, overrides=None):
    """
    Merge built-in defaults, the config file and flag values.

    Flag values of None are treated as not given; string flag values are
    cast the same way as file values.
    """
    values = dict(DEFAULTS)
    if config_path:
        values.update(read_config_file(config_path))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        values[key] = _cast(key, value) if isinstance(value, str) else value
    return values


def build_spec(command, values):
    """ExperimentSpec from resolved values."""
    geometry_name = values['GEOMETRY']
    if geometry_name not in GEOMETRIES:
        raise ValidationError(f"Unknown geometry {geometry_name!r}")
    base = GEOMETRIES[geometry_name]
    geometry = SystemGeometry(
        d_sr=values['D_SR'] or base.d_sr,
        d_rd=values['D_RD'] or base.d_rd,
        d_sd=values['D_SD'] or base.d_sd,
    )
    sigma_d = values['SIGMA_D'] if values['SIGMA_D'] is not None else link_budget(geometry).sigma_d

    points = values['SNR_POINTS']
    if points < 0:
        raise ValidationError("SNR_POINTS must be nonnegative.")
    if points > 1 and values['SNR_TO_DB'] <= values['SNR_FROM_DB']:
        raise ValidationError("SNR_TO_DB must exceed SNR_FROM_DB.")
    grid = tuple(float(g) for g in np.linspace(values['SNR_FROM_DB'], values['SNR_TO_DB'], points))

    system = SystemConfig(
        n_elements=values['N_ELEMENTS'],
        sigma_d=sigma_d,
        gamma_th_db=values['GAMMA_TH_DB'],
        gamma_t_grid_db=grid,
    )

    default_quad = QuadratureSpec.default()
    quad = QuadratureSpec(
        abs_tol=values['QUAD_ABS_TOL'] or default_quad.abs_tol,
        rel_tol=values['QUAD_REL_TOL'] or default_quad.rel_tol,
        max_subdivisions=values['QUAD_MAX_SUBDIVISIONS'] or default_quad.max_subdivisions,
    )

    fit_range = None
    if values['FIT_FROM_DB'] is not None or values['FIT_TO_DB'] is not None:
        fit_range = (values['FIT_FROM_DB'], values['FIT_TO_DB'])
    p_range = None
    if values['FIT_P_MIN'] is not None or values['FIT_P_MAX'] is not None:
        p_range = (values['FIT_P_MIN'] or 0.0, values['FIT_P_MAX'] or 1.0)

    out = values['OUT'] or str(Path(settings.IRSLAB_OUTPUT_DIR) / f'{command}.csv')

    return ExperimentSpec(
        command=command,
        system=system,
        out=out,
        methods=tuple(m.strip() for m in values['METHODS'] if m.strip()),
        mode=values['MODE'],
        engine=values['ENGINE'],
        geometry=geometry_name,
        mc=McConfig(seed=values['SEED'], n_samples=values['SAMPLES'], n_streams=values['STREAMS']),
        quad=quad,
        workers=values['WORKERS'],
        svg=values['SVG'],
        fit_range_db=fit_range,
        p_range=p_range,
        n_values=tuple(values['N_VALUES']),
        epsilons=tuple(values['EPSILONS']),
    )


def load_spec(command, config_path=None, overrides=None):
    return build_spec(command, resolve_values(config_path, overrides))


# ============================================================================
# HELPER FUNCTIONS
# ============================================================================

def _cast(key, raw):
    try:
        return CONFIG_KEYS[key](raw)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"Invalid value {raw!r} for {key}: {exc}") from exc


def _check_writable(path):
    """The nearest existing ancestor of path's directory must be writable."""
    directory = Path(path).resolve().parent
    while not directory.exists():
        directory = directory.parent
    if not os.access(directory, os.W_OK):
        raise ValidationError(f"Output directory {directory} is not writable.")
