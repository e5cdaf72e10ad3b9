"""Pseudo-spectral pairing experiments on anisotropic symbol manifolds.

Fields are complex numpy arrays whose shape is the grid (each axis a power
of two, at most four axes).  Experiment configs and reports are JSON strings
following the hdistlab-config-v1 / hdistlab-report-v1 schemas.
"""

from ._hdistlab import (
    apply_symbol,
    experiment_kinds,
    forward,
    fractional_derivative,
    hoermander_weight,
    inverse,
    lp_norm,
    pairing,
    project_to_p,
    rho,
    run_experiment,
    sobolev_norm,
    symbol_labels,
    truncate,
    verify,
)

__all__ = [
    "apply_symbol",
    "experiment_kinds",
    "forward",
    "fractional_derivative",
    "hoermander_weight",
    "inverse",
    "lp_norm",
    "pairing",
    "project_to_p",
    "rho",
    "run_experiment",
    "sobolev_norm",
    "symbol_labels",
    "truncate",
    "verify",
]
