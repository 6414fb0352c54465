"""Logarithmic potential operator on planar domains.

Shapes are given as compact strings ("disc:1", "annulus:1,0.5"), dicts in
the logpot.shape/1 format, or Shape objects. Results come back as plain
dicts matching the JSON written by the ``logpot`` command-line tool.
"""

from ._logpot import (
    ConvergenceError,
    InputError,
    LogpotError,
    Mask,
    Shape,
    asymptotic_neg,
    bessel_zero,
    energy,
    experiment,
    experiment_names,
    leading_eigs,
    matrix,
    mu_modified,
    neg_eig,
    polarization_gap,
    polarize,
    polarize_values,
    rasterize,
    refine,
    rho_n,
    robin_constant,
    schwarz,
    solve,
    tdiam,
)

__all__ = [
    "ConvergenceError",
    "InputError",
    "LogpotError",
    "Mask",
    "Shape",
    "asymptotic_neg",
    "bessel_zero",
    "energy",
    "experiment",
    "experiment_names",
    "leading_eigs",
    "matrix",
    "mu_modified",
    "neg_eig",
    "polarization_gap",
    "polarize",
    "polarize_values",
    "rasterize",
    "refine",
    "rho_n",
    "robin_constant",
    "schwarz",
    "solve",
    "tdiam",
]
