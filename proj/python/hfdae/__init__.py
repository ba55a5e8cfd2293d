"""Hybrid-function solver for fractional differential-algebraic equations."""

from ._hfdae import (
    CatalogError,
    EvaluationError,
    Grid,
    HfSeries,
    OracleError,
    SamplingError,
    evaluate,
    expand_function,
    expand_samples,
    frac_integrate,
    gamma_fn,
    has_exact_solution,
    op_matrices,
    problem_ids,
    rl_integral_power,
    rl_integral_quadrature,
    solve_problem,
    toeplitz_apply,
)

__all__ = [
    "CatalogError",
    "EvaluationError",
    "Grid",
    "HfSeries",
    "OracleError",
    "SamplingError",
    "evaluate",
    "expand_function",
    "expand_samples",
    "frac_integrate",
    "gamma_fn",
    "has_exact_solution",
    "op_matrices",
    "problem_ids",
    "rl_integral_power",
    "rl_integral_quadrature",
    "solve_problem",
    "toeplitz_apply",
]
