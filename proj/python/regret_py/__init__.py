"""Python access to the regret-optimal trajectory library."""

from ._regret import (
    BoundReport,
    MetaRun,
    PhiTildeSolution,
    SolveResult,
    gd_run,
    nesterov_run,
    psi,
    quadratic_regret,
    rate_bounds,
    rosenbrock,
    rosenbrock_gradient,
    run_meta_quadratic,
    run_meta_rosenbrock,
    solve_finite_quadratic,
    solve_phi_tilde,
    closed_form_trajectory,
)

__all__ = [
    "BoundReport",
    "MetaRun",
    "PhiTildeSolution",
    "SolveResult",
    "closed_form_trajectory",
    "gd_run",
    "nesterov_run",
    "psi",
    "quadratic_regret",
    "rate_bounds",
    "rosenbrock",
    "rosenbrock_gradient",
    "run_meta_quadratic",
    "run_meta_rosenbrock",
    "solve_finite_quadratic",
    "solve_phi_tilde",
]
