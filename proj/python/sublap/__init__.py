"""Sublinear elliptic Dirichlet problems via discrete Green potentials.

The heavy lifting lives in the C++ extension ``_sublap``; this package
re-exports the main operations: grid domains, grid measures, the Green
operator with its potentials and harmonic extensions, Kato moduli,
inequality checks, and the monotone fixed-point solver for
``-Laplace(u) = mu * u**q + nu`` with boundary data ``f``.
"""

from ._sublap import (
    BoundaryData,
    DegenerateDataError,
    DomainError,
    GreenOperator,
    GridDomain,
    GridFunction,
    GridMeasure,
    HypothesisViolation,
    KatoReport,
    NumericalError,
    SolveReport,
    analytic_disk_kernel,
    boundary_constant,
    boundary_from_values,
    check_iterated_inequality,
    check_lower_bound,
    continuity_modulus,
    dist_alpha_measure,
    finite_energy_threshold_sweep,
    fit_boundary_decay_exponent,
    grid_function_from_arrays,
    growth_constant,
    kato_modulus,
    lgamma_norm,
    measure_from_density,
    measure_from_masses,
    measure_with_atoms,
    newton_oracle,
    picard_solve,
    run_experiment_file,
    uniqueness_experiment,
    verify_estimates,
    zero_measure,
)

__all__ = [
    "BoundaryData",
    "DegenerateDataError",
    "DomainError",
    "GreenOperator",
    "GridDomain",
    "GridFunction",
    "GridMeasure",
    "HypothesisViolation",
    "KatoReport",
    "NumericalError",
    "SolveReport",
    "analytic_disk_kernel",
    "boundary_constant",
    "boundary_from_values",
    "check_iterated_inequality",
    "check_lower_bound",
    "continuity_modulus",
    "dist_alpha_measure",
    "finite_energy_threshold_sweep",
    "fit_boundary_decay_exponent",
    "grid_function_from_arrays",
    "growth_constant",
    "kato_modulus",
    "lgamma_norm",
    "measure_from_density",
    "measure_from_masses",
    "measure_with_atoms",
    "newton_oracle",
    "picard_solve",
    "run_experiment_file",
    "uniqueness_experiment",
    "verify_estimates",
    "zero_measure",
]
