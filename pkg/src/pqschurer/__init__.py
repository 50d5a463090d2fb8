"""Revised (p,q)-Bernstein-Schurer operators: evaluation, moments, error
bounds and convergence experiments."""
from .calculus import (
    PQParams,
    expand_product,
    falling_product,
    pq_binomial,
    pq_factorial,
    pq_integer,
)
from .convergence import (
    ConvergenceReport,
    ParamSchedule,
    korovkin_experiment,
    make_schedule,
    omega2_ratio_experiment,
    voronovskaja_experiment,
)
from .estimator import PQSchurerApproximator, PQSchurerBasis
from .functions import FunctionHandle, resolve_function
from .moments import (
    MomentSet,
    delta_m,
    delta_m_squared_direct,
    lipschitz_bound_check,
    modulus_of_continuity,
    moments_closed_form,
    second_modulus,
    theorem32_bound_check,
)
from .operator import (
    OperatorSpec,
    WeightTable,
    classical_schurer_evaluate,
    evaluate,
    evaluate_grid,
    evaluate_unnormalized,
    q_schurer_evaluate,
    weight_table,
)

__all__ = [
    "ConvergenceReport",
    "FunctionHandle",
    "MomentSet",
    "OperatorSpec",
    "PQParams",
    "PQSchurerApproximator",
    "PQSchurerBasis",
    "ParamSchedule",
    "WeightTable",
    "classical_schurer_evaluate",
    "delta_m",
    "delta_m_squared_direct",
    "evaluate",
    "evaluate_grid",
    "evaluate_unnormalized",
    "expand_product",
    "falling_product",
    "korovkin_experiment",
    "lipschitz_bound_check",
    "make_schedule",
    "modulus_of_continuity",
    "moments_closed_form",
    "omega2_ratio_experiment",
    "pq_binomial",
    "pq_factorial",
    "pq_integer",
    "q_schurer_evaluate",
    "resolve_function",
    "second_modulus",
    "theorem32_bound_check",
    "voronovskaja_experiment",
    "weight_table",
]

__version__ = "0.1.0"
