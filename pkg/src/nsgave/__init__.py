"""Non-monotone smoothing Newton method for generalized absolute value equations.

Solves ``A x + B|x| = b`` by driving the smoothed system
``H(mu, x) = (mu, A x + B Phi(mu, x) - b)`` to zero, and ships the
benchmark HLCP families, exact/sampled solvability checks and a
sign-enumeration reference solver.
"""

from .core import (
    GaveProblem,
    HlcpProblem,
    HlcpSolution,
    Iterate,
    gave_solution_to_hlcp,
    h_eval,
    hlcp_to_gave,
    merit,
    reduced_newton_matrix,
    residual,
)
from .errors import GaveError
from .io import read_problem, write_problem
from .nsna import DEFAULT_GAMMA_RULE, SolveReport, SolverConfig, Status, solve
from .problems import ExampleSpec, example_gave, example_hlcp, known_solution, random_solvable_gave
from .smoothing import phi, phi_partials, phi_vec
from .verify import (
    bd_nonsingularity_sample,
    column_w_property,
    gave_w_property,
    sigma_sufficient_condition,
    sign_enumeration_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "GaveProblem",
    "HlcpProblem",
    "HlcpSolution",
    "Iterate",
    "gave_solution_to_hlcp",
    "h_eval",
    "hlcp_to_gave",
    "merit",
    "reduced_newton_matrix",
    "residual",
    "GaveError",
    "read_problem",
    "write_problem",
    "DEFAULT_GAMMA_RULE",
    "SolveReport",
    "SolverConfig",
    "Status",
    "solve",
    "ExampleSpec",
    "example_gave",
    "example_hlcp",
    "known_solution",
    "random_solvable_gave",
    "phi",
    "phi_partials",
    "phi_vec",
    "bd_nonsingularity_sample",
    "column_w_property",
    "gave_w_property",
    "sigma_sufficient_condition",
    "sign_enumeration_oracle",
]
