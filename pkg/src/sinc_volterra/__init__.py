"""Sinc-based solvers for Volterra integral equations of the second kind."""

from .errors import AssemblyError, DomainError, ParameterError, SingularMatrixError
from .problem import VolterraProblem, get_problem, make_problem, pm45, reduce_ivp, rz4
from .sinc_core import SincGrid, delta_weight, indefinite_basis, sinc_basis, sine_integral
from .solvers import (
    CollocationSolution,
    NystromSolution,
    RZSolution,
    evaluate_collocation,
    evaluate_nystrom,
    evaluate_rz,
    generalized_sinc_approximation,
    solve_collocation,
    solve_nystrom,
    solve_rz,
)
from .transforms import Kind, MeshParameters, VariableTransform, mesh_size

__version__ = "0.1.0"
