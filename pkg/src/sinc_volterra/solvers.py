"""Sinc-Nystrom, Sinc-collocation (Stenger, DE) and bordered RZ collocation solvers.

Every solution object evaluates on the closed interval [a, b].  The
variable map diverges at the endpoints, so those points (and anything
within one ulp of them) go through the analytic limits instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linear_system
from .errors import DomainError
from .problem import VolterraProblem
from .sinc_core import SincGrid, indefinite_basis, sinc_basis
from .transforms import Kind, VariableTransform, mesh_size

__all__ = [
    "NystromSolution",
    "CollocationSolution",
    "RZSolution",
    "make_grid",
    "solve_nystrom",
    "evaluate_nystrom",
    "solve_collocation",
    "evaluate_collocation",
    "generalized_sinc_approximation",
    "solve_rz",
    "evaluate_rz",
    "theorem4_discrepancy",
]


def _locate(transform: VariableTransform, t: float) -> Optional[str]:
    """Return "a", "b" or None (interior); reject points outside [a, b]."""
    a, b = transform.a, transform.b
    if not (a <= t <= b):
        raise DomainError(f"t={t!r} lies outside [{a}, {b}]")
    if t <= math.nextafter(a, b):
        return "a"
    if t >= math.nextafter(b, a):
        return "b"
    return None


def _abscissa(transform: VariableTransform, grid: SincGrid, nodes: np.ndarray, t: float) -> float:
    """phi(t), taking the exact grid abscissa jh when t is bit-identical to a node.

    Near an endpoint a node is known only to one ulp of t, and phi amplifies
    that rounding; snapping keeps the interpolation property exact.
    """
    q = int(np.searchsorted(nodes, t))
    if q < grid.n and nodes[q] == t:
        return (q - grid.N) * grid.h
    return transform.inverse(t)


def make_grid(problem: VolterraProblem, kind, N: int):
    """Transform and Sinc grid with h from the mesh-size formula for ``kind``."""
    kind = Kind(kind)
    params = problem.mesh(kind).check(kind)
    h = mesh_size(kind, N, params)
    return VariableTransform(kind, problem.a, problem.b), SincGrid(N, h)


@dataclass(frozen=True, eq=False)
class NystromSolution:
    """Node values u_n of the Sinc-Nystrom system and the problem they solve.

    ``matrix`` and ``rhs_vector`` are the assembled system, kept so the
    residual can be re-checked.
    """

    problem: VolterraProblem
    transform: VariableTransform
    grid: SincGrid
    coeffs: np.ndarray
    matrix: Optional[np.ndarray] = None
    rhs_vector: Optional[np.ndarray] = None

    def __post_init__(self):
        h = self.grid.h
        ts = self.transform.nodes(self.grid)
        w = np.array([self.transform.derivative(j * h) for j in self.grid.indices()])
        object.__setattr__(self, "nodes", ts)
        object.__setattr__(self, "_weights", self.coeffs * w)

    def residual(self) -> float:
        """Max-norm residual of the stored system at ``coeffs``."""
        return float(np.max(np.abs(self.matrix @ self.coeffs - self.rhs_vector)))

    def __call__(self, t):
        return evaluate_nystrom(self, t)


@dataclass(frozen=True, eq=False)
class CollocationSolution:
    """Generalized Sinc approximation built from node values.

    Used both for the collocation methods (node values from the Nystrom
    solve) and for approximating an arbitrary sampled function.
    """

    transform: VariableTransform
    grid: SincGrid
    node_values: np.ndarray
    boundary_left: float
    boundary_right: float
    sinc_coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nodes", self.transform.nodes(self.grid))

    def __call__(self, t):
        return evaluate_collocation(self, t)


@dataclass(frozen=True, eq=False)
class RZSolution:
    """Coefficients c_{-N}..c_N of the bordered expansion."""

    transform: VariableTransform
    grid: SincGrid
    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nodes", self.transform.nodes(self.grid))

    def __call__(self, t):
        return evaluate_rz(self, t)


def nystrom_from_system(problem, transform, grid, A, g, factors=None) -> NystromSolution:
    u = linear_system.lu_solve(A, g, factors=factors)
    return NystromSolution(problem, transform, grid, u, A, g)


def solve_nystrom(problem: VolterraProblem, kind, N: int) -> NystromSolution:
    transform, grid = make_grid(problem, kind, N)
    A, g = linear_system.assemble_nystrom(problem, transform, grid)
    return nystrom_from_system(problem, transform, grid, A, g)


def evaluate_nystrom(sol: NystromSolution, t: float) -> float:
    """u_N(t) = g(t) + sum_j k(t, t_j) u_j psi'(jh) J(j, h)(phi(t))."""
    problem, grid = sol.problem, sol.grid
    where = _locate(sol.transform, t)
    if where == "a":
        return problem.rhs(problem.a)
    k, ts, w, h = problem.kernel, sol.nodes, sol._weights, grid.h
    if where == "b":
        b = problem.b
        return float(problem.rhs(b) + h * sum(k(b, ts[q]) * w[q] for q in range(grid.n)))
    x = _abscissa(sol.transform, grid, ts, t)
    acc = 0.0
    for q, j in enumerate(grid.indices()):
        acc += k(t, ts[q]) * w[q] * indefinite_basis(j, h, x)
    return float(problem.rhs(t) + acc)


def generalized_sinc_approximation(transform: VariableTransform, grid: SincGrid, values):
    """Generalized Sinc approximation through ``values`` sampled at the nodes.

    ``values`` may also be a callable, which is then sampled.
    """
    ts = transform.nodes(grid)
    if callable(values):
        values = np.array([values(t) for t in ts])
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.n,):
        raise ValueError(f"expected {grid.n} node values, got shape {values.shape}")
    left, right = float(values[0]), float(values[-1])
    a, b = transform.a, transform.b
    coeffs = values - left * linear_system.omega_a(ts, a, b) - right * linear_system.omega_b(ts, a, b)
    return CollocationSolution(transform, grid, values, left, right, coeffs)


def collocation_from_nystrom(nys: NystromSolution) -> CollocationSolution:
    return generalized_sinc_approximation(nys.transform, nys.grid, nys.coeffs)


def solve_collocation(problem: VolterraProblem, kind, N: int) -> CollocationSolution:
    """Sinc-collocation: the Nystrom node values, extended by generalized Sinc approximation."""
    return collocation_from_nystrom(solve_nystrom(problem, kind, N))


def evaluate_collocation(sol: CollocationSolution, t: float) -> float:
    where = _locate(sol.transform, t)
    if where == "a":
        return sol.boundary_left
    if where == "b":
        return sol.boundary_right
    a, b = sol.transform.a, sol.transform.b
    x = _abscissa(sol.transform, sol.grid, sol.nodes, t)
    h, c = sol.grid.h, sol.sinc_coeffs
    acc = 0.0
    for q, j in enumerate(sol.grid.indices()):
        acc += c[q] * sinc_basis(j, h, x)
    return float(acc + sol.boundary_left * (b - t) / (b - a) + sol.boundary_right * (t - a) / (b - a))


def rz_from_system(transform, grid, A, g) -> RZSolution:
    return RZSolution(transform, grid, linear_system.lu_solve(A, g))


def solve_rz(problem: VolterraProblem, N: int) -> RZSolution:
    transform, grid = make_grid(problem, Kind.SE, N)
    A, g = linear_system.assemble_rz(problem, transform, grid)
    return rz_from_system(transform, grid, A, g)


def evaluate_rz(sol: RZSolution, t: float) -> float:
    """c_{-N} omega_a(t) + sum_{|j|<N} c_j S(j, h)(phi(t)) + c_N omega_b(t)."""
    c = sol.c
    where = _locate(sol.transform, t)
    if where == "a":
        return float(c[0])
    if where == "b":
        return float(c[-1])
    a, b = sol.transform.a, sol.transform.b
    x = _abscissa(sol.transform, sol.grid, sol.nodes, t)
    N, h = sol.grid.N, sol.grid.h
    acc = 0.0
    for j in range(-N + 1, N):
        acc += c[j + N] * sinc_basis(j, h, x)
    return float(c[0] * (b - t) / (b - a) + acc + c[-1] * (t - a) / (b - a))


def theorem4_discrepancy(problem: VolterraProblem, N: int):
    """Compare Stenger's SE collocation with the bordered RZ solution.

    Returns ``(node_gap, scale, endpoint_gap)``: the largest difference of
    the two approximants over the SE nodes, ``1 + max|u_N|`` at the nodes,
    and the larger of the differences at t = a and t = b.
    """
    v = solve_collocation(problem, Kind.SE, N)
    w = solve_rz(problem, N)
    ts = v.transform.nodes(v.grid)
    node_gap = max(abs(evaluate_collocation(v, t) - evaluate_rz(w, t)) for t in ts)
    scale = 1.0 + float(np.max(np.abs(v.node_values)))
    endpoint_gap = max(abs(v(problem.a) - w(problem.a)), abs(v(problem.b) - w(problem.b)))
    return node_gap, scale, endpoint_gap
