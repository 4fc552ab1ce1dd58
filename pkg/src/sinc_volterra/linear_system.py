"""Assembly of the Sinc-Nystrom and bordered (RZ) systems, and a dense LU solve.

Logical indices i, j in [-N, N] are stored at position i + N.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
import scipy.linalg

from .errors import AssemblyError, SingularMatrixError
from .sinc_core import SincGrid, delta_table
from .transforms import Kind, VariableTransform

__all__ = [
    "nystrom_operator",
    "assemble_nystrom",
    "assemble_rz",
    "lu_factor",
    "lu_solve",
    "omega_a",
    "omega_b",
]


def omega_a(t, a, b):
    return (b - t) / (b - a)


def omega_b(t, a, b):
    return (t - a) / (b - a)


def _sample_rhs(problem, ts):
    g = np.empty(len(ts))
    for i, t in enumerate(ts):
        g[i] = problem.rhs(t)
        if not math.isfinite(g[i]):
            raise AssemblyError(f"rhs is not finite at node {i} (t={t})", (i,))
    return g


def nystrom_operator(problem, transform: VariableTransform, grid: SincGrid):
    """Return ``(V, nodes)`` with V[i, j] = k(t_i, t_j) psi'(jh) h delta_{i-j}."""
    N, h, n = grid.N, grid.h, grid.n
    ts = transform.nodes(grid)
    weights = [transform.derivative(j * h) * h for j in grid.indices()]
    delta = delta_table(N)
    V = np.empty((n, n))
    for p in range(n):
        for q in range(n):
            kv = problem.kernel(ts[p], ts[q])
            if not math.isfinite(kv):
                raise AssemblyError(
                    f"kernel is not finite at (i, j)=({p - N}, {q - N})", (p - N, q - N)
                )
            V[p, q] = kv * weights[q] * delta[p - q]
    return V, ts


def assemble_nystrom(problem, transform: VariableTransform, grid: SincGrid):
    """Return ``(I - V, g_n)`` for the Sinc-Nystrom system."""
    V, ts = nystrom_operator(problem, transform, grid)
    A = np.eye(grid.n) - V
    return A, _sample_rhs(problem, ts)


def assemble_rz(problem, transform: VariableTransform, grid: SincGrid):
    """Return ``(E - V_rz, g_n)`` for the bordered collocation system.

    Columns -N and N of the Nystrom operator are replaced by the discrete
    Volterra operator applied to omega_a and omega_b; the interior block of
    E is the identity, its first and last columns carry omega_a, omega_b.
    """
    if transform.kind is not Kind.SE:
        raise ValueError("the bordered collocation system is defined for the SE transform only")
    a, b = transform.a, transform.b
    V, ts = nystrom_operator(problem, transform, grid)
    wa = omega_a(ts, a, b)
    wb = omega_b(ts, a, b)
    n = grid.n

    E = np.zeros((n, n))
    E[:, 0] = wa
    E[:, -1] = wb
    for p in range(1, n - 1):
        E[p, p] = 1.0

    Vrz = V.copy()
    Vrz[:, 0] = V @ wa
    Vrz[:, -1] = V @ wb
    return E - Vrz, _sample_rhs(problem, ts)


def lu_factor(A):
    """Partial-pivoting LU; raises :class:`SingularMatrixError` on a zero pivot."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=True)
    zero = np.flatnonzero(np.diag(lu) == 0.0)
    if zero.size:
        raise SingularMatrixError(int(zero[0]))
    return lu, piv


def lu_solve(A, rhs, factors=None):
    """Solve ``A x = rhs`` by LU with partial pivoting.

    ``factors`` may carry a previous :func:`lu_factor` result for ``A``.
    """
    rhs = np.asarray(rhs, dtype=float)
    if factors is None:
        factors = lu_factor(A)
    n = factors[0].shape[0]
    if rhs.shape[0] != n:
        raise ValueError(f"rhs has length {rhs.shape[0]}, matrix has order {n}")
    return scipy.linalg.lu_solve(factors, rhs, check_finite=False)
