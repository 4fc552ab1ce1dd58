"""Volterra equations u(t) - int_a^t k(t, s) u(s) ds = g(t) and built-in benchmarks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import ParameterError
from .transforms import Kind, MeshParameters

__all__ = [
    "VolterraProblem",
    "make_problem",
    "reduce_ivp",
    "rz4",
    "pm45",
    "BUILTIN_PROBLEMS",
    "get_problem",
    "register_problem",
]

Kernel = Callable[[float, float], float]
Func = Callable[[float], float]


@dataclass(frozen=True)
class VolterraProblem:
    a: float
    b: float
    kernel: Kernel
    rhs: Func
    mesh_se: MeshParameters
    mesh_de: MeshParameters
    exact: Optional[Func] = None

    def mesh(self, kind) -> MeshParameters:
        return self.mesh_se if Kind(kind) is Kind.SE else self.mesh_de


def make_problem(a, b, kernel, rhs, mesh_se, mesh_de, exact=None, n_samples=17):
    """Validate and build a :class:`VolterraProblem`.

    ``kernel`` and ``rhs`` are sampled on an ``n_samples`` equispaced grid
    and must return finite values there.
    """
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise ParameterError(f"need finite a < b, got a={a}, b={b}")
    mesh_se = MeshParameters(*mesh_se) if isinstance(mesh_se, tuple) else mesh_se
    mesh_de = MeshParameters(*mesh_de) if isinstance(mesh_de, tuple) else mesh_de
    mesh_se.check(Kind.SE)
    mesh_de.check(Kind.DE)
    ts = [a + (b - a) * i / (n_samples - 1) for i in range(n_samples)]
    for t in ts:
        if not math.isfinite(rhs(t)):
            raise ParameterError(f"rhs is not finite at t={t}")
        for s in ts:
            if not math.isfinite(kernel(t, s)):
                raise ParameterError(f"kernel is not finite at (t, s)=({t}, {s})")
    return VolterraProblem(a, b, kernel, rhs, mesh_se, mesh_de, exact)


def reduce_ivp(a, b, ktilde, gtilde, u_a, antiderivative_of_gtilde,
               mesh_se=(3.14, 1.0), mesh_de=(1.57, 1.0), exact=None):
    """Rewrite u' = ktilde(t) u + gtilde(t), u(a) = u_a as a Volterra equation.

    The caller supplies G(t) = int_a^t gtilde(s) ds with G(a) = 0; the result
    has kernel k(t, s) = ktilde(s) and right-hand side u_a + G(t).
    ``gtilde`` is kept only for the caller's reference.
    """
    del gtilde
    G = antiderivative_of_gtilde
    if abs(G(a)) > 1e-12:
        raise ParameterError(f"antiderivative must vanish at a, got G(a)={G(a)}")

    def kernel(t, s):
        return ktilde(s)

    def rhs(t):
        return u_a + G(t)

    return make_problem(a, b, kernel, rhs, mesh_se, mesh_de, exact)


def _rz4():
    # u(t) + int_0^t t s u(s) ds = exp(-t^2) + t/2 (1 - exp(-t^2))
    return make_problem(
        0.0, 1.0,
        kernel=lambda t, s: -t * s,
        rhs=lambda t: math.exp(-t * t) + 0.5 * t * (1.0 - math.exp(-t * t)),
        mesh_se=MeshParameters(3.14, 1.0),
        mesh_de=MeshParameters(1.57, 1.0),
        exact=lambda t: math.exp(-t * t),
    )


def _pm45():
    # u(t) - 6 int_0^t (sqrt t - sqrt s) u(s) ds = 1 + sqrt t - 2 t sqrt t - t^2
    return make_problem(
        0.0, 1.0,
        kernel=lambda t, s: 6.0 * (math.sqrt(t) - math.sqrt(s)),
        rhs=lambda t: 1.0 + math.sqrt(t) - 2.0 * t * math.sqrt(t) - t * t,
        mesh_se=MeshParameters(3.14, 0.5),
        mesh_de=MeshParameters(1.57, 0.5),
        exact=lambda t: 1.0 + math.sqrt(t),
    )


rz4 = _rz4()
pm45 = _pm45()

BUILTIN_PROBLEMS = {"rz4": rz4, "pm45": pm45}
_registry = dict(BUILTIN_PROBLEMS)


def register_problem(name: str, problem: VolterraProblem) -> None:
    _registry[name] = problem


def get_problem(name: str) -> VolterraProblem:
    try:
        return _registry[name]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; known: {sorted(_registry)}") from None
