"""Tanh (SE) and double-exponential (DE) maps of the real line onto (a, b)."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError
from .sinc_core import SincGrid

__all__ = [
    "Kind",
    "VariableTransform",
    "MeshParameters",
    "forward",
    "derivative",
    "inverse",
    "mesh_size",
    "nodes",
]


class Kind(str, enum.Enum):
    SE = "SE"
    DE = "DE"


@dataclass(frozen=True)
class MeshParameters:
    """Strip half-width ``d`` and Hoelder exponent ``alpha``."""

    d: float
    alpha: float

    def __post_init__(self):
        if not (self.d > 0 and math.isfinite(self.d)):
            raise ParameterError(f"d must be positive, got {self.d!r}")
        if not (0 < self.alpha <= 1):
            raise ParameterError(f"alpha must lie in (0, 1], got {self.alpha!r}")

    def check(self, kind):
        """Raise unless ``d`` is admissible for the given transform kind."""
        bound = math.pi if Kind(kind) is Kind.SE else math.pi / 2
        if not self.d < bound:
            raise ParameterError(
                f"{Kind(kind).value} transform requires 0 < d < {bound:.6g}, got d={self.d}"
            )
        return self


@dataclass(frozen=True)
class VariableTransform:
    kind: Kind
    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ParameterError(f"need finite a < b, got a={self.a!r}, b={self.b!r}")

    def _clamp(self, t):
        if t <= self.a:
            return math.nextafter(self.a, self.b)
        if t >= self.b:
            return math.nextafter(self.b, self.a)
        return t

    def forward(self, x: float) -> float:
        # Logistic form of (b-a)/2 * tanh(y/2) + (b+a)/2, accurate near both ends.
        y = x if self.kind is Kind.SE else math.pi * math.sinh(x)
        width = self.b - self.a
        e = math.exp(-abs(y))
        if y < 0:
            t = self.a + width * e / (1.0 + e)
        else:
            t = self.b - width * e / (1.0 + e)
        return self._clamp(t)

    def derivative(self, x: float) -> float:
        width = self.b - self.a
        if self.kind is Kind.SE:
            e = math.exp(-abs(x))
            return width * e / (1.0 + e) ** 2
        e = math.exp(-math.pi * abs(math.sinh(x)))
        return width * math.pi * math.cosh(x) * e / (1.0 + e) ** 2

    def inverse(self, t: float) -> float:
        if not (self.a < t < self.b):
            raise DomainError(f"inverse needs a < t < b, got t={t!r} on ({self.a}, {self.b})")
        y = math.log((t - self.a) / (self.b - t))
        if self.kind is Kind.SE:
            return y
        # artanh((2t-a-b)/(b-a)) == y/2, so (2/pi) artanh(...) == y/pi.
        return math.asinh(y / math.pi)

    def nodes(self, grid: SincGrid) -> np.ndarray:
        return np.array([self.forward(j * grid.h) for j in grid.indices()])


def forward(t: VariableTransform, x: float) -> float:
    return t.forward(x)


def derivative(t: VariableTransform, x: float) -> float:
    return t.derivative(x)


def inverse(t: VariableTransform, tt: float) -> float:
    return t.inverse(tt)


def nodes(t: VariableTransform, g: SincGrid) -> np.ndarray:
    return t.nodes(g)


def mesh_size(kind, N: int, p: MeshParameters) -> float:
    """Mesh size h balancing truncation and discretization error.

    SE: sqrt(pi d / (alpha N)).  DE: log(2 d N / alpha) / N.
    """
    if int(N) != N or N < 1:
        raise ParameterError(f"N must be a positive integer, got {N!r}")
    if Kind(kind) is Kind.SE:
        return math.sqrt(math.pi * p.d / (p.alpha * N))
    arg = 2.0 * p.d * N / p.alpha
    if arg <= 1.0:
        raise ParameterError(f"DE mesh size needs 2dN/alpha > 1, got {arg}")
    return math.log(arg) / N
