"""Sinc basis functions, the sine integral and indefinite-integration weights."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError, ParameterError

__all__ = [
    "SincGrid",
    "sinc_basis",
    "sine_integral",
    "indefinite_basis",
    "delta_weight",
    "delta_table",
]

_HALF_PI = 0.5 * math.pi

# Rational approximations of Rowe et al. (2015), as used in GalSim's Sinc.cpp.
# Si on |x| <= 4: x * P(x^2) / Q(x^2).
_SI_NUM = (
    1.0,
    -4.54393409816329991e-2,
    1.15457225751016682e-3,
    -1.41018536821330254e-5,
    9.43280809438713025e-8,
    -3.53201978997168357e-10,
    7.08240282274875911e-13,
    -6.05338212010422477e-16,
)
_SI_DEN = (
    1.0,
    1.01162145739225565e-2,
    4.99175116169755106e-5,
    1.55654986308745614e-7,
    3.28067571055789734e-10,
    4.5049097575386581e-13,
    3.21107051193712168e-16,
)

# Auxiliary functions for |x| > 4 in powers of y = 1/x^2:
# f(x) = F_NUM(y) / (x F_DEN(y)),  g(x) = y G_NUM(y) / G_DEN(y).
_F_NUM = (
    1.0,
    7.44437068161936700618e2,
    1.96396372895146869801e5,
    2.37750310125431834034e7,
    1.43073403821274636888e9,
    4.33736238870432522765e10,
    6.40533830574022022911e11,
    4.20968180571076940208e12,
    1.00795182980368574617e13,
    4.94816688199951963482e12,
    -4.94701168645415959931e11,
)
_F_DEN = (
    1.0,
    7.46437068161927678031e2,
    1.97865247031583951450e5,
    2.41535670165126845144e7,
    1.47478952192985464958e9,
    4.58595115847765779830e10,
    7.08501308149515401563e11,
    5.06084464593475076774e12,
    1.43468549171581016479e13,
    1.11535493509914254097e13,
)
_G_NUM = (
    1.0,
    8.1359520115168615e2,
    2.35239181626478200e5,
    3.12557570795778731e7,
    2.06297595146763354e9,
    6.83052205423625007e10,
    1.09049528450362786e12,
    7.57664583257834349e12,
    1.81004487464664575e13,
    6.43291613143049485e12,
    -1.36517137670871689e12,
)
_G_DEN = (
    1.0,
    8.19595201151451564e2,
    2.40036752835578777e5,
    3.26026661647090822e7,
    2.23355543278099360e9,
    7.87465017341829930e10,
    1.39866710696414565e12,
    1.17164723371736605e13,
    4.01839087307656620e13,
    3.99653257887490811e13,
)

_SINC_SERIES_THRESHOLD = 1e-8


def _poly(coeffs, y):
    # Horner with coeffs in ascending order.
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * y + c
    return acc


@dataclass(frozen=True)
class SincGrid:
    """Truncation index ``N`` and mesh size ``h``; ``n = 2N + 1`` points."""

    N: int
    h: float
    n: int = field(init=False)

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ParameterError(f"N must be a positive integer, got {self.N!r}")
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ParameterError(f"h must be positive and finite, got {self.h!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "n", 2 * self.N + 1)

    def indices(self):
        return range(-self.N, self.N + 1)


def sinc_basis(j: int, h: float, x: float) -> float:
    """Shifted Sinc function S(j, h)(x)."""
    z = math.pi * (x - j * h) / h
    if abs(z) < _SINC_SERIES_THRESHOLD:
        return 1.0 - z * z / 6.0
    return math.sin(z) / z


def sine_integral(x: float) -> float:
    """Si(x), the integral of sin(t)/t from 0 to x.

    Absolute error is below 1e-14 for all finite ``x``; oddness is exact
    because the value is computed on ``|x|`` and the sign applied last.
    """
    if not math.isfinite(x):
        raise DomainError(f"sine_integral requires a finite argument, got {x!r}")
    ax = abs(x)
    if ax <= 4.0:
        x2 = ax * ax
        val = ax * _poly(_SI_NUM, x2) / _poly(_SI_DEN, x2)
    else:
        y = 1.0 / (ax * ax)
        f = _poly(_F_NUM, y) / (ax * _poly(_F_DEN, y))
        g = y * _poly(_G_NUM, y) / _poly(_G_DEN, y)
        val = _HALF_PI - f * math.cos(ax) - g * math.sin(ax)
    return -val if x < 0 else val


def indefinite_basis(j: int, h: float, x: float) -> float:
    """J(j, h)(x) = h * (1/2 + Si(pi (x - jh) / h) / pi)."""
    return h * (0.5 + sine_integral(math.pi * (x - j * h) / h) / math.pi)


def delta_weight(k: int) -> float:
    """1/2 + Si(pi k)/pi, i.e. J(0, 1)(k)."""
    return 0.5 + sine_integral(math.pi * k) / math.pi


def delta_table(N: int) -> dict[int, float]:
    """``delta_weight(k)`` for every k in [-2N, 2N]; covers all i - j on a grid."""
    return {k: delta_weight(k) for k in range(-2 * N, 2 * N + 1)}
