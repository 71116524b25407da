"""Discrete fractional operators on a uniform grid over ``[0, b]``.

* :func:`gl_derivative` -- truncated Grunwald-Letnikov difference.
* :func:`frac_integral_trap` -- modified trapezoidal rule for the left
  Riemann-Liouville integral ``J^alpha f(b)``.
* :func:`caputo_trap` -- the same rule applied to ``f^(n)``, giving the left
  Caputo derivative of order ``beta`` with ``n - 1 < beta <= n``.

Both trapezoidal rules integrate the piecewise-linear interpolant of the
integrand exactly against the weight ``(b - t)^(gamma - 1) / Gamma(gamma)``,
so they are exact whenever the interpolated function is linear and carry an
``O(h^2)`` error for ``C^2`` integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

from .expr import Expr, as_expr, derivative
from .specialfn import gamma as gamma_fn

__all__ = [
    "FracOrder",
    "Grid",
    "gl_weights",
    "gl_derivative",
    "trap_weights",
    "frac_integral_trap",
    "caputo_trap",
]

Function = Union[Expr, str, Callable[[float], float]]


@dataclass(frozen=True)
class FracOrder:
    """Fractional order ``beta > 0`` with ``n = ceil(beta)``.

    ``gap`` is ``n - beta``, the order of the fractional integral applied to
    ``f^(n)``. It is stored so callers that know it exactly (the Abel solver
    uses ``gap = alpha`` for ``beta = 1 - alpha``) do not lose bits to the
    subtraction.
    """

    beta: float
    gap: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if not (self.beta > 0.0 and math.isfinite(self.beta)):
            raise ValueError(f"fractional order must be positive and finite, got {self.beta!r}")
        if self.gap is None:
            object.__setattr__(self, "gap", self.n - self.beta)
        elif not 0.0 <= self.gap < 1.0:
            raise ValueError(f"gap must lie in [0, 1), got {self.gap!r}")

    @property
    def n(self) -> int:
        return math.ceil(self.beta)

    @classmethod
    def complement(cls, alpha: float) -> "FracOrder":
        """The order ``1 - alpha`` for ``alpha`` in ``(0, 1)``, keeping ``gap == alpha`` exactly."""
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
        return cls(1.0 - alpha, alpha)


@dataclass(frozen=True)
class Grid:
    """Uniform subdivision of ``[0, upper]`` into ``k`` panels."""

    upper: float
    k: int

    def __post_init__(self):
        if not self.upper > 0.0:
            raise ValueError(f"grid upper bound must be positive, got {self.upper!r}")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")

    @property
    def h(self) -> float:
        return self.upper / self.k

    def node(self, j: int) -> float:
        return self.upper if j == self.k else j * self.h

    @property
    def nodes(self) -> list[float]:
        return [self.node(j) for j in range(self.k + 1)]


def _callable(f: Function) -> Callable[[float], float]:
    return as_expr(f) if isinstance(f, str) else f


def gl_weights(alpha: float, nterms: int) -> list[float]:
    """``(-1)^r binom(alpha, r)`` for ``r = 0..nterms``."""
    if nterms < 0:
        raise ValueError("nterms must be non-negative")
    w = [1.0]
    for r in range(1, nterms + 1):
        w.append(w[-1] * (r - 1 - alpha) / r)
    return w


def gl_derivative(f: Function, alpha: float, x: float, h: float) -> float:
    """Grunwald-Letnikov approximation ``h^-alpha sum_r w_r f(x - r h)``.

    The sum stops at ``r = x/h``; ``f`` is taken to vanish for negative
    arguments. ``x`` must be an integer multiple of ``h``.
    """
    if not h > 0.0:
        raise ValueError("step h must be positive")
    f = _callable(f)
    n = round(x / h)
    if n < 1 or abs(n * h - x) > 1e-12 * abs(x):
        raise ValueError(f"x = {x!r} is not a positive integer multiple of h = {h!r}")
    w = gl_weights(alpha, n)
    total = 0.0
    for r in range(n + 1):
        total += w[r] * f(x - r * h)
    return total * h ** (-alpha)


def trap_weights(gap: float, k: int) -> list[float]:
    """Unscaled modified trapezoidal weights for nodes ``t_0 .. t_k``.

    Multiply by ``h^gap / Gamma(gap + 2)`` to obtain the quadrature weights
    of ``J^gap`` at ``t_k``.
    """
    p = gap + 1.0
    w = [0.0] * (k + 1)
    w[0] = (k - 1) ** p - (k - gap - 1) * k**gap
    for j in range(1, k):
        w[j] = (k - j + 1) ** p - 2 * (k - j) ** p + (k - j - 1) ** p
    w[k] = 1.0
    return w


def _trap_sum(g, gap, b, k):
    grid = Grid(b, k)
    h = grid.h
    w = trap_weights(gap, k)
    # endpoint terms first, then interior nodes left to right
    total = w[0] * g(0.0) + g(b)
    for j in range(1, k):
        total += w[j] * g(grid.node(j))
    return h**gap / gamma_fn(gap + 2.0) * total


def frac_integral_trap(f: Function, alpha: float, b: float, k: int) -> float:
    """Modified trapezoidal approximation of ``J^alpha f`` at ``b`` with ``h = b/k``."""
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha!r}")
    return _trap_sum(_callable(f), alpha, b, k)


def caputo_trap(f: Union[Expr, str], order: Union[FracOrder, float], b: float, k: int) -> float:
    """Modified trapezoidal approximation of the Caputo derivative at ``b``.

    ``f`` must be an expression: its ``n``-th derivative is formed
    symbolically.
    """
    if not isinstance(order, FracOrder):
        order = FracOrder(float(order))
    fn = derivative(as_expr(f), order.n)
    # for integer orders gap == 0 and the rule collapses to f^(n)(b)
    return _trap_sum(fn, order.gap, b, k)
