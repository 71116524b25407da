"""Abel integral equations of the first kind,

.. math::

    f(x) = \\int_0^x \\frac{g(t)}{(x - t)^\\alpha} \\, dt, \\qquad 0 < \\alpha < 1,

with ``f(0) = 0``. The equation says ``f = Gamma(1 - alpha) J^(1-alpha) g``,
so ``g`` is ``1/Gamma(1 - alpha)`` times the Caputo derivative of order
``1 - alpha`` of ``f``:

* :func:`solve_exact` evaluates that derivative by singular quadrature,
  ``g(x) = sin(alpha pi)/pi * int_0^x f'(t) (x - t)^(alpha - 1) dt``;
* :func:`solve_approx` replaces it with the modified trapezoidal rule on
  ``k`` panels of ``[0, x]``, which is ``O(h^2)`` accurate for
  ``f in C^3``.

The problem is ill-posed with respect to perturbations of ``f``; nothing
here regularises noisy data.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from scipy.interpolate import PchipInterpolator

from .expr import DomainError, Expr, as_expr, differentiate
from .fracops import FracOrder, caputo_trap
from .quad import DEFAULT_TOL, QuadResult, integrate_singular
from .specialfn import gamma

__all__ = [
    "AbelProblem",
    "SolveResult",
    "ConvergenceRow",
    "ConvergenceStudy",
    "ConvergenceError",
    "solve_exact",
    "solve_approx",
    "solve_approx_caputo",
    "solve",
    "sample_solution",
    "residual",
    "convergence_study",
    "empirical_order",
]

F0_TOL = 1e-12


class ConvergenceError(RuntimeError):
    """Quadrature did not reach its tolerance; ``result`` holds the best attempt."""

    def __init__(self, message: str, result: QuadResult):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class AbelProblem:
    """Right-hand side ``f``, kernel exponent ``alpha`` and domain ``[0, upper]``."""

    f: Expr
    alpha: float
    upper: float = 1.0
    fprime: Expr = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "f", as_expr(self.f))
        alpha = float(self.alpha)
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie strictly between 0 and 1, got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)
        if not self.upper > 0.0:
            raise ValueError(f"upper bound must be positive, got {self.upper!r}")
        try:
            f0 = self.f(0.0)
        except DomainError as exc:
            raise ValueError(f"f must be defined at 0 with f(0) = 0: {exc}") from None
        if abs(f0) > F0_TOL:
            raise ValueError(
                f"f(0) = {f0!r}, but the first-kind Abel equation needs f(0) = 0 "
                "(the right-hand side integral vanishes at x = 0)"
            )
        object.__setattr__(self, "fprime", differentiate(self.f))

    def check_point(self, x: float) -> None:
        if not 0.0 <= x <= self.upper:
            raise ValueError(f"x = {x!r} lies outside [0, {self.upper!r}]")


@dataclass
class SolveResult:
    points: list[float]
    values: list[float]
    k: int
    h: list[float]
    exact: Optional[list[float]] = None
    abs_errors: Optional[list[float]] = None
    empirical_order: Optional[float] = None


def solve_exact(p: AbelProblem, x: float, tol: float = DEFAULT_TOL) -> float:
    """Exact solution ``g(x)`` by quadrature of ``f'`` against ``(x - t)^(alpha - 1)``."""
    p.check_point(x)
    if x == 0.0:
        return 0.0
    scale = math.sin(p.alpha * math.pi) / math.pi
    r = integrate_singular(p.fprime, p.alpha, x, tol / scale)
    if not r.converged:
        raise ConvergenceError(
            f"exact solution at x={x!r}: quadrature stopped at error estimate "
            f"{r.error_estimate:.3g} > {tol / scale:.3g}",
            r,
        )
    return scale * r.value


def solve_approx(p: AbelProblem, x: float, k: int) -> float:
    """Approximate solution on ``k`` equal panels of ``[0, x]``."""
    p.check_point(x)
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if x == 0.0:
        return 0.0
    a = p.alpha
    df = p.fprime
    h = x / k
    s = ((k - 1) ** (1 + a) - (k - 1 - a) * k**a) * df(0.0) + df(x)
    for j in range(1, k):
        s += ((k - j + 1) ** (1 + a) - 2 * (k - j) ** (1 + a) + (k - j - 1) ** (1 + a)) * df(j * h)
    return h**a / (gamma(1 - a) * gamma(2 + a)) * s


def solve_approx_caputo(p: AbelProblem, x: float, k: int) -> float:
    """Same as :func:`solve_approx`, routed through :func:`~abelfrac.fracops.caputo_trap`."""
    p.check_point(x)
    if x == 0.0:
        return 0.0
    return caputo_trap(p.f, FracOrder.complement(p.alpha), x, k) / gamma(1 - p.alpha)


def solve(
    p: AbelProblem,
    points: Sequence[float],
    k: int,
    *,
    exact: bool = True,
    tol: float = DEFAULT_TOL,
) -> SolveResult:
    """Solve at every query point with ``k`` panels, optionally against the exact value."""
    pts = [float(x) for x in points]
    values = [solve_approx(p, x, k) for x in pts]
    result = SolveResult(pts, values, k, [x / k for x in pts])
    if exact:
        result.exact = [solve_exact(p, x, tol) for x in pts]
        result.abs_errors = [abs(v - e) for v, e in zip(values, result.exact)]
    return result


def sample_solution(p: AbelProblem, x: float, k: int, nsamples: int = 51) -> tuple[list[float], list[float]]:
    """``g~`` at ``nsamples`` equispaced points of ``[0, x]``, each with ``k`` panels."""
    if nsamples < 2:
        raise ValueError("need at least two samples")
    nodes = [x * i / (nsamples - 1) for i in range(nsamples)]
    nodes[-1] = x
    return nodes, [solve_approx(p, t, k) for t in nodes]


GLike = Union[Callable[[float], float], tuple[Sequence[float], Sequence[float]]]


def _as_function(g: GLike) -> Callable[[float], float]:
    if callable(g):
        return g
    nodes, values = g
    interp = PchipInterpolator(nodes, values, extrapolate=False)
    return lambda t: float(interp(t))


def residual(p: AbelProblem, g: GLike, x: float, tol: float = DEFAULT_TOL) -> float:
    """``int_0^x g(t) (x - t)^-alpha dt - f(x)``.

    ``g`` is a callable or a ``(nodes, values)`` pair of samples, which is
    interpolated with a monotone piecewise-cubic (PCHIP) interpolant.
    """
    p.check_point(x)
    if x == 0.0:
        return -p.f(0.0)
    r = integrate_singular(_as_function(g), 1.0 - p.alpha, x, tol)
    if not r.converged:
        raise ConvergenceError(f"residual at x={x!r}: quadrature did not converge", r)
    return r.value - p.f(x)


def empirical_order(hs: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of ``log(error)`` against ``log(h)``.

    Zero errors carry no rate information and are skipped; NaN is returned
    when fewer than two positive errors remain.
    """
    pairs = [(math.log(h), math.log(e)) for h, e in zip(hs, errors) if e > 0.0]
    if len(pairs) < 2:
        return math.nan
    lh, le = zip(*pairs)
    return statistics.linear_regression(lh, le).slope


@dataclass(frozen=True)
class ConvergenceRow:
    k: int
    h: float
    value: float
    abs_error: float


@dataclass(frozen=True)
class ConvergenceStudy:
    x: float
    exact: float
    rows: tuple[ConvergenceRow, ...]
    order: float
    # some error sits within the quadrature oracle's noise, so the fitted
    # order is not meaningful
    at_floor: bool


def convergence_study(
    p: AbelProblem, x: float, k_list: Sequence[int], tol: float = DEFAULT_TOL
) -> ConvergenceStudy:
    """Errors of :func:`solve_approx` for each ``k`` and the fitted order."""
    ks = [int(k) for k in k_list]
    if len(ks) < 2 or any(b <= a for a, b in zip(ks, ks[1:])):
        raise ValueError("k list must be strictly increasing with at least two entries")
    exact = solve_exact(p, x, tol)
    rows = []
    for k in ks:
        v = solve_approx(p, x, k)
        rows.append(ConvergenceRow(k, x / k, v, abs(v - exact)))
    floor = max(10.0 * tol, 1e-14 * abs(exact))
    order = empirical_order([r.h for r in rows], [r.abs_error for r in rows])
    at_floor = any(r.abs_error <= floor for r in rows)
    return ConvergenceStudy(x, exact, tuple(rows), order, at_floor)
