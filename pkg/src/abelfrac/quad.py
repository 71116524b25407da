"""Adaptive quadrature, including integrals with a weakly singular kernel.

:func:`integrate_singular` evaluates

.. math::

    \\int_0^x \\varphi(t) (x - t)^{\\gamma - 1} \\, dt, \\qquad 0 < \\gamma < 1,

by substituting ``u = (x - t)**gamma``, which turns the integral into
``(1/gamma) * int_0^{x**gamma} phi(x - u**(1/gamma)) du`` with a bounded
integrand, and hands that to the adaptive Gauss-Kronrod engine
:func:`integrate_smooth`.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

__all__ = [
    "QuadResult",
    "DEFAULT_TOL",
    "MAX_DEPTH",
    "MAX_EVALUATIONS",
    "integrate_smooth",
    "integrate_singular",
]

DEFAULT_TOL = 1e-10
MAX_DEPTH = 60
MAX_EVALUATIONS = 10**6

# 15-point Kronrod nodes on [-1, 1] (non-negative half) and weights; the
# odd-indexed nodes are the 7-point Gauss nodes.
_XK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)
_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool
    subdivisions: int = 0


def _gk15(f, a, b):
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    kronrod = _WK[7] * fc
    gauss = _WG[3] * fc
    absum = _WK[7] * abs(fc)
    for i in range(7):
        dx = half * _XK[i]
        f1 = f(center - dx)
        f2 = f(center + dx)
        kronrod += _WK[i] * (f1 + f2)
        absum += _WK[i] * (abs(f1) + abs(f2))
        if i % 2 == 1:
            gauss += _WG[i // 2] * (f1 + f2)
    kronrod *= half
    gauss *= half
    # never claim more than the rounding level of the panel
    err = max(abs(kronrod - gauss), 50.0 * _EPS * abs(half) * absum)
    return kronrod, err


def integrate_smooth(
    phi: Callable[[float], float],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    *,
    max_depth: int = MAX_DEPTH,
    max_evaluations: int = MAX_EVALUATIONS,
) -> QuadResult:
    """Globally adaptive Gauss-Kronrod (7/15) integration of ``phi`` over ``[a, b]``.

    The panel with the largest ``|G7 - K15|`` is bisected until the summed
    estimate drops below ``tol``. Panels at ``max_depth`` are frozen. If the
    evaluation budget runs out the best value is returned with
    ``converged=False``.
    """
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    if b < a:
        raise ValueError("integrate_smooth requires a <= b")
    if a == b:
        return QuadResult(0.0, 0.0, 0, True, 0)

    value, err = _gk15(phi, a, b)
    evaluations = 15
    # heap of (-err, order, a, b, value, err, depth); order keeps ties deterministic
    heap = [(-err, 0, a, b, value, err, 0)]
    frozen = []
    total_err = err
    counter = 1
    subdivisions = 0

    while total_err > tol and heap and evaluations + 30 <= max_evaluations:
        _, _, lo, hi, v, e, depth = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if depth >= max_depth or not lo < mid < hi:
            frozen.append((lo, v, e))
            continue
        v1, e1 = _gk15(phi, lo, mid)
        v2, e2 = _gk15(phi, mid, hi)
        evaluations += 30
        subdivisions += 1
        heapq.heappush(heap, (-e1, counter, lo, mid, v1, e1, depth + 1))
        heapq.heappush(heap, (-e2, counter + 1, mid, hi, v2, e2, depth + 1))
        counter += 2
        total_err += (e1 + e2) - e

    # fixed summation order: left to right along the interval
    panels = sorted([(item[2], item[4], item[5]) for item in heap] + frozen)
    value = math.fsum(p[1] for p in panels)
    total_err = math.fsum(p[2] for p in panels)
    return QuadResult(value, total_err, evaluations, total_err <= tol, subdivisions)


def integrate_singular(
    phi: Callable[[float], float],
    gamma: float,
    x: float,
    tol: float = DEFAULT_TOL,
    **kwargs,
) -> QuadResult:
    """``int_0^x phi(t) (x - t)**(gamma - 1) dt`` for ``0 < gamma < 1``.

    ``phi`` is any callable, including an :class:`~abelfrac.expr.Expr`.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma!r}")
    if not x > 0.0:
        raise ValueError(f"x must be positive, got {x!r}")
    inv = 1.0 / gamma

    def integrand(u):
        # clamp: u**(1/gamma) may overshoot x by an ulp near the upper end
        t = max(x - u**inv, 0.0)
        return phi(t)

    r = integrate_smooth(integrand, 0.0, x**gamma, tol * gamma, **kwargs)
    return QuadResult(r.value * inv, r.error_estimate * inv, r.evaluations, r.converged, r.subdivisions)
