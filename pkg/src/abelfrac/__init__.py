"""Abel integral equations of the first kind solved through fractional calculus.

The approximate solver applies a modified trapezoidal rule to the Caputo
derivative of the right-hand side; exact reference values come from an
adaptive quadrature that removes the kernel singularity.
"""

__version__ = "0.1.0"

from .abel import (
    AbelProblem,
    ConvergenceError,
    SolveResult,
    convergence_study,
    residual,
    sample_solution,
    solve,
    solve_approx,
    solve_approx_caputo,
    solve_exact,
)
from .expr import DomainError, ParseError, differentiate, parse
from .fracops import FracOrder, Grid, caputo_trap, frac_integral_trap, gl_derivative, gl_weights
from .quad import QuadResult, integrate_singular, integrate_smooth
from .specialfn import erf, gamma, lgamma

__all__ = [
    "AbelProblem",
    "ConvergenceError",
    "DomainError",
    "FracOrder",
    "Grid",
    "ParseError",
    "QuadResult",
    "SolveResult",
    "caputo_trap",
    "convergence_study",
    "differentiate",
    "erf",
    "frac_integral_trap",
    "gamma",
    "gl_derivative",
    "gl_weights",
    "integrate_singular",
    "integrate_smooth",
    "lgamma",
    "parse",
    "residual",
    "sample_solution",
    "solve",
    "solve_approx",
    "solve_approx_caputo",
    "solve_exact",
]
