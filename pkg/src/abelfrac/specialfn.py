"""Special functions used throughout the package: gamma, log-gamma and erf.

Everything is plain binary64 arithmetic on Python floats.
"""

import math

__all__ = ["gamma", "lgamma", "erf", "erfc"]

# Godfrey's coefficients for the Lanczos approximation with g = 607/128.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEFFS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_GAMMA_MAX = 171.6243769563027


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _check_pole(x):
    if x <= 0.0 and x == math.floor(x):
        raise ValueError(f"gamma has a pole at x = {x!r}")


def _sinpi(x):
    # exact reduction to [-1, 1] before multiplying by pi
    r = x - 2.0 * round(0.5 * x)
    return math.sin(math.pi * r)


def _lanczos_sum(z):
    acc = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        acc += _LANCZOS_COEFFS[i] / (z + i)
    return acc


def gamma(x: float) -> float:
    """Euler's gamma function for real ``x``.

    Uses the Lanczos approximation for ``x >= 0.5`` and the reflection
    formula below that. Raises ``ValueError`` at the poles and
    ``OverflowError`` once the result exceeds the binary64 range.
    """
    x = float(x)
    if math.isnan(x):
        return math.nan
    _check_pole(x)
    if x > _GAMMA_MAX:
        raise OverflowError(f"gamma({x!r}) overflows binary64")
    if x < 0.5:
        return math.pi / (_sinpi(x) * gamma(1.0 - x))

    z = x - 1.0
    e = z + 0.5
    # t carries its own rounding error dt; fold it back in to first order
    t, dt = _two_sum(e, _LANCZOS_G)
    corr = math.exp(e * dt / t - dt)
    half = t ** (0.5 * e)
    return _SQRT_2PI * half * math.exp(-t) * half * _lanczos_sum(z) * corr


def lgamma(x: float) -> float:
    """Natural log of ``|gamma(x)|``."""
    x = float(x)
    _check_pole(x)
    if x < 0.5:
        return math.log(math.pi / abs(_sinpi(x))) - lgamma(1.0 - x)
    if x < 20.0:
        return math.log(abs(gamma(x)))
    z = x - 1.0
    t = z + 0.5 + _LANCZOS_G
    return _LOG_SQRT_2PI + (z + 0.5) * math.log(t) - t + math.log(_lanczos_sum(z))


_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


def _erf_series(x):
    # erf(x) = 2/sqrt(pi) * exp(-x^2) * sum 2^n x^(2n+1) / (1*3*...*(2n+1));
    # every term is positive, so there is no cancellation for |x| <= 2
    x2 = x * x
    term = x
    total = x
    n = 0
    while True:
        n += 1
        term *= 2.0 * x2 / (2 * n + 1)
        total += term
        if term <= 1e-17 * total:
            break
    return _TWO_OVER_SQRT_PI * math.exp(-x2) * total


def _erfc_cf(x):
    # Lentz evaluation of the continued fraction
    # erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    tiny = 1e-300
    f = x
    c = x
    d = 0.0
    for n in range(1, 500):
        a = 0.5 * n
        d = x + a * d
        d = tiny if d == 0.0 else d
        c = x + a / c
        c = tiny if c == 0.0 else c
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return math.exp(-x * x) / (math.sqrt(math.pi) * f)


def erf(x: float) -> float:
    """Error function, odd, saturating to +-1 for ``|x| > 6``."""
    x = float(x)
    if math.isnan(x):
        return math.nan
    ax = abs(x)
    if ax > 6.0:
        r = 1.0
    elif ax <= 2.0:
        r = _erf_series(ax)
    else:
        r = 1.0 - _erfc_cf(ax)
    return math.copysign(r, x)


def erfc(x: float) -> float:
    """Complementary error function ``1 - erf(x)``."""
    x = float(x)
    if x > 2.0:
        return _erfc_cf(x) if x < 27.0 else 0.0
    return 1.0 - erf(x)
