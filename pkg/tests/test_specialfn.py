import math

import mpmath
import numpy as np
import pytest

from abelfrac.specialfn import erf, erfc, gamma, lgamma


def maclaurin_erf(x, dps=40):
    """Independent oracle: alternating Maclaurin series in extended precision."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        total = mpmath.mpf(0)
        n = 0
        while True:
            term = (-1) ** n * x ** (2 * n + 1) / (mpmath.factorial(n) * (2 * n + 1))
            total += term
            if abs(term) < mpmath.mpf(10) ** (-dps + 2) and n > 2:
                break
            n += 1
        return float(2 / mpmath.sqrt(mpmath.pi) * total)


@pytest.mark.parametrize(
    "x, expected",
    [
        (1.0, 1.0),
        (0.5, 1.7724538509055160),
        (5.0, 24.0),
        (2.5, 1.5 * 0.5 * math.sqrt(math.pi)),
    ],
)
def test_gamma_examples(x, expected):
    assert gamma(x) == pytest.approx(expected, rel=1e-14)


def test_gamma_2_5_frozen():
    assert gamma(2.5) == pytest.approx(1.3293403881791370, rel=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -17.0])
def test_gamma_poles(x):
    with pytest.raises(ValueError):
        gamma(x)


def test_gamma_overflow():
    with pytest.raises(OverflowError):
        gamma(172.0)
    assert math.isfinite(gamma(171.5))


def test_gamma_relative_accuracy_against_mpmath():
    xs = np.concatenate([np.linspace(0.1, 10, 400), np.linspace(10, 170, 400)])
    worst = max(abs(gamma(x) / float(mpmath.gamma(x)) - 1) for x in xs)
    assert worst <= 1e-13


def test_gamma_negative_arguments():
    for x in (-0.5, -1.5, -2.25, -7.9):
        assert gamma(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-13)


def test_gamma_recurrence():
    rng = np.random.default_rng(0)
    for x in rng.uniform(0.5, 50, 1000):
        assert abs(gamma(x + 1) - x * gamma(x)) / gamma(x + 1) <= 1e-12


def test_gamma_reflection():
    rng = np.random.default_rng(1)
    for x in rng.uniform(0.001, 0.999, 1000):
        lhs = gamma(x) * gamma(1 - x)
        rhs = math.pi / math.sin(math.pi * x)
        assert abs(lhs / rhs - 1) <= 1e-11


@pytest.mark.parametrize("alpha", [i / 10 for i in range(1, 10)])
def test_sine_gamma_identity(alpha):
    # pi = sin(alpha pi) Gamma(alpha) Gamma(1 - alpha)
    assert math.sin(alpha * math.pi) * gamma(alpha) * gamma(1 - alpha) == pytest.approx(math.pi, rel=1e-12)


def test_lgamma():
    for x in (0.3, 1.0, 2.5, 25.0, 300.0, 1e4, -2.5):
        assert lgamma(x) == pytest.approx(float(mpmath.loggamma(x).real), rel=1e-14, abs=1e-14)


def test_erf_examples():
    assert erf(0.0) == 0.0
    assert erf(1.0) == pytest.approx(0.8427007929497149, abs=1e-15)
    assert erf(-1.0) == -erf(1.0)


@pytest.mark.parametrize("x", [0.01, 0.3, 1.0, 1.7, 2.0, 2.3, 3.1, 4.5, 5.9])
def test_erf_against_series_oracle(x):
    assert abs(erf(x) - maclaurin_erf(x)) <= 1e-13


def test_erf_matches_math_erf_on_grid():
    xs = np.linspace(-7, 7, 1401)
    assert max(abs(erf(x) - math.erf(x)) for x in xs) <= 1e-13


def test_erf_odd_and_monotone():
    xs = np.linspace(-6.5, 6.5, 1000)
    values = [erf(x) for x in xs]
    assert all(erf(-x) == -erf(x) for x in xs)
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert erf(7.0) == 1.0 and erf(-7.0) == -1.0


def test_erfc_tail():
    for x in (2.5, 4.0, 8.0, 20.0):
        assert erfc(x) == pytest.approx(float(mpmath.erfc(x)), rel=1e-12)
