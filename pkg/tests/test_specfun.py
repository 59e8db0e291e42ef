import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renyishift.errors import DomainError
from renyishift.specfun import beta_fn, ln_gamma, log_beta


@pytest.mark.parametrize("x, expected", [
    (1.0, 0.0),
    (2.0, 0.0),
    (5.0, math.log(24.0)),
    (0.5, 0.5 * math.log(math.pi)),
])
def test_ln_gamma_examples(x, expected):
    assert ln_gamma(x) == pytest.approx(expected, rel=1e-14, abs=1e-15)


def test_ln_gamma_against_mpmath():
    mpmath.mp.dps = 30
    rng = np.random.default_rng(7)
    xs = np.concatenate([
        rng.uniform(1e-8, 1.0, 200),
        rng.uniform(0.6, 2.4, 200),   # around the zeros at 1 and 2
        rng.uniform(2.0, 170.0, 200),
        np.exp(rng.uniform(-30, 0, 50)),
    ])
    worst = 0.0
    for x in xs:
        ref = float(mpmath.loggamma(mpmath.mpf(float(x))))
        got = ln_gamma(float(x))
        worst = max(worst, abs(got - ref) / abs(ref))
    assert worst <= 1e-13


def test_ln_gamma_near_zeros_relative_accuracy():
    mpmath.mp.dps = 30
    for x in (1 + 1e-9, 1 - 1e-7, 2 + 3e-8, 2 - 1e-5):
        ref = float(mpmath.loggamma(mpmath.mpf(x)))
        assert ln_gamma(x) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_ln_gamma_domain(bad):
    with pytest.raises(DomainError):
        ln_gamma(bad)


def test_factorial_recurrence():
    for n in range(1, 51):
        lhs = ln_gamma(n + 1.0)
        rhs = math.log(n) + ln_gamma(float(n))
        assert math.exp(lhs - rhs) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("x, y, expected", [
    (1.0, 1.0, 0.0),
    (0.5, 0.5, math.log(math.pi)),
    (2.0, 3.0, math.log(1.0 / 12.0)),
])
def test_log_beta_examples(x, y, expected):
    assert log_beta(x, y) == pytest.approx(expected, rel=1e-14, abs=1e-15)
    assert beta_fn(x, y) == pytest.approx(math.exp(expected), rel=1e-14)


@pytest.mark.parametrize("x, y", [(0.0, 1.0), (1.0, -2.0), (-1.0, -1.0)])
def test_log_beta_domain(x, y):
    with pytest.raises(DomainError):
        log_beta(x, y)
    with pytest.raises(DomainError):
        beta_fn(x, y)


def test_beta_grid_properties():
    rng = np.random.default_rng(11)
    for x, y in rng.uniform(1e-3, 20.0, size=(100, 2)):
        b = beta_fn(x, y)
        assert beta_fn(y, x) == pytest.approx(b, rel=1e-14)
        assert beta_fn(x + 1, y) == pytest.approx(b * x / (x + y), rel=1e-12)


pos = st.floats(min_value=1e-4, max_value=50.0, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(pos, pos)
def test_beta_symmetry_and_recurrence(x, y):
    assert log_beta(x, y) == pytest.approx(log_beta(y, x), rel=1e-14, abs=1e-14)
    assert beta_fn(x + 1, y) == pytest.approx(beta_fn(x, y) * x / (x + y), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-6, max_value=160.0))
def test_gamma_recurrence_property(x):
    # log Gamma(x+1) - log Gamma(x) = log x
    assert ln_gamma(x + 1) - ln_gamma(x) == pytest.approx(math.log(x), rel=1e-12, abs=1e-12)
