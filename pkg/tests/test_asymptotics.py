import math

import numpy as np
import pytest

from renyishift.asymptotics import (
    ScalingRegime,
    endpoint_limit_constant,
    finsler_metric,
    g_of,
    limit_constant,
    regime_for_kappa,
    scaling_regime,
)
from renyishift.errors import DomainError
from renyishift.families import Beta, Gamma, Weibull, builtin_examples, exponential, uniform
from renyishift.specfun import beta_fn

S_GRID = np.linspace(0.01, 0.99, 99)


@pytest.mark.parametrize("fam, text", [
    (Beta(0.5, 0.5), "PowerKappa(0.5)"),
    (uniform(), "PowerKappa(1)"),
    (Beta(2, 2), "EpsSqLog"),
    (Gamma(2.5, 1), "EpsSq"),
    (Beta(3, 1.5), "PowerKappa(1.5)"),
    (Beta(0.5, 3), "PowerKappa(0.5)"),
])
def test_scaling_regime(fam, text):
    assert str(scaling_regime(fam)) == text


def test_regime_validation():
    with pytest.raises(DomainError):
        ScalingRegime("PowerKappa", 2.0)
    with pytest.raises(DomainError):
        ScalingRegime("EpsSqLog", 2.5)
    with pytest.raises(DomainError):
        ScalingRegime("EpsSq", 1.0)
    with pytest.raises(DomainError):
        regime_for_kappa(1.0 + 1e-10)
    with pytest.raises(DomainError):
        regime_for_kappa(2.0 - 1e-12)
    with pytest.raises(DomainError):
        regime_for_kappa(0.0)
    assert regime_for_kappa(1.0 + 1e-6).kind == "PowerKappa"


def test_g_of():
    assert g_of(ScalingRegime("PowerKappa", 0.5), 1e-4) == pytest.approx(1e-2, rel=1e-14)
    assert g_of(ScalingRegime("EpsSqLog", 2.0), 1e-3) == pytest.approx(1e-6 * math.log(1000),
                                                                       rel=1e-14)
    assert g_of(ScalingRegime("EpsSq", 3.0), 1e-3) == pytest.approx(1e-6, rel=1e-14)
    with pytest.raises(DomainError):
        g_of(ScalingRegime("EpsSqLog", 2.0), 1.0)
    with pytest.raises(DomainError):
        g_of(ScalingRegime("EpsSq", 3.0), 0.0)


def test_limit_constant_examples():
    for s in (0.1, 0.7):
        assert limit_constant(uniform(), s).value == pytest.approx(1.0, rel=1e-15)
        for beta in (0.5, 3.0):
            assert limit_constant(exponential(beta), s).value == pytest.approx(beta * s,
                                                                               rel=1e-15)
    assert limit_constant(Beta(3, 3), 0.5).value == pytest.approx(5.0, rel=1e-12)
    expected = beta_fn(0.75, 0.5) / math.pi
    assert limit_constant(Beta(0.5, 0.5), 0.5).value == pytest.approx(expected, rel=1e-14)


def test_beta_half_closed_form_all_s():
    # (1/pi) [s B((1+s)/2, 1/2) + (1-s) B(1-s/2, 1/2)]
    for s in np.linspace(0.05, 0.95, 19):
        expected = (s * beta_fn((1 + s) / 2, 0.5) + (1 - s) * beta_fn(1 - s / 2, 0.5)) / math.pi
        assert limit_constant(Beta(0.5, 0.5), s).value == pytest.approx(expected, rel=1e-13)


def test_branch_formulas_by_hand():
    s = 0.3
    # 1 < kappa < 2, Weibull(1.5, 1): A = 1.5, single endpoint
    k, A = 1.5, 1.5
    expected = A * s * (1 - s * (k - 1)) * beta_fn(s + k * (1 - s), 2 - k) / k
    assert limit_constant(Weibull(1.5, 1), s).value == pytest.approx(expected, rel=1e-14)
    # kappa = 2: (A1 + A2) s (1-s) / 2 with A = 6 for Beta(2,2)
    assert limit_constant(Beta(2, 2), s).value == pytest.approx(6 * s * (1 - s), rel=1e-14)
    # kappa > 2: s(1-s)/2 J with J = beta^2/(alpha-2) for gamma
    assert limit_constant(Gamma(2.5, 1), s).value == pytest.approx(s * (1 - s) / 2 * 2,
                                                                   rel=1e-12)


def test_subdominant_endpoint_drops_out():
    s = 0.4
    # left kappa 0.5 dominates right kappa 3
    fam = Beta(0.5, 3.0)
    lc = limit_constant(fam, s)
    assert lc.right_term == 0.0
    A = 1 / beta_fn(0.5, 3.0)
    k = 0.5
    expected = (1 - k) / k * A * s * beta_fn(s + k * (1 - s), 1 - k)
    assert lc.value == pytest.approx(expected, rel=1e-14)
    # mirrored: right endpoint dominates, the left term is zeroed
    mirror = limit_constant(Beta(3.0, 0.5), 1 - s)
    assert mirror.left_term == 0.0
    assert mirror.value == pytest.approx(lc.value, rel=1e-14)


def test_endpoint_constants_examples():
    for s in (0.2, 0.9):
        assert endpoint_limit_constant(uniform(), "left", s) == pytest.approx(-s, rel=1e-15)
        assert endpoint_limit_constant(uniform(), "right", s) == pytest.approx(-(1 - s), rel=1e-15)
    assert endpoint_limit_constant(Beta(3, 3), "right", 0.5, c=0.5) == pytest.approx(-2.5,
                                                                                     rel=1e-12)
    tail = endpoint_limit_constant(exponential(1.0), "right", 0.3, c=1.0)
    assert tail == pytest.approx(-(0.3 * 0.7 / 2) * math.exp(-1), rel=1e-12)


def test_endpoint_constant_dominance_errors():
    from renyishift.asymptotics import ScalingRegime as R
    with pytest.raises(DomainError):
        endpoint_limit_constant(Beta(0.5, 3), "left", 0.5, regime=R("EpsSq", 3.0))
    assert endpoint_limit_constant(Beta(0.5, 3), "right", 0.5, regime=R("PowerKappa", 0.5)) == 0.0
    with pytest.raises(DomainError):
        endpoint_limit_constant(uniform(), "middle", 0.5)


def test_assembly_identity_all_builtins():
    extra = [Beta(0.5, 3.0), Beta(3.0, 1.5), Beta(2.0, 3.0), Beta(4.0, 2.5)]
    for fam in builtin_examples() + extra:
        for s in (0.1, 0.25, 0.5, 0.75, 0.9):
            lc = limit_constant(fam, s)
            regime = lc.regime
            left = endpoint_limit_constant(fam, "left", s, regime=regime)
            right = endpoint_limit_constant(fam, "right", s, regime=regime)
            assert lc.value == pytest.approx(-(left + right), rel=1e-12, abs=1e-15)


def test_positivity_and_continuity():
    for fam in builtin_examples():
        vals = np.array([limit_constant(fam, s).value for s in np.linspace(1e-3, 1 - 1e-3, 999)])
        assert np.all(vals > 0), str(fam)
        jumps = np.abs(np.diff(vals))
        # a discontinuity would show up as an isolated jump far above its neighbours
        local = np.maximum(np.r_[jumps[1:], jumps[-1]], np.r_[jumps[0], jumps[:-1]])
        assert np.all(jumps <= 10 * local + 1e-12), str(fam)


def test_symmetric_beta_s_symmetry():
    for a in (0.5, 1.0, 1.5, 2.0, 3.0, 0.8):
        fam = Beta(a, a)
        for s in (0.1, 0.3, 0.45):
            assert limit_constant(fam, s).value == pytest.approx(limit_constant(fam, 1 - s).value,
                                                                 rel=1e-12)


def test_kappa_above_two_flatness():
    for fam in (Beta(3, 3), Gamma(2.5, 1), Weibull(3, 1), Beta(2.5, 4)):
        ratios = np.array([limit_constant(fam, s).value / (s * (1 - s)) for s in S_GRID])
        assert np.ptp(ratios) <= 1e-12 * ratios.max()


def test_finsler_metric():
    assert finsler_metric(uniform()) == pytest.approx(2.0, rel=1e-14)
    for beta in (0.5, 2.0):
        assert finsler_metric(exponential(beta)) == pytest.approx(beta, rel=1e-14)
    expected = (2 * beta_fn(0.75, 0.5) / math.pi) ** 2
    assert finsler_metric(Beta(0.5, 0.5)) == pytest.approx(expected, rel=1e-13)
    for fam in (Beta(2, 2), Gamma(2.5, 1)):
        with pytest.raises(DomainError):
            finsler_metric(fam)


def test_domain_errors():
    with pytest.raises(DomainError):
        limit_constant(uniform(), 1.0)
    with pytest.raises(DomainError):
        limit_constant(uniform(), 0.0)
