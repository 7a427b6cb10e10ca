import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmonic_contact import (
    ConstantDamping,
    DampingSpec,
    PowerLawPotential,
    ReferenceConstants,
    damping_ratio,
    predicted_restitution,
    transformed_damping,
    universal_C,
)
from harmonic_contact.damping import loglog_slope
from harmonic_contact.errors import DomainError, OverdampedUnsupported

from conftest import ELL_MASS, ELL_REFS, make_ellipsoid, make_tabulated


def test_reference_damping_ratio_and_restitution():
    spec = DampingSpec(0.5, ELL_REFS, ELL_MASS)
    zeta = damping_ratio(spec)
    assert zeta == pytest.approx(0.288675, abs=1e-6)
    assert zeta == pytest.approx(1.0 / math.sqrt(12.0), rel=1e-15)
    # e = exp(-π/sqrt(11)) for ζ^2 = 1/12
    assert predicted_restitution(spec) == pytest.approx(math.exp(-math.pi / math.sqrt(11.0)), rel=1e-15)
    assert predicted_restitution(spec) == pytest.approx(0.38781, abs=1e-5)


def test_zero_damping_is_elastic():
    assert predicted_restitution(DampingSpec(0.0, ELL_REFS, 1.0)) == 1.0


def test_overdamped_rejected():
    spec = DampingSpec(2.0 * math.sqrt(0.75), ELL_REFS, 1.0)
    with pytest.raises(OverdampedUnsupported):
        predicted_restitution(spec)


def test_invalid_spec():
    with pytest.raises(ValueError):
        DampingSpec(-1.0, ELL_REFS, 1.0)
    with pytest.raises(ValueError):
        DampingSpec(1.0, ELL_REFS, 0.0)


@pytest.mark.parametrize("p", [0.5, 1.0, 1.5, 2.0])
def test_power_law_exponent(p):
    pot = PowerLawPotential(1e6, p)
    spec = DampingSpec(0.3, ReferenceConstants(), 0.1)
    q = np.geomspace(1e-6, 1e-2, 200)
    assert loglog_slope(q, universal_C(spec, pot, q)) == pytest.approx((p - 1.0) / 2.0, abs=1e-6)


def test_linear_spring_gives_constant_dashpot():
    # C = C0 sqrt(m/M) sqrt(k/K)
    pot = PowerLawPotential(9.0, 1.0)
    spec = DampingSpec(0.4, ReferenceConstants(4.0, 1.0), 1.0)
    np.testing.assert_allclose(universal_C(spec, pot, np.linspace(0.1, 1, 5)), 0.4 * 1.5, rtol=1e-14)


@pytest.mark.parametrize("pot", [make_ellipsoid(), make_tabulated(), PowerLawPotential(3.0, 1.5)])
def test_transformed_coefficient_is_constant(pot):
    spec = DampingSpec(0.5, ELL_REFS, ELL_MASS)
    q = np.linspace(1e-6, 0.5 * min(pot.q_lim, 0.015), 500)
    c_star = transformed_damping(spec, pot, ELL_REFS, ELL_MASS, q)
    np.testing.assert_allclose(c_star, 0.5, rtol=1e-12)


def test_constant_damping_is_not_universal():
    pot = PowerLawPotential(1.0, 2.0)
    q = np.linspace(1e-3, 1.0, 100)
    c_star = transformed_damping(ConstantDamping(0.2), pot, ReferenceConstants(), 1.0, q)
    assert (c_star.max() - c_star.min()) / c_star.mean() > 0.1
    with pytest.raises(DomainError):
        ConstantDamping(0.2).coefficient(pot, 0.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-2, 1e2), st.floats(1e-2, 1e2), st.floats(0.0, 0.9))
def test_restitution_depends_only_on_zeta(K, M, zeta):
    refs = ReferenceConstants(K, M)
    spec = DampingSpec(2.0 * zeta * math.sqrt(K * M), refs, 1.0)
    assert damping_ratio(spec) == pytest.approx(zeta, rel=1e-12, abs=1e-15)
    expected = math.exp(-math.pi * zeta / math.sqrt(1.0 - zeta**2))
    assert predicted_restitution(spec) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-2, 1e2), st.floats(1e-2, 1e2))
def test_physical_coefficient_independent_of_references(K, M):
    # at fixed ζ the physical law C(q) does not depend on (K, M)
    pot = make_ellipsoid()
    q = np.array([1e-4, 3e-3, 9e-3])
    zeta = 0.25
    base = DampingSpec(2 * zeta, ReferenceConstants(), ELL_MASS)
    other = DampingSpec(2 * zeta * math.sqrt(K * M), ReferenceConstants(K, M), ELL_MASS)
    np.testing.assert_allclose(universal_C(other, pot, q), universal_C(base, pot, q), rtol=1e-12)
