import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmonic_contact import (
    ImpactScenario,
    PowerLawPotential,
    ReferenceConstants,
    simulate_reference,
    transform_trajectory,
)
from harmonic_contact.errors import DomainError, NonMonotonicTime, RangeError
from harmonic_contact.regularize import (
    cumulative_clock,
    effective_mass,
    gradient_ratio,
    q_of_x,
    time_gradient,
    x_of_q,
)

from conftest import ELL_MASS, make_ellipsoid, make_tabulated

UNIT = ReferenceConstants(1.0, 1.0)


def test_reference_constants_validated():
    with pytest.raises(ValueError):
        ReferenceConstants(0.0, 1.0)
    with pytest.raises(ValueError):
        ReferenceConstants(1.0, -2.0)
    assert ReferenceConstants(4.0, 1.0).omega0 == 2.0


def test_linear_spring_map_is_identity():
    pot = PowerLawPotential(1.0, 1.0)
    q = np.linspace(0.0, 3.0, 31)
    np.testing.assert_allclose(x_of_q(pot, UNIT, q), q, rtol=1e-15)
    np.testing.assert_allclose(time_gradient(pot, UNIT, 1.0, q[1:]), 1.0, rtol=1e-15)


def test_energy_coordinate_at_turning_point():
    # x(q_max) = sqrt(2E/K) = v0 sqrt(m/K)
    pot = make_ellipsoid()
    E = 0.5 * ELL_MASS * 0.99**2
    from harmonic_contact import turning_point
    x = x_of_q(pot, UNIT, turning_point(pot, E))
    assert x == pytest.approx(0.221370, abs=1e-6)
    assert x == pytest.approx(0.99 * math.sqrt(ELL_MASS), rel=1e-13)


def test_time_gradient_quadratic_force():
    # U = q^3/3: U'/sqrt(2U) = sqrt(3q/2)
    pot = PowerLawPotential(1.0, 2.0)
    assert time_gradient(pot, UNIT, 1.0, 1.0) == pytest.approx(1.224745, abs=1e-6)
    assert gradient_ratio(pot, 0.3) == pytest.approx(math.sqrt(0.45), rel=1e-14)


def test_time_gradient_scaling_with_references():
    pot = make_ellipsoid()
    q = 0.004
    base = time_gradient(pot, UNIT, ELL_MASS, q)
    scaled = time_gradient(pot, ReferenceConstants(4.0, 9.0), ELL_MASS, q)
    assert scaled == pytest.approx(base * 1.5, rel=1e-14)


@pytest.mark.parametrize("p,q,expected", [(1.0, 0.7, 1.0), (2.0, 1.0, 2.0 / 3.0), (1.5, 0.64, 1.0)])
def test_effective_mass(p, q, expected):
    # M_eff = 2 m K U / U'^2 = 2 q^{1-p} / (p + 1) for U' = q^p
    pot = PowerLawPotential(1.0, p)
    assert effective_mass(pot, UNIT, 1.0, q) == pytest.approx(expected, rel=1e-14)
    assert effective_mass(pot, UNIT, 1.0, q) == pytest.approx(2 * q ** (1 - p) / (p + 1), rel=1e-14)


def test_gradient_needs_positive_q():
    with pytest.raises(DomainError):
        gradient_ratio(PowerLawPotential(1.0, 2.0), 0.0)
    with pytest.raises(DomainError):
        effective_mass(PowerLawPotential(1.0, 2.0), UNIT, 1.0, -1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=1e-7, max_value=0.0149))
def test_inverse_map_round_trip(q):
    pot = make_ellipsoid()
    refs = ReferenceConstants(1.0, 0.75)
    assert q_of_x(pot, refs, x_of_q(pot, refs, q)) == pytest.approx(q, rel=1e-12)


def test_inverse_map_range():
    pot = make_ellipsoid()
    assert q_of_x(pot, UNIT, 0.0) == 0.0
    with pytest.raises(RangeError):
        q_of_x(pot, UNIT, -0.1)
    with pytest.raises(RangeError):
        q_of_x(pot, UNIT, 1.01 * math.sqrt(2.0 * pot.U_max))


def test_cumulative_clock_singular_rate():
    # q = t^4 on a quartic-type contact: rate ~ t^(-1/2) style singularity in t,
    # but x = sin(τ) with x' = cos(τ) stays smooth in the energy coordinate
    tau_true = np.linspace(0.0, 1.2, 601)
    t = tau_true**2
    rate = 1.0 / np.maximum(2.0 * tau_true, 1e-300)
    rate[0] = np.inf
    x, xp = np.sin(tau_true), np.cos(tau_true)
    tau = cumulative_clock(t, rate, x, xp)
    np.testing.assert_allclose(tau[: np.argmax(xp < 0.9)], tau_true[: np.argmax(xp < 0.9)], atol=1e-9)


def test_cumulative_clock_smooth():
    t = np.linspace(0.0, math.pi, 201)
    tau = cumulative_clock(t, np.cos(t))
    np.testing.assert_allclose(tau, np.sin(t), atol=1e-9)


def test_transform_linear_spring_identity():
    pot = PowerLawPotential(1.0, 1.0)
    traj = simulate_reference(ImpactScenario(m=1.0, pot=pot, v0=1.0))
    tt = transform_trajectory(pot, UNIT, 1.0, traj)
    np.testing.assert_allclose(tt.tau, traj.t, atol=1e-11)
    np.testing.assert_allclose(tt.x, traj.q, atol=1e-15)
    np.testing.assert_allclose(tt.x_prime, traj.qdot, atol=1e-15)


def test_transform_rejects_bad_input():
    pot = PowerLawPotential(1.0, 1.0)
    traj = simulate_reference(ImpactScenario(m=1.0, pot=pot, v0=1.0), n_samples=11)
    traj.t[3] = traj.t[2]
    with pytest.raises(NonMonotonicTime):
        transform_trajectory(pot, UNIT, 1.0, traj)


def test_tau_scales_with_references():
    # τ scales with sqrt(M/(m K)) * sqrt(K)... overall with omega0^-1 after normalising
    pot = make_tabulated()
    traj = simulate_reference(ImpactScenario(m=ELL_MASS, pot=pot, v0=0.8))
    a = transform_trajectory(pot, UNIT, ELL_MASS, traj)
    b = transform_trajectory(pot, ReferenceConstants(7.0, 3.0), ELL_MASS, traj)
    # phase Ω0 τ is independent of (K, M)
    np.testing.assert_allclose(a.tau * a.refs.omega0, b.tau * b.refs.omega0, rtol=1e-12)
    np.testing.assert_allclose(a.tau[-1], math.pi, rtol=1e-6)
    csv = b.to_csv({"v0": 0.8})
    assert csv.splitlines()[0].startswith("# ")
    assert "tau,x,x_prime,E_h" in csv
