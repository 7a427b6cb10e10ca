import math

import numpy as np
import pytest

from harmonic_contact import (
    PowerLawPotential,
    ReferenceConstants,
    Regime,
    classify_regime,
    dt_safe_general,
    dt_safe_stiffening,
    stability_report,
    verify_bound,
)
from harmonic_contact.dynamics import harmonic_verlet_growth
from harmonic_contact.errors import DegenerateBound, DomainError, RegimeMismatch
from harmonic_contact.stability import gradient_supremum

from conftest import ELL_MASS, ELL_SPEEDS, make_ellipsoid, make_tabulated

REFERENCE_ROWS = {
    0.50: (4.116586, 4.325435, 11.559531),
    0.99: (6.706989, 10.000023, 9.899977),
    1.50: (9.143383, 16.102848, 9.315123),
}


@pytest.mark.parametrize("v0", sorted(REFERENCE_ROWS))
def test_table_rows(v0):
    rep = stability_report(make_ellipsoid(), ELL_MASS, v0)
    delta_mm, force, dt_ms = REFERENCE_ROWS[v0]
    assert rep.regime is Regime.STIFFENING
    assert rep.q_max * 1e3 == pytest.approx(delta_mm, rel=1e-5)
    assert rep.force_at_qmax == pytest.approx(force, rel=1e-5)
    assert rep.dt_safe * 1e3 == pytest.approx(dt_ms, rel=1e-5)


def test_shortcut_equals_general_bound_when_stiffening():
    pot = make_ellipsoid()
    for v0 in ELL_SPEEDS:
        rep = stability_report(pot, ELL_MASS, v0)
        short = dt_safe_stiffening(ELL_MASS, v0, rep.force_at_qmax, rep.regime)
        assert short == pytest.approx(rep.dt_safe, rel=1e-9)


def test_shortcut_refuses_other_regimes():
    with pytest.raises(RegimeMismatch):
        dt_safe_stiffening(1.0, 1.0, 1.0, Regime.MIXED)


@pytest.mark.parametrize("p,regime", [
    (2.0, Regime.STIFFENING),
    (1.5, Regime.STIFFENING),
    (1.0, Regime.SOFTENING_OR_LINEAR),
    (0.5, Regime.DEGENERATE),
])
def test_power_law_regimes(p, regime):
    assert classify_regime(PowerLawPotential(1.0, p), 1.0) is regime


def test_ellipsoid_mixed_beyond_threshold():
    pot = make_ellipsoid()
    assert classify_regime(pot, 0.7 * pot.a) is Regime.STIFFENING
    assert classify_regime(pot, 0.95 * pot.a) is Regime.MIXED


def test_mixed_bound_uses_interior_maximum():
    pot = make_ellipsoid()
    q_max = 0.95 * pot.a
    g_sup, q_star = gradient_supremum(pot, q_max)
    assert 0 < q_star < q_max
    q = np.linspace(1e-6, q_max, 200_001)
    brute = np.max(pot.dU(q) / np.sqrt(2.0 * pot.U(q)))
    assert g_sup == pytest.approx(brute, rel=1e-9)
    assert g_sup >= brute


def test_linear_spring_bound_is_exact():
    pot = PowerLawPotential(4.0, 1.0)
    assert dt_safe_general(pot, 1.0, 0.3) == pytest.approx(2.0 * math.sqrt(1.0 / 4.0), rel=1e-12)


def test_degenerate_report_and_error():
    pot = PowerLawPotential(1.0, 0.5)
    rep = stability_report(pot, 1.0, 1.0)
    assert rep.regime is Regime.DEGENERATE
    assert rep.dt_safe == 0.0 and math.isinf(rep.grad_sup)
    with pytest.raises(DegenerateBound):
        dt_safe_general(pot, 1.0, 1.0)


def test_bound_shrinks_with_speed_for_stiffening():
    pot = make_ellipsoid()
    speeds = np.linspace(0.2, 1.6, 15)
    dts = [stability_report(pot, ELL_MASS, v).dt_safe for v in speeds]
    assert np.all(np.diff(dts) < 0)


def test_reference_constants_cancel():
    pot = make_tabulated()
    a = stability_report(pot, ELL_MASS, 0.8, ReferenceConstants(1.0, 1.0)).dt_safe
    b = stability_report(pot, ELL_MASS, 0.8, ReferenceConstants(7.0, 3.0)).dt_safe
    assert b == pytest.approx(a, rel=1e-12)


def test_bound_domain_check():
    with pytest.raises(DomainError):
        classify_regime(make_ellipsoid(), 0.02)


def test_small_step_is_stable():
    pot = make_ellipsoid()
    rep = stability_report(pot, ELL_MASS, 0.99)
    verdict = verify_bound(pot, ELL_MASS, 0.99, 0.1 * rep.dt_safe)
    assert verdict.stable and verdict.completed
    assert verdict.energy_drift < 0.05


def test_large_step_on_linear_spring_is_unstable():
    verdict = verify_bound(PowerLawPotential(1.0, 1.0), 1.0, 1.0, 2.02)
    assert not verdict.stable


def test_linear_threshold_in_regularised_time():
    refs = ReferenceConstants(3.0, 0.75)
    crit = 2.0 / refs.omega0
    assert harmonic_verlet_growth(refs, 0.99 * crit) < 1.01
    assert harmonic_verlet_growth(refs, 1.01 * crit) > 1e6


def test_report_serialises():
    rep = stability_report(make_ellipsoid(), ELL_MASS, 0.5)
    assert rep.to_dict()["regime"] == "Stiffening"
    assert '"dt_safe"' in rep.to_json()
