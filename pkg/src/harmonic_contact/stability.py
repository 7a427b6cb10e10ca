"""
Critical-timestep lower bound for explicit central-difference integration.

In the regularised space the contact is a linear oscillator with frequency
``Ω0 = sqrt(K/M)``, whose Verlet limit is ``Δτ_crit = 2/Ω0``. Pulling that
limit back through the largest clock rate ``dτ/dt`` along the compression
path gives

    Δt_safe = 2 sqrt(m) / max_{0<q<=q_max} U'(q)/sqrt(2U(q)),

independent of ``K`` and ``M``. Where the contact stiffens everywhere the
maximum sits at ``q_max`` and ``Δt_safe = 2 m v0 / U'(q_max)``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .dynamics import ImpactScenario, simulate_verlet
from .errors import DegenerateBound, DomainError, RegimeMismatch
from .potentials import ContactPotential, PowerLawPotential, turning_point
from .regularize import ReferenceConstants, gradient_ratio

__all__ = [
    "Regime",
    "StabilityReport",
    "BoundVerdict",
    "classify_regime",
    "gradient_supremum",
    "dt_safe_general",
    "dt_safe_stiffening",
    "stability_report",
    "verify_bound",
]

REGIME_TOL = 1e-12
ENERGY_DRIFT_LIMIT = 0.05
EXCURSION_FACTOR = 2.0
_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


class Regime(str, enum.Enum):
    STIFFENING = "Stiffening"
    SOFTENING_OR_LINEAR = "SofteningOrLinear"
    MIXED = "Mixed"
    DEGENERATE = "Degenerate"


def _probe_grid(q_max: float, n: int = 10_000) -> np.ndarray:
    """Composite log + linear grid on ``(0, q_max]``."""
    logs = q_max * np.logspace(-8, 0, n // 2)
    lins = np.linspace(q_max / (n // 2), q_max, n - n // 2)
    return np.unique(np.concatenate([logs, lins]))


def _diverges_at_contact(pot: ContactPotential, q_max: float) -> bool:
    if isinstance(pot, PowerLawPotential):
        return pot.p < 1.0
    qs = q_max * np.array([1e-6, 1e-7, 1e-8])
    g = gradient_ratio(pot, qs)
    if np.any(~np.isfinite(g)):
        return True
    if g[1] > 10.0 * g[0] or g[2] > 10.0 * g[1]:
        return True
    # local power-law exponent of g near contact; negative means blow-up
    slopes = np.diff(np.log(g)) / np.diff(np.log(qs))
    return bool(np.all(slopes < -1e-3))


def _limit_at_contact(pot: ContactPotential, q_max: float) -> float:
    """``lim_{q->0} U'/sqrt(2U)`` for a non-divergent gradient."""
    if isinstance(pot, PowerLawPotential):
        return math.sqrt(pot.k * (pot.p + 1.0) / 2.0) if pot.p == 1.0 else 0.0
    # Richardson extrapolation assuming g(q) = g0 + c q + O(q^2)
    q1, q2 = q_max * 1e-6, q_max * 1e-7
    g1, g2 = gradient_ratio(pot, [q1, q2])
    return float(max(g2 + (g2 - g1) * q2 / (q1 - q2), 0.0))


def classify_regime(pot: ContactPotential, q_max: float) -> Regime:
    """Shape class of the contact over ``(0, q_max]``."""
    if not (0 < q_max <= pot.q_lim):
        raise DomainError(f"q_max must lie in (0, {pot.q_lim}], got {q_max}")
    if _diverges_at_contact(pot, q_max):
        return Regime.DEGENERATE
    q = _probe_grid(q_max)
    U, dU, d2U = pot.U(q), pot.dU(q), pot.d2U(q)
    margin = 2.0 * U * d2U - dU**2
    scale = np.maximum(np.abs(2.0 * U * d2U), dU**2)
    tol = REGIME_TOL * scale
    if np.all(np.abs(margin) <= tol):
        return Regime.SOFTENING_OR_LINEAR
    if np.all(margin >= -tol):
        return Regime.STIFFENING
    if np.all(margin <= tol):
        return Regime.SOFTENING_OR_LINEAR
    return Regime.MIXED


def _golden_max(f, lo, hi, tol):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


def gradient_supremum(pot: ContactPotential, q_max: float, regime: Regime | None = None):
    """``(sup, argmax)`` of ``U'/sqrt(2U)`` over ``(0, q_max]``.

    Raises :class:`DegenerateBound` when the ratio diverges at contact.
    """
    if regime is None:
        regime = classify_regime(pot, q_max)
    if regime is Regime.DEGENERATE:
        raise DegenerateBound("gradient U'/sqrt(2U) diverges as q -> 0")
    if regime is Regime.STIFFENING:
        return float(gradient_ratio(pot, q_max)), float(q_max)
    if regime is Regime.SOFTENING_OR_LINEAR:
        g0 = _limit_at_contact(pot, q_max)
        g_top = float(gradient_ratio(pot, q_max))
        # the equality case (constant gradient) is exact at every q
        if g_top >= g0:
            return g_top, float(q_max)
        return g0, 0.0
    q = _probe_grid(q_max)
    g = gradient_ratio(pot, q)
    i = int(np.argmax(g))
    lo = q[max(i - 1, 0)]
    hi = q[min(i + 1, q.size - 1)]
    f = lambda s: float(gradient_ratio(pot, s))
    q_star, g_star = _golden_max(f, lo, hi, tol=1e-12 * q_max)
    g0 = _limit_at_contact(pot, q_max)
    if g0 > max(g_star, g[i]):
        return g0, 0.0
    if g[i] > g_star:
        return float(g[i]), float(q[i])
    return g_star, float(q_star)


def dt_safe_general(
    pot: ContactPotential,
    m: float,
    q_max: float,
    refs: ReferenceConstants | None = None,
) -> float:
    """Sufficient physical timestep over a compression up to ``q_max``.

    Computed as ``Δτ_crit / max(dτ/dt)``; the reference constants cancel.
    """
    refs = refs or ReferenceConstants()
    g_sup, q_star = gradient_supremum(pot, q_max)
    dtau_crit = 2.0 / refs.omega0
    rate_max = math.sqrt(refs.M / (m * refs.K)) * g_sup
    return dtau_crit / rate_max


def dt_safe_stiffening(m: float, v0: float, force_at_qmax: float, regime: Regime | None = None) -> float:
    """Shortcut ``2 m v0 / U'(q_max)``, valid only for stiffening contacts."""
    if regime is not None and regime is not Regime.STIFFENING:
        raise RegimeMismatch(f"shortcut requires a stiffening contact, got {regime.value}")
    return 2.0 * m * v0 / force_at_qmax


@dataclass(frozen=True)
class StabilityReport:
    regime: Regime
    q_max: float
    force_at_qmax: float
    grad_sup: float
    grad_argmax: float
    dt_safe: float

    def to_dict(self) -> dict:
        out = asdict(self)
        out["regime"] = self.regime.value
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def stability_report(
    pot: ContactPotential, m: float, v0: float, refs: ReferenceConstants | None = None
) -> StabilityReport:
    """Regime, turning point and ``Δt_safe`` for an impact at speed ``v0``.

    A degenerate contact yields ``dt_safe = 0`` and an infinite supremum
    rather than an exception.
    """
    E = 0.5 * m * v0**2
    q_max = turning_point(pot, E)
    force = float(pot.dU(q_max))
    regime = classify_regime(pot, q_max)
    if regime is Regime.DEGENERATE:
        return StabilityReport(regime, q_max, force, math.inf, 0.0, 0.0)
    g_sup, q_star = gradient_supremum(pot, q_max, regime)
    dt = dt_safe_general(pot, m, q_max, refs)
    return StabilityReport(regime, q_max, force, g_sup, q_star, dt)


@dataclass(frozen=True)
class BoundVerdict:
    stable: bool
    dt: float
    energy_drift: float
    max_q: float
    q_max: float
    completed: bool
    reason: str


def verify_bound(pot: ContactPotential, m: float, v0: float, dt: float) -> BoundVerdict:
    """Run velocity Verlet through one contact at fixed ``dt``.

    Stable when the contact completes, the peak relative deviation of total
    energy stays within 5 % and the penetration stays below ``2 q_max``.
    """
    if not dt > 0:
        raise ValueError(f"timestep must be positive, got {dt}")
    scn = ImpactScenario(m=m, pot=pot, v0=v0)
    q_max = turning_point(pot, scn.E0)
    run = simulate_verlet(scn, dt, q_bound=EXCURSION_FACTOR * q_max)
    drift = run.energy_drift
    stable = (
        run.completed
        and drift <= ENERGY_DRIFT_LIMIT
        and run.max_q <= EXCURSION_FACTOR * q_max
    )
    return BoundVerdict(
        stable=bool(stable),
        dt=dt,
        energy_drift=drift,
        max_q=run.max_q,
        q_max=q_max,
        completed=run.completed,
        reason=run.reason,
    )
