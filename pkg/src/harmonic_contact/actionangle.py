"""
Action variable, its energy derivative and the contact duration.

Both integrals run over ``[0, q_max]`` and the derivative has an inverse
square-root singularity at the turning point. The substitution
``q = q_max sin^2 θ`` makes both integrands smooth on ``[0, π/2]``; they are
then evaluated by adaptive composite Gauss-Legendre quadrature.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .errors import QuadratureFailure
from .potentials import ContactPotential, turning_point

__all__ = [
    "ActionAngleReport",
    "adaptive_gauss_legendre",
    "action",
    "dJ_dE",
    "contact_duration",
    "action_angle_report",
]


# relative distance below the turning point where the energy gap is integrated
_NEAR_TOP = 1e-3


@lru_cache(maxsize=8)
def _gl_rule(n: int):
    return np.polynomial.legendre.leggauss(n)


def _panel(f, a, b, n):
    nodes, weights = _gl_rule(n)
    half = 0.5 * (b - a)
    return half * np.dot(weights, f(0.5 * (a + b) + half * nodes))


def adaptive_gauss_legendre(f, a, b, rtol=1e-12, atol=0.0, n=16, max_panels=4096, breaks=()):
    """Integrate a vectorised ``f`` over ``[a, b]``.

    Each panel is compared against the sum of its two halves; the panel with
    the largest disagreement is split until the summed error estimate is
    within ``max(atol, rtol * |I|)``. Interior ``breaks`` (points where ``f``
    is not smooth) always start a new panel.
    """
    def evaluate(lo, hi):
        whole = _panel(f, lo, hi, n)
        mid = 0.5 * (lo + hi)
        left, right = _panel(f, lo, mid, n), _panel(f, mid, hi, n)
        return (lo, hi, left + right, abs(left + right - whole))

    inner = np.asarray(breaks, dtype=float)
    edges = np.unique(np.concatenate([np.linspace(a, b, 5), inner[(inner > a) & (inner < b)]]))
    max_panels = max(max_panels, 4 * edges.size)
    panels = [evaluate(lo, hi) for lo, hi in zip(edges[:-1], edges[1:])]
    while True:
        total = math.fsum(p[2] for p in panels)
        err = math.fsum(p[3] for p in panels)
        if not math.isfinite(total):
            raise QuadratureFailure("integrand produced a non-finite value")
        if err <= max(atol, rtol * abs(total)):
            return total
        if len(panels) >= max_panels:
            raise QuadratureFailure(
                f"quadrature stalled at {len(panels)} panels (error estimate {err:.3g})"
            )
        worst = max(range(len(panels)), key=lambda i: panels[i][3])
        lo, hi, _, _ = panels.pop(worst)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise QuadratureFailure("panel width underflow")
        panels.extend((evaluate(lo, mid), evaluate(mid, hi)))


def _setup(pot: ContactPotential, E: float):
    q_max = turning_point(pot, E)
    if not pot.dU(q_max) > 0:
        raise QuadratureFailure("degenerate turning point: U'(q_max) = 0")
    # energy actually stored at the computed turning point; keeps the
    # integrand consistent with the integration limit to the last ulp
    E_top = pot.U(q_max)

    nodes, weights = _gl_rule(8)

    def gap(theta):
        theta = np.asarray(theta, dtype=float)
        q = q_max * np.sin(theta) ** 2
        out = np.maximum(E_top - pot.U(q), 0.0)
        # E - U(q) cancels near the turning point; integrate U' over the
        # short remaining distance q_max - q = q_max cos^2 θ instead
        d = q_max * np.cos(theta) ** 2
        near = (d > 0) & (d < _NEAR_TOP * q_max)
        if np.any(near):
            dn = d[near]
            s = q_max - 0.5 * dn[:, None] * (1.0 + nodes[None, :])
            out[near] = 0.5 * dn * (pot.dU(np.minimum(s, q_max)) @ weights)
        return out

    return q_max, gap


def _theta_breaks(pot: ContactPotential, q_max: float) -> np.ndarray:
    return np.arcsin(np.sqrt(pot.breakpoints(q_max) / q_max))


def action(pot: ContactPotential, m: float, E: float, rtol: float = 1e-12) -> float:
    """``J(E) = sqrt(2m)/π ∫_0^{q_max} sqrt(E - U(q)) dq``."""
    q_max, gap = _setup(pot, E)

    def integrand(theta):
        return np.sqrt(gap(theta)) * 2.0 * q_max * np.sin(theta) * np.cos(theta)

    integral = adaptive_gauss_legendre(integrand, 0.0, 0.5 * math.pi, rtol=rtol,
                                       breaks=_theta_breaks(pot, q_max))
    return math.sqrt(2.0 * m) / math.pi * integral


def dJ_dE(pot: ContactPotential, m: float, E: float, rtol: float = 1e-12) -> float:
    """``sqrt(2m)/(2π) ∫_0^{q_max} dq / sqrt(E - U(q))``."""
    q_max, gap = _setup(pot, E)

    def integrand(theta):
        g = gap(theta)
        c = np.cos(theta)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = 2.0 * q_max * np.sin(theta) * c / np.sqrt(g)
        # at the turning point the ratio cos/sqrt(gap) tends to 1/sqrt(U' q_max)
        limit = 2.0 * q_max * np.sin(theta) / math.sqrt(pot.dU(q_max) * q_max)
        return np.where(g > 0, val, limit)

    integral = adaptive_gauss_legendre(integrand, 0.0, 0.5 * math.pi, rtol=rtol,
                                       breaks=_theta_breaks(pot, q_max))
    return math.sqrt(2.0 * m) / (2.0 * math.pi) * integral


def contact_duration(pot: ContactPotential, m: float, E: float, rtol: float = 1e-12) -> float:
    """Entry-to-exit contact time, ``2π dJ/dE``.

    This is twice the compression time: the in-out half cycle of the
    contact, not a full back-and-forth oscillation.
    """
    return 2.0 * math.pi * dJ_dE(pot, m, E, rtol=rtol)


@dataclass(frozen=True)
class ActionAngleReport:
    E: float
    q_max: float
    J: float
    dJ_dE: float
    T: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def action_angle_report(pot: ContactPotential, m: float, E: float) -> ActionAngleReport:
    slope = dJ_dE(pot, m, E)
    return ActionAngleReport(
        E=float(E),
        q_max=turning_point(pot, E),
        J=action(pot, m, E),
        dJ_dE=slope,
        T=2.0 * math.pi * slope,
    )
