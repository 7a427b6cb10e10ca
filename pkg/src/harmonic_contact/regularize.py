"""
Energy-coordinate harmonic regularisation of a contact trajectory.

The map ``x = sqrt(2 U(q) / K)`` together with the clock
``dτ/dt = sqrt(M/m) dx/dq`` turns ``m q'' + U'(q) = 0`` into
``M x'' + K x = 0``. ``K`` and ``M`` are arbitrary positive reference
constants; physical predictions do not depend on them.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonMonotonicTime, RangeError
from .potentials import ContactPotential, turning_point

__all__ = [
    "ReferenceConstants",
    "TransformedTrajectory",
    "gradient_ratio",
    "x_of_q",
    "dx_dq",
    "q_of_x",
    "time_gradient",
    "effective_mass",
    "transform_trajectory",
    "cumulative_clock",
]


@dataclass(frozen=True)
class ReferenceConstants:
    """Virtual stiffness ``K`` and mass ``M`` of the regularised oscillator."""

    K: float = 1.0
    M: float = 1.0

    def __post_init__(self):
        if not (self.K > 0 and math.isfinite(self.K)):
            raise ValueError(f"reference stiffness K must be positive, got {self.K}")
        if not (self.M > 0 and math.isfinite(self.M)):
            raise ValueError(f"reference mass M must be positive, got {self.M}")

    @property
    def omega0(self) -> float:
        return math.sqrt(self.K / self.M)


@dataclass
class TransformedTrajectory:
    """Samples of ``(τ, x, x')`` and the harmonic energy ``½Mx'^2 + ½Kx^2``."""

    tau: np.ndarray
    x: np.ndarray
    x_prime: np.ndarray
    refs: ReferenceConstants

    @property
    def E_h(self) -> np.ndarray:
        return 0.5 * self.refs.M * self.x_prime**2 + 0.5 * self.refs.K * self.x**2

    def to_csv(self, header: dict | None = None) -> str:
        buf = io.StringIO()
        if header:
            for line in json.dumps(header, sort_keys=True, indent=1).splitlines():
                buf.write(f"# {line}\n")
        buf.write("tau,x,x_prime,E_h\n")
        for row in zip(self.tau, self.x, self.x_prime, self.E_h):
            buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
        return buf.getvalue()


def gradient_ratio(pot: ContactPotential, q):
    """``U'(q) / sqrt(2 U(q))`` for ``q > 0``.

    This is ``dx/dq`` at ``K = 1`` and sets the physical timestep bound.
    """
    arr = np.asarray(q, dtype=float)
    if np.any(arr <= 0):
        raise DomainError("gradient ratio is only defined for q > 0")
    return pot.dU(q) / np.sqrt(2.0 * pot.U(q))


def x_of_q(pot: ContactPotential, refs: ReferenceConstants, q):
    return np.sqrt(2.0 * pot.U(q) / refs.K)


def dx_dq(pot: ContactPotential, refs: ReferenceConstants, q):
    return gradient_ratio(pot, q) / math.sqrt(refs.K)


def q_of_x(pot: ContactPotential, refs: ReferenceConstants, x: float) -> float:
    """Inverse energy coordinate, solved through the turning-point search."""
    x = float(x)
    if x < 0 or not math.isfinite(x):
        raise RangeError(f"virtual displacement must be finite and >= 0, got {x}")
    if x == 0:
        return 0.0
    E = 0.5 * refs.K * x * x
    if E > pot.U_max:
        raise RangeError(f"x={x} needs energy {E} above U(q_lim)={pot.U_max}")
    return turning_point(pot, E)


def time_gradient(pot: ContactPotential, refs: ReferenceConstants, m: float, q):
    """Clock rate ``dτ/dt = sqrt(M/(m K)) U'(q)/sqrt(2U(q))``."""
    return math.sqrt(refs.M / (m * refs.K)) * gradient_ratio(pot, q)


def effective_mass(pot: ContactPotential, refs: ReferenceConstants, m: float, q):
    """Position-dependent mass of the point-canonical lift without time change.

    ``M_eff = 2 m K U / U'^2``; constant only for a quadratic potential.
    """
    arr = np.asarray(q, dtype=float)
    if np.any(arr <= 0):
        raise DomainError("effective mass is only defined for q > 0")
    return 2.0 * m * refs.K * pot.U(q) / pot.dU(q) ** 2


def _lagrange_piece(ts, gs, a, b):
    """Integral over ``[a, b]`` of the parabola through three ``(t, g)`` samples."""
    s = a  # local origin limits cancellation
    t0, t1, t2 = ts[0] - s, ts[1] - s, ts[2] - s
    b = b - s

    def basis(tp, tq, tr):
        # ∫_0^b (t - tq)(t - tr) / ((tp - tq)(tp - tr)) dt
        return (b**3 / 3 - (tq + tr) * b**2 / 2 + tq * tr * b) / ((tp - tq) * (tp - tr))

    return gs[0] * basis(t0, t1, t2) + gs[1] * basis(t1, t0, t2) + gs[2] * basis(t2, t0, t1)


def cumulative_clock(t, rate, x=None, x_prime=None, speed_fraction: float = 0.9):
    """Cumulative integral of the clock rate ``dτ/dt`` over the samples ``t``.

    Each interval integrates the parabola through three neighbouring samples
    (Simpson pairing, valid on non-uniform grids). The rate is singular or
    non-smooth in ``t`` at a contact endpoint, so wherever ``(x, x')`` are
    given and ``|x'|`` stays above ``speed_fraction`` of the slower endpoint speed,
    the interval instead uses ``dτ = dx / x'``. In the energy coordinate
    ``1/x'`` is a smooth function of ``x`` whatever the potential, because the
    motion there is a linear oscillator.
    """
    t = np.asarray(t, dtype=float)
    rate = np.asarray(rate, dtype=float)
    n = t.size
    out = np.zeros(n)
    if n < 3:
        out[1:] = np.cumsum(0.5 * np.diff(t) * (rate[1:] + rate[:-1]))
        return out
    fast = np.zeros(n, dtype=bool)
    if x is not None and x_prime is not None:
        x = np.asarray(x, dtype=float)
        x_prime = np.asarray(x_prime, dtype=float)
        ref = min(abs(x_prime[0]), abs(x_prime[-1]))
        fast = np.abs(x_prime) >= speed_fraction * ref
    for j in range(n - 1):
        i = min(j - (j % 2), n - 3)
        # stencil for the x-form: the three samples nearest the interval
        k = min(max(j - 1, 0), n - 3) if j > 0 else 0
        stencil = slice(k, k + 3)
        if fast[stencil].all() and np.all(np.diff(x[stencil]) != 0):
            piece = _lagrange_piece(x[stencil], 1.0 / x_prime[stencil], x[j], x[j + 1])
        else:
            piece = _lagrange_piece(t[i : i + 3], rate[i : i + 3], t[j], t[j + 1])
        out[j + 1] = out[j] + piece
    return out


def transform_trajectory(pot: ContactPotential, refs: ReferenceConstants, m: float, traj):
    """Map a physical contact trajectory into ``(τ, x, x')``.

    ``x'`` comes from the exact relation ``x' = sqrt(m/M) q'``; ``τ`` is the
    cumulative quadrature of the clock rate along the samples with ``τ_0 = 0``.
    """
    t = np.asarray(traj.t, dtype=float)
    q = np.asarray(traj.q, dtype=float)
    qdot = np.asarray(traj.qdot, dtype=float)
    if np.any(np.diff(t) <= 0):
        raise NonMonotonicTime("trajectory times must be strictly increasing")
    if np.any(q < 0):
        raise DomainError("trajectory contains negative penetration")

    x = x_of_q(pot, refs, q)
    x_prime = math.sqrt(m / refs.M) * qdot
    rate = np.zeros_like(q)
    inside = q > 0
    rate[inside] = time_gradient(pot, refs, m, q[inside])
    if np.any(~inside[1:-1]):
        raise DomainError("trajectory leaves contact before its last sample")
    tau = cumulative_clock(t, rate, x, x_prime)
    return TransformedTrajectory(tau=tau, x=np.asarray(x, dtype=float), x_prime=x_prime, refs=refs)
