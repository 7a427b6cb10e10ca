"""
Damping laws for the dissipative contact ``m q'' + C(q) q' + U'(q) = 0``.

Under the harmonic regularisation the physical coefficient ``C(q)`` becomes
``C_*(x) = C(q) sqrt(M/m) dq/dx``. The transformed system is a
constant-coefficient spring-dashpot exactly when

    C(q) = C0 sqrt(m/M) U'(q) / sqrt(2 K U(q)),

which is what :class:`DampingSpec` implements. :class:`ConstantDamping` is a
plain dashpot kept for counterexamples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OverdampedUnsupported
from .potentials import ContactPotential
from .regularize import ReferenceConstants, dx_dq, gradient_ratio

__all__ = [
    "DampingSpec",
    "ConstantDamping",
    "universal_C",
    "damping_ratio",
    "predicted_restitution",
    "transformed_damping",
    "loglog_slope",
]


@dataclass(frozen=True)
class DampingSpec:
    """Universal damping with virtual dashpot ``C0`` in the ``(K, M)`` units."""

    C0: float
    refs: ReferenceConstants
    m: float

    def __post_init__(self):
        if not (self.C0 >= 0 and math.isfinite(self.C0)):
            raise ValueError(f"C0 must be finite and >= 0, got {self.C0}")
        if not self.m > 0:
            raise ValueError(f"mass must be positive, got {self.m}")

    def coefficient(self, pot: ContactPotential, q):
        return universal_C(self, pot, q)


@dataclass(frozen=True)
class ConstantDamping:
    """Position-independent physical dashpot ``C(q) = c``."""

    c: float

    def coefficient(self, pot: ContactPotential, q):
        arr = np.asarray(q, dtype=float)
        if np.any(arr <= 0):
            raise DomainError("damping coefficient is sampled for q > 0 only")
        out = np.full_like(arr, self.c)
        return float(out) if out.ndim == 0 else out


def universal_C(spec: DampingSpec, pot: ContactPotential, q):
    """Physical damping coefficient (N s/m) of the universal law."""
    K, M = spec.refs.K, spec.refs.M
    return spec.C0 * math.sqrt(spec.m / M) * gradient_ratio(pot, q) / math.sqrt(K)


def damping_ratio(spec: DampingSpec) -> float:
    return spec.C0 / (2.0 * math.sqrt(spec.refs.K * spec.refs.M))


def predicted_restitution(spec: DampingSpec) -> float:
    """Exit/entry speed ratio ``exp(-π ζ / sqrt(1 - ζ^2))``.

    Independent of impact speed, because entry and exit speeds map to
    ``x'`` by the same constant factor.
    """
    zeta = damping_ratio(spec)
    if zeta >= 1.0:
        raise OverdampedUnsupported(f"damping ratio {zeta:.6g} >= 1 has no oscillatory exit")
    return math.exp(-math.pi * zeta / math.sqrt(1.0 - zeta * zeta))


def transformed_damping(damping, pot: ContactPotential, refs: ReferenceConstants, m: float, q):
    """Reconstruct ``C_*(x) = C(q) sqrt(M/m) dq/dx`` at penetrations ``q > 0``."""
    C = damping.coefficient(pot, q)
    return C * math.sqrt(refs.M / m) / dx_dq(pot, refs, q)


def loglog_slope(q, C) -> float:
    """Least-squares slope of ``log C`` against ``log q``."""
    slope, _ = np.polyfit(np.log(np.asarray(q)), np.log(np.asarray(C)), 1)
    return float(slope)
