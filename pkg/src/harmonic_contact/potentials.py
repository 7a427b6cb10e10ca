"""
Monotone one-dimensional contact potentials.

Every potential stores elastic energy ``U(q)`` at penetration ``q >= 0`` and
satisfies

- ``U(0) = 0``
- ``U'(q) > 0`` for ``0 < q < q_lim``
- a unique turning point ``U(q_max) = E`` for every attainable ``E > 0``.

Three families are provided: :class:`PowerLawPotential`,
:class:`VolumetricEllipsoidPotential` (alpha-regularised overlap volume of an
ellipsoid pressed against a plane) and :class:`TabulatedPotential`
(monotone cubic interpolation of user data). All evaluations accept scalars
or arrays and are pure; instances are immutable.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, EnergyOutOfRange, InvalidPotential

__all__ = [
    "ContactPotential",
    "PowerLawPotential",
    "VolumetricEllipsoidPotential",
    "TabulatedPotential",
    "turning_point",
    "stiffening_margin",
    "overlap_geometry",
]

TABULATED_HEADER = "q_m,U_J"


def _wrap(values, scalar):
    return float(values) if scalar else values


class ContactPotential(abc.ABC):
    """Abstract contact potential with energy, force and stiffness."""

    #: upper end of the penetration domain (m); ``inf`` when unbounded
    q_lim: float = math.inf

    def U(self, q):
        q, scalar = self._checked(q)
        return _wrap(self._U(q), scalar)

    def dU(self, q):
        q, scalar = self._checked(q)
        return _wrap(self._dU(q), scalar)

    def d2U(self, q):
        q, scalar = self._checked(q)
        return _wrap(self._d2U(q), scalar)

    @abc.abstractmethod
    def _U(self, q: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def _dU(self, q: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def _d2U(self, q: np.ndarray) -> np.ndarray: ...

    def _checked(self, q):
        arr = np.asarray(q, dtype=float)
        if np.any(arr < 0.0) or np.any(arr > self.q_lim) or np.any(np.isnan(arr)):
            raise DomainError(
                f"penetration outside [0, {self.q_lim}] for {type(self).__name__}"
            )
        return arr, arr.ndim == 0

    @property
    def U_max(self) -> float:
        """Largest storable energy, ``U(q_lim)`` (``inf`` when unbounded)."""
        if math.isinf(self.q_lim):
            return math.inf
        return self.U(self.q_lim)

    def breakpoints(self, q_max: float) -> np.ndarray:
        """Penetrations in ``(0, q_max)`` where ``U''`` is not smooth."""
        return np.empty(0)

    def describe(self) -> dict:
        """JSON-serialisable description, used in CSV header echoes."""
        return {"type": type(self).__name__}


@dataclass(frozen=True)
class PowerLawPotential(ContactPotential):
    """``U(q) = k q^(p+1) / (p+1)``, force ``k q^p``."""

    k: float
    p: float

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise InvalidPotential(f"power-law stiffness k must be positive, got {self.k}")
        if not (self.p > 0 and math.isfinite(self.p)):
            raise InvalidPotential(f"power-law exponent p must be positive, got {self.p}")

    def _U(self, q):
        return self.k * q ** (self.p + 1.0) / (self.p + 1.0)

    def _dU(self, q):
        return self.k * q**self.p

    def _d2U(self, q):
        if self.p == 1.0:
            return np.full_like(q, self.k)
        with np.errstate(divide="ignore"):
            return self.k * self.p * q ** (self.p - 1.0)

    def describe(self):
        return {"type": "power_law", "k": self.k, "p": self.p}


@dataclass(frozen=True)
class VolumetricEllipsoidPotential(ContactPotential):
    """Ellipsoid pressed along its ``a`` semi-axis into a rigid plane.

    The overlap cap has volume ``V_c`` and cross-section ``S_n = dV_c/dδ``;
    the energy is ``K_n V_c^(alpha+1) / (alpha+1)``. The domain stops at
    ``δ = a``, the hemisphere depth.
    """

    a: float
    b: float
    c: float
    K_n: float
    alpha: float
    q_lim: float = field(init=False, repr=False)

    def __post_init__(self):
        for name in ("a", "b", "c", "K_n", "alpha"):
            val = getattr(self, name)
            if not (val > 0 and math.isfinite(val)):
                raise InvalidPotential(f"ellipsoid parameter {name} must be positive, got {val}")
        object.__setattr__(self, "q_lim", float(self.a))

    @property
    def _shape(self) -> float:
        return math.pi * self.b * self.c / self.a**2

    def overlap(self, delta):
        """Return ``(S_n, V_c)`` at penetration ``delta`` (no domain check)."""
        f = self._shape
        area = f * (2.0 * self.a * delta - delta * delta)
        volume = f * (self.a * delta * delta - delta**3 / 3.0)
        return area, volume

    def _U(self, q):
        _, vol = self.overlap(q)
        return self.K_n / (self.alpha + 1.0) * vol ** (self.alpha + 1.0)

    def _dU(self, q):
        area, vol = self.overlap(q)
        return self.K_n * vol**self.alpha * area

    def _d2U(self, q):
        area, vol = self.overlap(q)
        darea = self._shape * (2.0 * self.a - 2.0 * q)
        with np.errstate(divide="ignore", invalid="ignore"):
            first = np.where(vol > 0, self.alpha * vol ** (self.alpha - 1.0) * area**2, 0.0)
        return self.K_n * (first + vol**self.alpha * darea)

    def describe(self):
        return {
            "type": "ellipsoid",
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "K_n": self.K_n,
            "alpha": self.alpha,
        }


class TabulatedPotential(ContactPotential):
    """Monotone piecewise-cubic interpolant of sampled ``(q, U)`` pairs.

    Slopes follow the Fritsch-Carlson (PCHIP) construction, which keeps the
    interpolant strictly increasing for strictly increasing data. ``d2U`` is
    the interpolant's second derivative and is only piecewise continuous.
    """

    def __init__(self, q, U, source: str | None = None):
        q = np.array(q, dtype=float)
        U = np.array(U, dtype=float)
        if q.ndim != 1 or q.shape != U.shape or q.size < 3:
            raise InvalidPotential("tabulated potential needs >= 3 matching (q, U) samples")
        if q[0] != 0.0 or U[0] != 0.0:
            raise InvalidPotential("tabulated potential must start at (q=0, U=0)")
        if np.any(np.diff(q) <= 0):
            raise InvalidPotential("tabulated q must be strictly increasing")
        if np.any(np.diff(U) <= 0):
            raise InvalidPotential("tabulated U must be strictly increasing")
        self._q = q
        self._Uv = U
        self._interp = PchipInterpolator(q, U, extrapolate=False)
        self._d1 = self._interp.derivative(1)
        self._d2 = self._interp.derivative(2)
        self.q_lim = float(q[-1])
        self.source = source
        # PCHIP may clip the end slopes to zero; interior slopes stay positive
        probe = np.linspace(q[0], q[-1], 64 * q.size)[1:-1]
        if np.any(self._d1(probe) <= 0):
            raise InvalidPotential("interpolated force is not strictly positive")

    @classmethod
    def from_csv(cls, path) -> "TabulatedPotential":
        """Read a two-column CSV with header ``q_m,U_J``."""
        path = Path(path)
        with path.open() as fh:
            header = fh.readline().strip()
        if header.replace(" ", "") != TABULATED_HEADER:
            raise InvalidPotential(f"{path}: expected header {TABULATED_HEADER!r}, got {header!r}")
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        if data.shape[1] != 2:
            raise InvalidPotential(f"{path}: expected two columns")
        return cls(data[:, 0], data[:, 1], source=str(path))

    @property
    def samples(self) -> tuple[np.ndarray, np.ndarray]:
        return self._q.copy(), self._Uv.copy()

    def breakpoints(self, q_max: float) -> np.ndarray:
        return self._q[(self._q > 0) & (self._q < q_max)]

    def _U(self, q):
        return np.asarray(self._interp(q))

    def _dU(self, q):
        return np.asarray(self._d1(q))

    def _d2U(self, q):
        return np.asarray(self._d2(q))

    def describe(self):
        out = {"type": "tabulated", "n_samples": int(self._q.size)}
        if self.source:
            out["path"] = self.source
        return out


def overlap_geometry(pot: VolumetricEllipsoidPotential, delta: float) -> tuple[float, float]:
    """Contact cross-section ``S_n`` (m^2) and overlap volume ``V_c`` (m^3)."""
    if delta < 0 or delta > pot.a:
        raise DomainError(f"ellipsoid overlap defined for 0 <= delta <= a={pot.a}, got {delta}")
    area, volume = pot.overlap(float(delta))
    return float(area), float(volume)


def stiffening_margin(pot: ContactPotential, q):
    """``2 U U'' - U'^2``; non-negative where the contact locally stiffens."""
    arr = np.asarray(q, dtype=float)
    if np.any(arr <= 0) or np.any(arr > pot.q_lim):
        raise DomainError(f"stiffening margin needs 0 < q <= {pot.q_lim}")
    return 2.0 * pot.U(q) * pot.d2U(q) - pot.dU(q) ** 2


def turning_point(pot: ContactPotential, E: float, max_iter: int = 400) -> float:
    """Maximum compression ``q_max`` with ``U(q_max) = E``.

    A doubling (or halving) search brackets the root, bisection shrinks the
    bracket to adjacent floats, and one guarded Newton step polishes.

    Raises
    ------
    EnergyOutOfRange
        ``E <= 0`` or ``E`` above the energy stored at the domain limit.
    InvalidPotential
        ``U`` fails to increase between probe points.
    """
    E = float(E)
    if not (E > 0 and math.isfinite(E)):
        raise EnergyOutOfRange(f"energy must be positive and finite, got {E}")
    if E > pot.U_max:
        raise EnergyOutOfRange(f"energy {E} exceeds U(q_lim)={pot.U_max}")

    q_lim = pot.q_lim
    hi = 0.5 * q_lim if math.isfinite(q_lim) else 1.0
    U_hi = pot.U(hi)
    lo, U_lo = 0.0, 0.0
    for _ in range(max_iter):
        if U_hi >= E:
            break
        lo, U_lo = hi, U_hi
        hi = min(2.0 * hi, q_lim)
        U_hi = pot.U(hi)
        if U_hi <= U_lo:
            raise InvalidPotential(f"U not increasing between q={lo} and q={hi}")
    else:
        raise EnergyOutOfRange(f"could not bracket energy {E}")
    # shrink from above so that lo > 0 whenever possible
    for _ in range(max_iter):
        trial = 0.5 * hi
        U_trial = pot.U(trial)
        if U_trial < E:
            lo, U_lo = trial, U_trial
            break
        if U_trial > U_hi:
            raise InvalidPotential(f"U not increasing between q={trial} and q={hi}")
        hi, U_hi = trial, U_trial
        if hi == 0.0:
            break

    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        U_mid = pot.U(mid)
        if U_mid < U_lo or U_mid > U_hi:
            raise InvalidPotential(f"U not monotone near q={mid}")
        if U_mid < E:
            lo, U_lo = mid, U_mid
        else:
            hi, U_hi = mid, U_mid

    q = hi if abs(U_hi - E) <= abs(U_lo - E) else lo
    res = pot.U(q) - E
    force = pot.dU(q)
    if force > 0:
        q_new = q - res / force
        if lo <= q_new <= hi and abs(pot.U(q_new) - E) < abs(res):
            q = q_new
    if q <= 0:
        raise InvalidPotential("turning point collapsed to zero")
    return float(q)
