"""
Contact trajectory simulation.

- :func:`simulate_reference`: adaptive Dormand-Prince 5(4) with dense output
  and exit-event location. This is the high-accuracy oracle.
- :func:`simulate_verlet`: fixed-step velocity Verlet for timestep
  experiments.
- :func:`analytic_damped_oscillator`: closed-form solution of
  ``M x'' + C0 x' + K x = 0`` over one contact half cycle.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NoExitDetected, OverdampedUnsupported, StepSizeUnderflow
from .potentials import ContactPotential, turning_point
from .regularize import ReferenceConstants, TransformedTrajectory

__all__ = [
    "ImpactScenario",
    "Trajectory",
    "VerletRun",
    "DormandPrince54",
    "simulate_reference",
    "simulate_verlet",
    "damped_oscillator",
    "analytic_damped_oscillator",
    "harmonic_verlet_growth",
]


@dataclass(frozen=True)
class ImpactScenario:
    """A single normal impact starting at zero penetration with speed ``v0``.

    ``damping`` is any object with ``coefficient(pot, q)``, usually a
    :class:`~harmonic_contact.damping.DampingSpec`.
    """

    m: float
    pot: ContactPotential
    v0: float
    refs: ReferenceConstants = field(default_factory=ReferenceConstants)
    damping: object | None = None

    def __post_init__(self):
        if not (self.m > 0 and math.isfinite(self.m)):
            raise ValueError(f"mass must be positive, got {self.m}")
        if not (self.v0 > 0 and math.isfinite(self.v0)):
            raise ValueError(f"impact speed must be positive, got {self.v0}")

    @property
    def E0(self) -> float:
        return 0.5 * self.m * self.v0**2

    def acceleration(self, q: float, v: float) -> float:
        if q <= 0.0:
            return 0.0
        force = self.pot.dU(q)
        if self.damping is not None:
            force += self.damping.coefficient(self.pot, q) * v
        return -force / self.m

    def describe(self) -> dict:
        out = {
            "m": self.m,
            "v0": self.v0,
            "potential": self.pot.describe(),
            "refs": {"K": self.refs.K, "M": self.refs.M},
        }
        if self.damping is not None:
            C0 = getattr(self.damping, "C0", None)
            out["damping"] = {"C0": C0} if C0 is not None else {"constant": self.damping.c}
        return out


@dataclass
class Trajectory:
    """Physical samples ``(t, q, q', E)`` of one contact."""

    t: np.ndarray
    q: np.ndarray
    qdot: np.ndarray
    E: np.ndarray
    exit_speed: float
    duration: float
    q_peak: float
    n_steps: int = 0

    def to_csv(self, header: dict | None = None) -> str:
        buf = io.StringIO()
        if header:
            for line in json.dumps(header, sort_keys=True, indent=1).splitlines():
                buf.write(f"# {line}\n")
        buf.write("t,q,qdot,E\n")
        for row in zip(self.t, self.q, self.qdot, self.E):
            buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Trajectory":
        lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        if not lines or lines[0].replace(" ", "") != "t,q,qdot,E":
            raise ValueError("trajectory CSV must have header t,q,qdot,E")
        data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)
        t, q, qdot, E = data.T
        return cls(
            t=t,
            q=q,
            qdot=qdot,
            E=E,
            exit_speed=abs(float(qdot[-1])),
            duration=float(t[-1] - t[0]),
            q_peak=float(q.max()),
        )


# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)
# continuous extension (Hairer, Norsett & Wanner, DOPRI5)
_D = np.array(
    [
        -12715105075 / 11282082432,
        0.0,
        87487479700 / 32700410799,
        -10690763975 / 1880347072,
        701980252875 / 199316789632,
        -1453857185 / 822651844,
        69997945 / 29380423,
    ]
)


@dataclass
class _DenseStep:
    t0: float
    h: float
    r: np.ndarray  # shape (5, n)

    def __call__(self, t):
        th = (np.asarray(t) - self.t0) / self.h
        th1 = 1.0 - th
        r = self.r
        th = th[..., None]
        th1 = th1[..., None]
        return r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])))


class DormandPrince54:
    """Embedded 5(4) Runge-Kutta pair with PI step control.

    Parameters
    ----------
    fun : callable
        ``fun(t, y) -> dy/dt`` on 1-D float arrays.
    rtol, atol : float
        Mixed error tolerance per component.
    """

    safety = 0.9
    beta = 0.04
    fac_min = 0.2
    fac_max = 10.0

    def __init__(self, fun, rtol, atol, max_step=math.inf):
        self.fun = fun
        self.rtol = rtol
        self.atol = atol
        self.max_step = max_step
        self._err_old = 1e-4

    def attempt(self, t, y, f0, h):
        """One trial step. Returns ``(y1, f1, err_norm, stages)``."""
        k = [f0]
        for i in range(1, 7):
            yi = y + h * sum(a * kj for a, kj in zip(_A[i], k) if a != 0.0)
            k.append(self.fun(t + _C[i] * h, yi))
        K = np.array(k)
        y1 = y + h * (_B @ K)
        f1 = k[6]
        scale = self.atol + self.rtol * np.maximum(np.abs(y), np.abs(y1))
        err = np.sqrt(np.mean((h * (_E @ K) / scale) ** 2))
        return y1, f1, err, K

    def dense(self, t, y, y1, h, K) -> _DenseStep:
        ydiff = y1 - y
        bspl = h * K[0] - ydiff
        r = np.array([y, ydiff, bspl, ydiff - h * K[6] - bspl, h * (_D @ K)])
        return _DenseStep(t, h, r)

    def next_step(self, h, err, accepted):
        expo = 0.2 - 0.75 * self.beta
        if err == 0.0:
            return min(h * self.fac_max, self.max_step)
        fac11 = err**expo
        if accepted:
            fac = fac11 / self._err_old**self.beta
            fac = min(1.0 / self.fac_min, max(1.0 / self.fac_max, fac / self.safety))
            self._err_old = max(err, 1e-4)
            return min(h / fac, self.max_step)
        return h / min(1.0 / self.fac_min, fac11 / self.safety)


def _bisect_dense(step: _DenseStep, comp: int, lo: float, hi: float, sign_lo: float, tol: float):
    """Root of component ``comp`` of the dense output between times lo and hi."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        val = float(step(mid)[comp])
        if abs(val) <= tol:
            return mid
        if np.sign(val) == sign_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def simulate_reference(
    scn: ImpactScenario,
    rtol: float = 1e-13,
    atol: float = 1e-13,
    n_samples: int = 2001,
    max_steps: int = 200_000,
) -> Trajectory:
    """Integrate one contact from entry to exit with an adaptive RK pair.

    The exit is the first downward crossing of ``q = 0``, located on the
    dense output by bisection. A step that overshoots the exit is retried
    once with its length cut to the predicted crossing, so the stages that
    define the final interpolant stay inside the contact.

    Returns samples uniform in ``t`` (``n_samples`` points, both contact
    endpoints included with ``q = 0`` exactly).
    """
    if n_samples < 3:
        raise ValueError("n_samples must be >= 3")

    def fun(t, y):
        return np.array([y[1], scn.acceleration(y[0], y[1])])

    q_scale = turning_point(scn.pot, scn.E0) if scn.E0 <= scn.pot.U_max else scn.pot.q_lim
    t_est = math.pi * q_scale / scn.v0
    t_max = 10.0 * t_est
    solver = DormandPrince54(fun, rtol, atol, max_step=t_est / 8.0)

    t = 0.0
    y = np.array([0.0, scn.v0])
    f = fun(t, y)
    h = 1e-3 * t_est
    steps: list[_DenseStep] = []
    q_peak = None
    t_exit = None
    retried = False
    n_steps = 0
    while n_steps < max_steps:
        if t > t_max:
            raise NoExitDetected(f"no contact exit within {t_max:.6g} s")
        if h < 1e-15 * max(t, t_est):
            raise StepSizeUnderflow(f"step size {h:.3g} underflow at t={t:.6g}")
        y1, f1, err, K = solver.attempt(t, y, f, h)
        if not np.all(np.isfinite(y1)):
            h *= 0.25
            continue
        if err > 1.0:
            h = solver.next_step(h, err, accepted=False)
            continue
        step = solver.dense(t, y, y1, h, K)
        if y1[0] <= 0.0 and y[0] > 0.0 and not retried:
            cross = _bisect_dense(step, 0, t, t + h, 1.0, 0.0)
            if t + 1e-6 * h < cross < t + h * (1.0 - 1e-9):
                retried = True
                h = (cross - t) * (1.0 + 1e-9)
                continue
        n_steps += 1
        steps.append(step)
        if q_peak is None and y[1] > 0.0 >= y1[1]:
            t_pk = _bisect_dense(step, 1, t, t + h, 1.0, 0.0)
            q_peak = float(step(t_pk)[0])
        if y1[0] <= 0.0 and t > 0.0:
            t_exit = _bisect_dense(step, 0, t, t + h, 1.0, 1e-15)
            break
        h_next = solver.next_step(h, err, accepted=True)
        t, y, f = t + h, y1, f1
        h = h_next
        retried = False
    if t_exit is None:
        raise NoExitDetected(f"no contact exit after {max_steps} steps")
    if q_peak is None:
        raise NoExitDetected("penetration never reached a maximum")

    times = np.linspace(0.0, t_exit, n_samples)
    starts = np.array([s.t0 for s in steps])
    idx = np.clip(np.searchsorted(starts, times, side="right") - 1, 0, len(steps) - 1)
    states = np.empty((n_samples, 2))
    for i in np.unique(idx):
        sel = idx == i
        states[sel] = steps[i](times[sel])
    states[0] = (0.0, scn.v0)
    states[-1, 0] = 0.0
    q = np.maximum(states[:, 0], 0.0)
    qdot = states[:, 1]
    energy = 0.5 * scn.m * qdot**2 + scn.pot.U(q)
    return Trajectory(
        t=times,
        q=q,
        qdot=qdot,
        E=energy,
        exit_speed=abs(float(qdot[-1])),
        duration=float(t_exit),
        q_peak=q_peak,
        n_steps=n_steps,
    )


@dataclass
class VerletRun:
    t: np.ndarray
    q: np.ndarray
    qdot: np.ndarray
    E: np.ndarray
    completed: bool
    reason: str

    @property
    def energy_drift(self) -> float:
        """Peak relative deviation of total energy from its initial value."""
        return float(np.max(np.abs(self.E - self.E[0])) / self.E[0])

    @property
    def max_q(self) -> float:
        return float(np.max(self.q))


def simulate_verlet(
    scn: ImpactScenario,
    dt: float,
    max_steps: int = 1_000_000,
    q_bound: float | None = None,
) -> VerletRun:
    """Fixed-step velocity Verlet through one contact.

    Stops at the first step with ``q <= 0`` (exit), when ``q`` leaves the
    potential's domain or exceeds ``q_bound``, or on overflow. Energy after
    exit counts kinetic energy only.
    """
    if not dt > 0:
        raise ValueError(f"timestep must be positive, got {dt}")
    pot, m = scn.pot, scn.m
    q, v = 0.0, scn.v0
    a = scn.acceleration(q, v)
    ts, qs, vs = [0.0], [q], [v]
    completed, reason = False, "max_steps"
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, max_steps + 1):
            v_half = v + 0.5 * dt * a
            q = q + dt * v_half
            if not math.isfinite(q):
                reason = "overflow"
                break
            if q > pot.q_lim or (q_bound is not None and q > q_bound):
                ts.append(n * dt)
                qs.append(q)
                vs.append(v_half)
                reason = "excursion"
                break
            a = scn.acceleration(q, v_half)
            v = v_half + 0.5 * dt * a
            ts.append(n * dt)
            qs.append(q)
            vs.append(v)
            if q <= 0.0:
                completed, reason = True, "exit"
                break
    q_arr = np.array(qs)
    v_arr = np.array(vs)
    inside = (q_arr > 0) & (q_arr <= pot.q_lim)
    U = np.zeros_like(q_arr)
    U[inside] = pot.U(q_arr[inside])
    U[q_arr > pot.q_lim] = np.inf
    energy = 0.5 * m * v_arr**2 + U
    return VerletRun(np.array(ts), q_arr, v_arr, energy, completed, reason)


def damped_oscillator(refs: ReferenceConstants, C0: float, E: float, tau):
    """``(x, x')`` of ``M x'' + C0 x' + K x = 0`` with ``x(0)=0``, ``x'(0)=sqrt(2E/M)``."""
    zeta = C0 / (2.0 * math.sqrt(refs.K * refs.M))
    if zeta >= 1.0:
        raise OverdampedUnsupported(f"damping ratio {zeta:.6g} >= 1")
    w0 = refs.omega0
    wd = w0 * math.sqrt(1.0 - zeta * zeta)
    sigma = zeta * w0
    v0 = math.sqrt(2.0 * E / refs.M)
    tau = np.asarray(tau, dtype=float)
    decay = np.exp(-sigma * tau)
    x = v0 / wd * decay * np.sin(wd * tau)
    xp = v0 * decay * (np.cos(wd * tau) - sigma / wd * np.sin(wd * tau))
    return x, xp


def analytic_damped_oscillator(
    refs: ReferenceConstants, C0: float, E: float, n_samples: int = 2001
) -> TransformedTrajectory:
    """Closed-form half cycle of the virtual spring-dashpot, uniform in ``τ``."""
    zeta = C0 / (2.0 * math.sqrt(refs.K * refs.M))
    if zeta >= 1.0:
        raise OverdampedUnsupported(f"damping ratio {zeta:.6g} >= 1")
    wd = refs.omega0 * math.sqrt(1.0 - zeta * zeta)
    tau = np.linspace(0.0, math.pi / wd, n_samples)
    x, xp = damped_oscillator(refs, C0, E, tau)
    x[-1] = 0.0
    return TransformedTrajectory(tau=tau, x=x, x_prime=xp, refs=refs)


def harmonic_verlet_growth(refs: ReferenceConstants, dtau: float, n_steps: int = 4000) -> float:
    """Amplitude growth of velocity Verlet on ``M x'' = -K x``.

    Returns ``max|x|`` over the second half of the run divided by that over
    the first half: about 1 when ``dtau < 2/Ω0``, astronomically large (or
    ``inf``) above it.
    """
    w2 = refs.K / refs.M
    x, v = 0.0, 1.0
    a = 0.0
    xs = np.empty(n_steps)
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(n_steps):
            v_half = v + 0.5 * dtau * a
            x = x + dtau * v_half
            a = -w2 * x
            v = v_half + 0.5 * dtau * a
            xs[n] = abs(x)
    half = n_steps // 2
    first, second = np.max(xs[:half]), np.max(xs[half:])
    if not np.isfinite(second):
        return math.inf
    return float(second / first)
