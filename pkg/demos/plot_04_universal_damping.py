"""
Universal damping and velocity-independent restitution
======================================================

Choosing C(q) proportional to U'/sqrt(U) makes the regularised system a
constant-coefficient spring-dashpot. Its coefficient of restitution then
depends only on the damping ratio, not on the impact speed.
"""

import numpy as np

from harmonic_contact import (
    ConstantDamping,
    DampingSpec,
    ImpactScenario,
    PowerLawPotential,
    ReferenceConstants,
    VolumetricEllipsoidPotential,
    damping_ratio,
    predicted_restitution,
    simulate_reference,
    transform_trajectory,
    transformed_damping,
    universal_C,
)
from harmonic_contact.damping import loglog_slope
from harmonic_contact.verification import log_spiral_residual

ell = VolumetricEllipsoidPotential(a=0.015, b=0.008, c=0.008, K_n=1e8, alpha=0.5)
refs = ReferenceConstants(K=1.0, M=0.75)
m = 0.05
spec = DampingSpec(C0=0.5, refs=refs, m=m)
print(f"zeta = {damping_ratio(spec):.6f}, predicted e = {predicted_restitution(spec):.12f}")

for v0 in (0.5, 0.99, 1.5):
    scn = ImpactScenario(m=m, pot=ell, v0=v0, refs=refs, damping=spec)
    traj = simulate_reference(scn)
    tt = transform_trajectory(ell, refs, m, traj)
    resid, slope = log_spiral_residual(tt, spec.C0)
    print(f"v0={v0:4.2f}  e={traj.exit_speed / v0:.12f}  log-spiral residual {resid:.1e}, slope {slope:.9f}")

# for a power law, C(q) scales as q^((p-1)/2); Hertz gives 1/4
q = np.geomspace(1e-6, 1e-3, 100)
for p in (1.0, 1.5, 2.0):
    print(f"p={p}: fitted exponent {loglog_slope(q, universal_C(spec, PowerLawPotential(1e6, p), q)):.6f}")

# a constant physical dashpot is not universal: C_* drifts with x
c_star = transformed_damping(ConstantDamping(0.5), PowerLawPotential(1e8, 2.0), refs, m, q)
print(f"constant dashpot: C_* varies by {(c_star.max() - c_star.min()) / c_star.mean():.0%}")
