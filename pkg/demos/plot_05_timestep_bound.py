"""
Critical timestep bound
=======================

Pulling the Verlet limit 2/Ω0 of the virtual oscillator back through the
fastest clock rate gives a closed-form timestep for explicit integration.
For a stiffening contact it reduces to 2 m v0 / U'(q_max).
"""

from harmonic_contact import (
    PowerLawPotential,
    ReferenceConstants,
    VolumetricEllipsoidPotential,
    dt_safe_stiffening,
    stability_report,
    verify_bound,
)
from harmonic_contact.dynamics import harmonic_verlet_growth

ell = VolumetricEllipsoidPotential(a=0.015, b=0.008, c=0.008, K_n=1e8, alpha=0.5)
m = 0.05

print(" v0    q_max (mm)   U'(q_max) (N)   dt_safe (ms)   shortcut (ms)")
for v0 in (0.5, 0.99, 1.5):
    rep = stability_report(ell, m, v0)
    short = dt_safe_stiffening(m, v0, rep.force_at_qmax, rep.regime)
    print(f"{v0:4.2f}  {rep.q_max * 1e3:10.6f}  {rep.force_at_qmax:13.6f}  "
          f"{rep.dt_safe * 1e3:12.6f}  {short * 1e3:12.6f}")

# the reference constants cancel
other = stability_report(ell, m, 0.99, ReferenceConstants(K=7.0, M=3.0))
print("dt_safe with (K, M) = (7, 3):", other.dt_safe * 1e3, "ms")

# a single Verlet contact at a tenth of the bound stays within 5 % energy error
rep = stability_report(ell, m, 0.99)
v = verify_bound(ell, m, 0.99, 0.1 * rep.dt_safe)
print(f"0.1 dt_safe: stable={v.stable}, drift {v.energy_drift:.2%}")

# near the bound the first step overshoots the turning point
v = verify_bound(ell, m, 0.99, 0.999 * rep.dt_safe)
print(f"0.999 dt_safe: stable={v.stable}, drift {v.energy_drift:.0%}, max_q/q_max {v.max_q / v.q_max:.2f}")

# for a linear spring the limit 2 sqrt(m/k) is the classical Verlet threshold
unit = ReferenceConstants(K=1.0, M=1.0)
print("growth at 1.99:", harmonic_verlet_growth(unit, 1.99), " at 2.01:", harmonic_verlet_growth(unit, 2.01))
print("linear spring regime:", stability_report(PowerLawPotential(1.0, 1.0), 1.0, 1.0).regime.value)
