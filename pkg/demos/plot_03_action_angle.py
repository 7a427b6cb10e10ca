"""
Action variable and contact duration
====================================

The action J(E) of the contact orbit and its derivative give the contact
duration T = 2π dJ/dE without integrating any trajectory.
"""

import numpy as np

from harmonic_contact import (
    ImpactScenario,
    VolumetricEllipsoidPotential,
    action,
    contact_duration,
    simulate_reference,
)

ell = VolumetricEllipsoidPotential(a=0.015, b=0.008, c=0.008, K_n=1e8, alpha=0.5)
m = 0.05

print(" v0 (m/s)   J (J s)        T quad (ms)   T sim (ms)    rel diff")
for v0 in (0.25, 0.5, 0.99, 1.5):
    E = 0.5 * m * v0**2
    J = action(ell, m, E)
    T = contact_duration(ell, m, E)
    T_sim = simulate_reference(ImpactScenario(m=m, pot=ell, v0=v0), n_samples=3).duration
    print(f"{v0:8.2f}  {J:.6e}  {T * 1e3:12.8f}  {T_sim * 1e3:12.8f}  {abs(T - T_sim) / T_sim:.1e}")

# a stiffening contact gets shorter as the impact gets harder
Es = np.geomspace(1e-5, 0.05, 6)
print("T(E) decreasing:", bool(np.all(np.diff([contact_duration(ell, m, E) for E in Es]) < 0)))
