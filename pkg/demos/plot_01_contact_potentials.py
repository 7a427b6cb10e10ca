"""
Contact potentials and turning points
=====================================

Three families of monotone contact potentials, the overlap geometry of an
ellipsoid pressed into a wall, and the maximum compression reached for a
given impact energy.
"""

import numpy as np

from harmonic_contact import (
    PowerLawPotential,
    TabulatedPotential,
    VolumetricEllipsoidPotential,
    overlap_geometry,
    stiffening_margin,
    turning_point,
)

# Hertz-like power law: force k q^p
hertz = PowerLawPotential(k=1e6, p=1.5)
print("Hertz force at 1 mm:", hertz.dU(1e-3), "N")

# ellipsoid with semi-axes a, b, c (m), volumetric stiffness and exponent alpha
ell = VolumetricEllipsoidPotential(a=0.015, b=0.008, c=0.008, K_n=1e8, alpha=0.5)
S, V = overlap_geometry(ell, 6.706989e-3)
print(f"cross-section {S:.6e} m^2, overlap volume {V:.6e} m^3")
print("force there:", ell.dU(6.706989e-3), "N")

# maximum compression for a 50 g body arriving at 0.99 m/s
m, v0 = 0.05, 0.99
q_max = turning_point(ell, 0.5 * m * v0**2)
print(f"q_max = {q_max * 1e3:.6f} mm")

# the ellipsoid stiffens (2 U U'' >= U'^2) up to about 73.5 % of a
q = np.linspace(1e-6, ell.a, 2001)
margin = stiffening_margin(ell, q)
print("stiffening holds up to q/a =", q[np.argmax(margin < 0) - 1] / ell.a)

# measured data go through a monotone cubic interpolant
qs = np.linspace(0.0, 0.01, 51)
tab = TabulatedPotential(qs, 2e5 * qs**2.5 + 50 * qs**2, source="synthetic")
print("tabulated U(5 mm) =", tab.U(5e-3), "J")
