"""
Verification report
===================

Runs every numerical check for the three-speed ellipsoid scenario and
prints a pass/fail table, the same output as ``harmonic-contact verify``.
"""

from concurrent.futures import ThreadPoolExecutor

from harmonic_contact import DampingSpec, ReferenceConstants, VolumetricEllipsoidPotential
from harmonic_contact.verification import run_checks

ell = VolumetricEllipsoidPotential(a=0.015, b=0.008, c=0.008, K_n=1e8, alpha=0.5)
refs = ReferenceConstants(K=1.0, M=0.75)
m = 0.05

with ThreadPoolExecutor() as pool:
    results = run_checks(ell, m, [0.5, 0.99, 1.5], refs, DampingSpec(0.5, refs, m), executor=pool)

for r in results:
    value = "-" if r.value is None else f"{r.value:.2e}"
    print(f"{r.status:8s} {r.name:45s} {value}")
