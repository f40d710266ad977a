#!/usr/bin/env python3
"""Build the test-function bump, a conductivity profile, and the family
q = q0 + lambda * w, then print a few values and dump plottable CSVs.

Run from the repository root:  python demos/01_potentials.py
"""

import numpy as np

from radscat import (
    bump_profile,
    conductivity_to_potential,
    family_member,
    sigma_profile,
    zero_profile,
)

# The C^2 plateau bump: 1 on [0, 0.8], quintic ramp down to 0 at 0.9.
w = bump_profile(0.8, 0.9)
print("w(0.5)  =", w(0.5))
print("w(0.85) =", w(0.85), " (the quintic midpoint, exactly 1/2)")
print("w(0.95) =", w(0.95))

# A smooth radial conductivity peaking at 2.5 in the center, == 1 outside
# r = 0.7, and the potential of conductivity type it induces.
sigma = sigma_profile(amplitude=1.5, r1=0.3, r2=0.7)
q0 = conductivity_to_potential(sigma)
r = np.linspace(0, 1, 9)
print("\n   r     sigma(r)    q0(r)")
for ri in r:
    print(f"  {ri:.3f}  {sigma(ri):9.5f}  {float(q0(ri)):9.5f}")

# One-parameter families around the two base potentials.
fam_simple = family_member(zero_profile(), w, -5.0)
fam_conductive = family_member(q0, w, -5.0)
print("\nq(0.5) for lambda = -5, zero base:        ", fam_simple.combined(0.5))
print("q(0.5) for lambda = -5, conductivity base:",
      float(fam_conductive.combined(0.5)))

# Two-column CSVs for plotting.
w.dump_csv("demo_bump.csv")
fam_conductive.combined.dump_csv("demo_potential.csv")
print("\nwrote demo_bump.csv and demo_potential.csv")
