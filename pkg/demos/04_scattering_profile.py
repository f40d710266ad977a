#!/usr/bin/env python3
"""Scattering transform profiles t(|k|) across the singular circle.

For lambda < 0 the boundary system degenerates on a circle |k| = r(lambda)
and the transform jumps from -infinity to +infinity; for lambda > 0 the
profile stays regular.  This script prints both profiles and the small-k
behavior t(k) ~ -2 pi / log|k|.

Run from the repository root:  python demos/04_scattering_profile.py
"""

import numpy as np

from radscat import (
    bump_profile,
    dn_spectrum,
    family_member,
    scattering_sample,
    small_k_law,
    zero_profile,
)

w = bump_profile(0.8, 0.9)

for lam in (-1.0, 1.0):
    q = family_member(zero_profile(), w, lam).combined
    spec = dn_spectrum(q, N=12, lam=lam)
    print(f"\nlambda = {lam}:   mu_0 = {spec.mu[0]:+.5f}")
    print("   |k|      Re t(k)      min singular value")
    for km in (0.02, 0.04, 0.05, 0.054, 0.056, 0.06, 0.1, 0.5, 1.0, 2.0):
        s = scattering_sample(km, spec)
        print(f"  {km:6.3f}  {s.t.real:12.4f}   {s.min_sv:.3e}")

# Small |k|: the transform approaches -2 pi / log|k| logarithmically.
lam = 0.5
spec = dn_spectrum(family_member(zero_profile(), w, lam).combined, N=12, lam=lam)
print(f"\nsmall-k behavior at lambda = {lam}:")
print("   |k|       t(k)       -2 pi / log|k|")
for km in (1e-2, 1e-4, 1e-8, 1e-16):
    s = scattering_sample(km, spec)
    print(f"  {km:8.0e}  {s.t.real:9.5f}   {small_k_law(km):9.5f}")
