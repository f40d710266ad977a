#!/usr/bin/env python3
"""The exponentially growing fundamental solution and its smooth kernels.

Verifies, numerically and in plain sight, the properties the boundary
integral method rests on: the g1 closed form against direct quadrature of
its defining Fourier integral, the -gamma/(2 pi) anchor value, realness,
harmonicity, and the mean value property.

Run from the repository root:  python demos/03_faddeev_kernel.py
"""

import numpy as np

from radscat import EULER_GAMMA, exp_integral, g1, gk_integral_oracle, h_kernel

# The complex exponential integral driving everything.
print("Ei(1) =", exp_integral(1.0).real, " (1.8951178163559368)")

# g1 against brute-force 2D quadrature of the defining integral.
print("\n point z          g1 closed form          Fourier-integral oracle")
for z in (0.5 + 0.3j, 1.0 + 0.0j, -0.8 + 0.6j):
    res = gk_integral_oracle(z)
    print(f" {z!s:12}  {g1(z):.8f}  {res.value:.8f}  (+- {res.estimated_error:.1e})")

# Anchor: e^{iz} g1(z) + log|z|/(2 pi) -> -gamma/(2 pi) as z -> 0.
for az in (1e-2, 1e-5, 1e-8):
    z = az * np.exp(0.9j)
    val = (np.exp(1j * z) * g1(z)).real + np.log(az) / (2 * np.pi)
    print(f"anchor at |z| = {az:.0e}: {val:+.12f}   "
          f"(limit {-EULER_GAMMA / (2 * np.pi):+.12f})")

# H_k is real, smooth, harmonic; the mean value property holds exactly.
k = 1.7 + 0.4j
theta = 2 * np.pi * np.arange(256) / 256
ring = np.mean([h_kernel(k, 0.8 * np.exp(1j * t)) for t in theta])
print(f"\nmean of H_k over |z| = 0.8: {ring:.12f}")
print(f"H_k(0)                    : {h_kernel(k, 0.0):.12f}")

h = 1e-3
z = 0.3 + 0.2j
lap = (h_kernel(k, z + h) + h_kernel(k, z - h) + h_kernel(k, z + 1j * h)
       + h_kernel(k, z - 1j * h) - 4 * h_kernel(k, z)) / h**2
print(f"5-point Laplacian of H_k at {z}: {lap:.2e}")
