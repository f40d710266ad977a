#!/usr/bin/env python3
"""Dirichlet-to-Neumann spectra of radial potentials.

Shows the free-space eigenvalues mu_n = n, the Bessel closed form for
constant potentials, the vanishing zero-mode eigenvalue of a
conductivity-type potential, and the eigenvalue curve mu_0(lambda) with
its poles at Dirichlet eigenvalues.

Run from the repository root:  python demos/02_dn_spectra.py
"""

import numpy as np

from radscat import (
    bessel_dn_oracle,
    bump_profile,
    constant_profile,
    conductivity_to_potential,
    dn_spectrum,
    family_member,
    mu_prime_at_zero,
    sigma_profile,
    zero_profile,
)

# Free space: the DN map multiplies e^{in theta} by |n|.
spec0 = dn_spectrum(zero_profile(), N=12)
print("free-space mu_n:", np.round(spec0.mu, 10))

# Constant potential: mu_n = sqrt(c) I_n'(sqrt(c)) / I_n(sqrt(c)).
q_const = constant_profile(1.0)
spec_c = dn_spectrum(q_const, N=4)
print("\n n   solver mu_n    Bessel closed form")
for n in range(5):
    print(f" {n}   {spec_c.mu[n]:.10f}  {bessel_dn_oracle(1.0, n).value:.10f}")

# Conductivity type: the zero mode is sigma^(1/2), so mu_0 = 0 and the
# derivative of the boundary pairing in lambda is 2 pi int w sigma r dr > 0.
w = bump_profile(0.8, 0.9)
q0 = conductivity_to_potential(sigma_profile())
spec_cond = dn_spectrum(q0, N=8)
print("\nconductivity-type mu_0:", spec_cond.mu[0])
print("boundary-pairing slope at lambda = 0:", mu_prime_at_zero(q0, w))

# The eigenvalue curve lambda -> mu_0(q_lambda): smooth through 0, poles
# where -Delta + q_lambda acquires a zero Dirichlet eigenvalue.
print("\n lambda   mu_0(lambda)   pole?")
for lam in np.arange(-7.0, 3.5, 1.0):
    spec = dn_spectrum(family_member(zero_profile(), w, lam).combined,
                       N=1, lam=lam)
    print(f" {lam:6.2f}  {spec.mu[0]:12.5f}   {spec.pole_flag}")
