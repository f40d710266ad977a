"""Dirichlet-to-Neumann spectra of radial Schrodinger operators on the disc.

For a radial potential q the Dirichlet problem (-Delta + q) u = 0 in the
unit disc with boundary data e^{i n theta} separates into radial modes

    -(1/r) (r psi_n')' + (n^2 / r^2 + q(r)) psi_n = 0,
    psi_n regular at r = 0,  psi_n(1) = 1,

and the DN map is diagonal in the Fourier basis with real eigenvalues
mu_n = psi_n'(1), symmetric under n -> -n.  The Neumann-to-Dirichlet
eigenvalues are nu_n = 1 / mu_n wherever mu_n != 0.

The regular solution behaves like r^|n| at the origin (a regular singular
point), so each mode is integrated outward from r0 = 1e-4 with the
power-law data psi = r0^n, psi' = n r0^(n-1), corrected by the leading
series term psi ~ r^n (1 + q(0) r^2 / (4(n+1))).  The integration is
internally rescaled by r0^(-n) to keep the state well away from underflow;
the boundary derivative is read off the integrator state directly, never
by numerical differentiation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import solve_ivp

from .potentials import DomainError, RadialProfile

__all__ = [
    "DirichletPoleError",
    "RadialModeSolution",
    "DNSpectrum",
    "solve_radial_mode",
    "dn_eigenvalue",
    "dn_spectrum",
    "mu_prime_at_zero",
]

# |psi_n(1)| below this (in the unscaled r0^n normalization) flags a
# Dirichlet eigenvalue of -Delta + q in the disc.
POLE_THRESHOLD = 1e-8


class DirichletPoleError(ArithmeticError):
    """The Dirichlet solve hit an eigenvalue: psi_n(1) vanished.

    Carries the unscaled boundary value and the (huge) derivative ratio so
    spectrum sweeps can record the pole instead of aborting.
    """

    def __init__(self, n: int, boundary_value: float, mu_estimate: float):
        super().__init__(
            f"mode n={n}: boundary value {boundary_value:.3e} below pole threshold"
        )
        self.n = n
        self.boundary_value = boundary_value
        self.mu_estimate = mu_estimate


@dataclass(frozen=True)
class RadialModeSolution:
    """Radial factor psi_n of one boundary Fourier mode, normalized psi_n(1) = 1."""

    n: int
    r: np.ndarray
    values: np.ndarray
    derivative_at_1: float
    interpolant: Callable

    def __call__(self, r):
        return self.interpolant(r)


@dataclass(frozen=True)
class DNSpectrum:
    """DN eigenvalues mu_0..mu_N and ND eigenvalues nu_n = 1/mu_n.

    nu entries are NaN where mu_n vanishes (within 1e-8); mode indices
    extend to negative n through mu_{-n} = mu_n.
    """

    N: int
    mu: np.ndarray
    nu: np.ndarray
    pole_flag: bool
    lam: Optional[float] = None

    def mu_at(self, n: int) -> float:
        return float(self.mu[abs(n)])

    def dn_diagonal(self) -> np.ndarray:
        """Length 2N+1 diagonal [mu_N, ..., mu_1, mu_0, mu_1, ..., mu_N]."""
        idx = np.abs(np.arange(-self.N, self.N + 1))
        return self.mu[idx]


def solve_radial_mode(
    q: RadialProfile,
    n: int,
    rtol: float = 1e-11,
    atol: float = 1e-14,
    r0: float = 1e-4,
    grid_points: int = 257,
) -> RadialModeSolution:
    """Integrate one radial mode outward and normalize to psi_n(1) = 1.

    Parameters
    ----------
    q : RadialProfile
        Bounded radial potential.
    n : int
        Angular mode index, n >= 0.

    Raises
    ------
    DirichletPoleError
        If the unscaled boundary value |psi_n(1)| falls below 1e-8.
    """
    if n < 0:
        raise ValueError("mode index must be nonnegative; negative n mirror positive")

    q0 = float(q(0.0))
    c = q0 / (4.0 * (n + 1))
    # state rescaled by r0^(-n): y = [psi / r0^n, psi' / r0^n]
    y_init = np.array([1.0 + c * r0**2, n / r0 + (n + 2) * c * r0])

    n_sq = float(n * n)

    def rhs(r, y):
        return (y[1], (n_sq / (r * r) + float(q(r))) * y[0] - y[1] / r)

    sol = solve_ivp(
        rhs,
        (r0, 1.0),
        y_init,
        method="DOP853",
        rtol=rtol,
        atol=atol,
        dense_output=True,
    )
    if not sol.success:  # pragma: no cover - integrator failure is exceptional
        raise RuntimeError(f"radial mode solve failed for n={n}: {sol.message}")

    boundary, boundary_deriv = sol.y[0, -1], sol.y[1, -1]
    unscaled_boundary = boundary * r0**n
    mu = boundary_deriv / boundary if boundary != 0.0 else np.inf
    if abs(unscaled_boundary) < POLE_THRESHOLD:
        raise DirichletPoleError(n, float(unscaled_boundary), float(mu))

    grid = np.linspace(r0, 1.0, grid_points)
    values = sol.sol(grid)[0] / boundary
    dense = sol.sol
    inner_scale = values[0]

    def interpolant(r):
        scalar = np.ndim(r) == 0
        arr = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.empty_like(arr)
        inside = arr >= r0
        if np.any(inside):
            out[inside] = dense(arr[inside])[0] / boundary
        if np.any(~inside):
            # power-law continuation below the start radius
            out[~inside] = inner_scale * (arr[~inside] / r0) ** n
        return float(out[0]) if scalar else out

    return RadialModeSolution(
        n=n,
        r=grid,
        values=values,
        derivative_at_1=float(mu),
        interpolant=interpolant,
    )


def dn_eigenvalue(q: RadialProfile, n: int, **kwargs) -> float:
    """DN eigenvalue mu_n(q) = psi_|n|'(1); symmetric in n."""
    return solve_radial_mode(q, abs(n), **kwargs).derivative_at_1


def dn_spectrum(q: RadialProfile, N: int, lam: Optional[float] = None) -> DNSpectrum:
    """All DN eigenvalues mu_0..mu_N, recording Dirichlet poles as flags.

    A pole does not abort the sweep: the (huge) derivative ratio is kept so
    eigenvalue curves show the jump, and pole_flag is set.
    """
    if N < 1:
        raise ValueError(f"truncation order must be >= 1, got {N}")
    mu = np.empty(N + 1)
    pole = False
    for n in range(N + 1):
        try:
            mu[n] = dn_eigenvalue(q, n)
        except DirichletPoleError as err:
            mu[n] = err.mu_estimate
            pole = True
    with np.errstate(divide="ignore"):
        nu = np.where(np.abs(mu) > 1e-8, 1.0 / mu, np.nan)
    return DNSpectrum(N=N, mu=mu, nu=nu, pole_flag=pole, lam=lam)


def mu_prime_at_zero(
    base: RadialProfile,
    bump: RadialProfile,
    mu0_tolerance: float = 1e-6,
    nodes: int = 200,
) -> float:
    """Derivative of the boundary power pairing of the zero mode at lam = 0.

    Returns 2 pi * integral_0^1 bump(r) psi_0(r)^2 r dr, where psi_0 is the
    zero-mode solution of the base potential.  Requires the base to be of
    conductivity type (mu_0(base) ~ 0), which makes the value strictly
    positive for a nonnegative, nonzero bump.
    """
    mu0 = dn_eigenvalue(base, 0)
    if abs(mu0) > mu0_tolerance:
        raise DomainError(
            f"base potential is not of conductivity type: mu_0 = {mu0:.3e}"
        )
    psi0 = solve_radial_mode(base, 0)
    x, w = leggauss(nodes)
    r = 0.5 * (x + 1.0)
    wr = 0.5 * w
    integrand = np.asarray(bump(r), dtype=float) * psi0(r) ** 2 * r
    value = 2.0 * np.pi * float(np.dot(wr, integrand))
    if value <= 0.0:
        raise DomainError("bump integral is not positive; bump may vanish")
    return value
