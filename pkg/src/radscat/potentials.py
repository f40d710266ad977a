"""Radial potentials on the unit disc.

Builds the three ingredients used throughout the package: a C^2 plateau
bump w(r), conductivity-type background potentials q0 = sigma^{-1/2}
Laplacian(sigma^{1/2}), and one-parameter families q = q0 + lam * w.
All profiles are radial functions of r = |z|, equal their baseline value
outside a support radius <= 1, and are immutable once constructed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "ParameterError",
    "DomainError",
    "RadialProfile",
    "PotentialFamilyMember",
    "quintic_step",
    "test_bump",
    "bump_profile",
    "zero_profile",
    "constant_profile",
    "sigma_profile",
    "conductivity_to_potential",
    "family_member",
]


class ParameterError(ValueError):
    """Invalid parameter combination (radii ordering, grid spec, ...)."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


def quintic_step(t):
    """Monotone C^2 step 1 -> 0 on [0, 1]: 1 - 10 t^3 + 15 t^4 - 6 t^5."""
    return 1.0 + t**3 * (-10.0 + t * (15.0 - 6.0 * t))


def _quintic_step_d1(t):
    # d/dt = -30 t^2 (1 - t)^2
    return -30.0 * t**2 * (1.0 - t) ** 2


def _quintic_step_d2(t):
    # d2/dt2 = -60 t (1 - t)(1 - 2t); vanishes at t = 0 and t = 1
    return -60.0 * t * (1.0 - t) * (1.0 - 2.0 * t)


def _check_bump_radii(r1: float, r2: float) -> None:
    if not (0.0 < r1 < r2 < 1.0):
        raise ParameterError(
            f"bump radii must satisfy 0 < R1 < R2 < 1, got R1={r1}, R2={r2}"
        )


def test_bump(r, r1: float, r2: float):
    """Radial C^2 plateau bump: 1 on [0, R1], quintic ramp on (R1, R2), 0 beyond.

    Parameters
    ----------
    r : float or ndarray
        Radius (or radii), must be >= 0.
    r1, r2 : float
        Plateau edge and support radius, 0 < R1 < R2 < 1.

    Returns
    -------
    float or ndarray
        Value in [0, 1].
    """
    _check_bump_radii(r1, r2)
    if np.ndim(r) == 0:
        rv = float(r)
        if rv < 0.0:
            raise DomainError(f"radius must be nonnegative, got {rv}")
        if rv <= r1:
            return 1.0
        if rv >= r2:
            return 0.0
        return float(quintic_step((rv - r1) / (r2 - r1)))
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0.0):
        raise DomainError("radius must be nonnegative")
    t = np.clip((arr - r1) / (r2 - r1), 0.0, 1.0)
    return quintic_step(t)


@dataclass(frozen=True)
class RadialProfile:
    """An immutable radial function r -> value on [0, infinity).

    Attributes
    ----------
    evaluator : callable
        Vectorized map r -> value.  Must equal `baseline` for
        r >= support_radius.
    support_radius : float
        Radius in (0, 1] beyond which the profile equals its baseline.
    smoothness : str
        Informal tag ("C2", "C0", "Cinf-sampled").
    baseline : float
        Far-field value: 0 for potentials and bumps, 1 for conductivities.
    d1, d2 : callable, optional
        Analytic first/second radial derivatives when available.
    """

    evaluator: Callable
    support_radius: float
    smoothness: str = "C2"
    baseline: float = 0.0
    d1: Optional[Callable] = None
    d2: Optional[Callable] = None

    def __post_init__(self):
        if not (0.0 < self.support_radius <= 1.0):
            raise ParameterError(
                f"support_radius must lie in (0, 1], got {self.support_radius}"
            )
        grid = np.linspace(0.0, 1.0, 257)
        vals = np.asarray(self.evaluator(grid), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise DomainError("profile evaluates to non-finite values on [0, 1]")
        tail = grid >= self.support_radius + 1e-12
        if np.any(np.abs(vals[tail] - self.baseline) > 1e-12):
            raise DomainError(
                "profile does not settle to its baseline beyond the support radius"
            )

    def __call__(self, r):
        return self.evaluator(r)

    def sample(self, n: int = 1000) -> tuple[np.ndarray, np.ndarray]:
        """Profile values on a uniform n-point grid over [0, 1]."""
        r = np.linspace(0.0, 1.0, n)
        return r, np.asarray(self.evaluator(r), dtype=float)

    def dump_csv(self, path, n: int = 1000) -> None:
        """Write (r, value) rows for plotting."""
        r, v = self.sample(n)
        with open(path, "w") as fh:
            fh.write("r,value\n")
            for ri, vi in zip(r, v):
                fh.write(f"{ri:.17g},{vi:.17g}\n")


@dataclass(frozen=True)
class PotentialFamilyMember:
    """One member q = base + lambda * bump of a potential family."""

    base: RadialProfile
    bump: RadialProfile
    lam: float
    combined: RadialProfile


def bump_profile(r1: float = 0.8, r2: float = 0.9) -> RadialProfile:
    """The plateau bump as a RadialProfile with analytic derivatives."""
    _check_bump_radii(r1, r2)
    width = r2 - r1

    def ev(r):
        return test_bump(r, r1, r2)

    def d1(r):
        arr = np.asarray(r, dtype=float)
        t = np.clip((arr - r1) / width, 0.0, 1.0)
        out = _quintic_step_d1(t) / width
        if np.ndim(r) == 0:
            return float(out)
        return out

    def d2(r):
        arr = np.asarray(r, dtype=float)
        t = np.clip((arr - r1) / width, 0.0, 1.0)
        out = _quintic_step_d2(t) / width**2
        if np.ndim(r) == 0:
            return float(out)
        return out

    return RadialProfile(ev, support_radius=r2, smoothness="C2", d1=d1, d2=d2)


def zero_profile(support_radius: float = 1.0) -> RadialProfile:
    """The identically-zero potential."""

    def ev(r):
        if np.ndim(r) == 0:
            return 0.0
        return np.zeros_like(np.asarray(r, dtype=float))

    return RadialProfile(ev, support_radius=support_radius, smoothness="Cinf-sampled",
                         d1=ev, d2=ev)


def constant_profile(value: float, radius: float = 1.0) -> RadialProfile:
    """Potential equal to `value` on [0, radius], zero beyond."""

    def ev(r):
        if np.ndim(r) == 0:
            return value if float(r) <= radius else 0.0
        arr = np.asarray(r, dtype=float)
        return np.where(arr <= radius, value, 0.0)

    return RadialProfile(ev, support_radius=radius, smoothness="C0")


def sigma_profile(amplitude: float = 1.5, r1: float = 0.3, r2: float = 0.7) -> RadialProfile:
    """Default rotationally symmetric conductivity sigma = 1 + a * bump.

    Peaks at 1 + a at the center and is identically 1 for r >= R2, so the
    resulting conductivity-type potential is compactly supported in the
    open unit disc.
    """
    if amplitude <= -1.0:
        raise ParameterError("amplitude must exceed -1 so that sigma stays positive")
    b = bump_profile(r1, r2)

    def ev(r):
        return 1.0 + amplitude * b(r)

    def d1(r):
        return amplitude * b.d1(r)

    def d2(r):
        return amplitude * b.d2(r)

    return RadialProfile(ev, support_radius=r2, smoothness="C2", baseline=1.0,
                         d1=d1, d2=d2)


def conductivity_to_potential(sigma: RadialProfile, fd_step: float = 1e-5) -> RadialProfile:
    """Potential q0 of conductivity type from a positive radial conductivity.

    With f = sigma^(1/2), returns the radial Laplacian quotient
        q0(r) = f''(r)/f(r) + f'(r) / (r f(r)),
    using the symmetric limit Delta f(0) = 2 f''(0) at the origin.  Analytic
    sigma derivatives are used when the profile carries them; otherwise
    centered differences with step `fd_step` (profiles are even in r, so
    negative arguments reflect).

    Raises
    ------
    DomainError
        If sigma is not strictly positive on a dense sample grid.
    """
    grid = np.linspace(0.0, 1.0, 1001)
    svals = np.asarray(sigma(grid), dtype=float)
    if np.any(svals <= 0.0):
        raise DomainError("conductivity must be strictly positive on [0, 1]")

    analytic = sigma.d1 is not None and sigma.d2 is not None
    support = sigma.support_radius

    def _f_parts(arr):
        s = np.asarray(sigma(arr), dtype=float)
        f = np.sqrt(s)
        if analytic:
            s1 = np.asarray(sigma.d1(arr), dtype=float)
            s2 = np.asarray(sigma.d2(arr), dtype=float)
            f1 = s1 / (2.0 * f)
            f2 = s2 / (2.0 * f) - s1**2 / (4.0 * f * s)
        else:
            h = fd_step
            fp = np.sqrt(np.asarray(sigma(np.abs(arr + h)), dtype=float))
            fm = np.sqrt(np.asarray(sigma(np.abs(arr - h)), dtype=float))
            f1 = (fp - fm) / (2.0 * h)
            f2 = (fp - 2.0 * f + fm) / h**2
        return f, f1, f2

    def ev(r):
        scalar = np.ndim(r) == 0
        arr = np.atleast_1d(np.asarray(r, dtype=float))
        f, f1, f2 = _f_parts(arr)
        with np.errstate(divide="ignore", invalid="ignore"):
            q = (f2 + f1 / arr) / f
        near0 = arr < 1e-8
        if np.any(near0):
            # radial Laplacian limit at the origin: f'/r -> f''(0)
            q = np.where(near0, 2.0 * f2 / f, q)
        q = np.where(arr >= support, 0.0, q)
        return float(q[0]) if scalar else q

    return RadialProfile(ev, support_radius=support, smoothness="C0")


def family_member(base: RadialProfile, bump: RadialProfile, lam: float) -> PotentialFamilyMember:
    """Form q = base + lam * bump, validating the bump.

    The bump must be nonnegative (tolerance 1e-12 on a 1000-point grid) and
    not identically zero.
    """
    r = np.linspace(0.0, 1.0, 1000)
    bvals = np.asarray(bump(r), dtype=float)
    if np.any(bvals < -1e-12):
        raise DomainError("bump profile has negative samples")
    if np.all(bvals == 0.0):
        raise DomainError("bump profile is identically zero")

    lam = float(lam)

    def ev(rr):
        return base(rr) + lam * bump(rr)

    order = {"C0": 0, "C2": 1, "Cinf-sampled": 2}
    tag = min((base.smoothness, bump.smoothness), key=lambda s: order.get(s, 0))
    combined = RadialProfile(
        ev,
        support_radius=max(base.support_radius, bump.support_radius),
        smoothness=tag,
    )
    return PotentialFamilyMember(base=base, bump=bump, lam=lam, combined=combined)
