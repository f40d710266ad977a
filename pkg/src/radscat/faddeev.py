"""Faddeev fundamental solution and smooth harmonic kernels at zero energy.

The exponentially growing fundamental solution at spectral parameter 1 is

    g1(z) = -(1/2pi) e^{-iz} Re Ei(iz),

where Ei is the exponential integral continued through the complex plane
and the sign/prefactor is fixed by the requirement

    e^{iz} g1(z) + (1/2pi) log|z|  ->  -gamma/(2 pi)   as z -> 0

(gamma is Euler's constant).  Only Re Ei enters, and Re log(w) = log|w| is
branch independent, so the principal branch is used throughout.  The
smooth, real-valued, harmonic difference kernels are

    H1(z)  = e^{iz} g1(z) - G0(z),          G0(z) = -(1/2pi) log|z|,
    Hk(z)  = H1(k z) - log|k| / (2 pi),

with H1(0) = -gamma/(2 pi).  Near the (removable) singularity of the Ei
formula, H-values are recovered from a circle of directly evaluated
samples via the classical Poisson kernel.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .potentials import ParameterError

__all__ = [
    "EULER_GAMMA",
    "H1_AT_ZERO",
    "SERIES_RADIUS",
    "STABILIZE_BELOW",
    "POISSON_SAMPLES",
    "SingularPointError",
    "KernelEvaluation",
    "exp_integral",
    "g1",
    "g1_values",
    "h1",
    "h1_values",
    "h_kernel",
    "h_kernel_eval",
]

EULER_GAMMA = float(np.euler_gamma)
H1_AT_ZERO = -EULER_GAMMA / (2.0 * math.pi)

# Branch switch for Ei: power series below, divergent asymptotic series above.
SERIES_RADIUS = 30.0
# |k z| below which the Poisson-kernel path replaces the direct formula.
STABILIZE_BELOW = 0.05
POISSON_SAMPLES = 64

_MAX_SERIES_TERMS = 260


class SingularPointError(ValueError):
    """Evaluation requested exactly at a singular point (w = 0 or z = 0)."""


@dataclass(frozen=True)
class KernelEvaluation:
    """A kernel value together with the evaluation path that produced it."""

    value: float
    stabilized: bool


def _entire_part(w: np.ndarray) -> np.ndarray:
    """E(w) = sum_{m>=1} w^m / (m * m!), entire; Ei(w) = gamma + log w + E(w)."""
    w = np.asarray(w, dtype=complex)
    term = w.copy()
    total = w.copy()
    m = 1
    while m < _MAX_SERIES_TERMS:
        m += 1
        term = term * w * ((m - 1) / (m * m))
        total += term
        if np.max(np.abs(term)) <= 1e-17 * max(np.max(np.abs(total)), 1e-30):
            break
    return total


def _ei_asymptotic(w: complex) -> complex:
    """Divergent large-|w| series e^w / w * sum m! / w^m, optimally truncated."""
    s = 1.0 + 0.0j
    term = 1.0 + 0.0j
    m = 0
    while True:
        m += 1
        new = term * m / w
        if abs(new) >= abs(term) or m > 200:
            break
        term = new
        s += term
        if abs(term) <= 1e-17 * abs(s):
            break
    return cmath.exp(w) / w * s


def exp_integral(w: complex) -> complex:
    """Exponential integral Ei continued to complex arguments.

    Power series gamma + Log(w) + sum w^m/(m * m!) for |w| <= 30 (principal
    logarithm), asymptotic series e^w/w * sum m!/w^m beyond.

    Raises
    ------
    SingularPointError
        At w = 0, the logarithmic singularity.
    """
    w = complex(w)
    if w == 0:
        raise SingularPointError("Ei has a logarithmic singularity at w = 0")
    if abs(w) <= SERIES_RADIUS:
        return EULER_GAMMA + cmath.log(w) + complex(_entire_part(np.array([w]))[0])
    return _ei_asymptotic(w)


def _re_ei_values(w: np.ndarray) -> np.ndarray:
    """Re Ei on an array of nonzero complex arguments, branch independent."""
    w = np.asarray(w, dtype=complex)
    out = np.empty(w.shape, dtype=float)
    small = np.abs(w) <= SERIES_RADIUS
    if np.any(small):
        ws = w[small]
        out[small] = EULER_GAMMA + np.log(np.abs(ws)) + _entire_part(ws).real
    if np.any(~small):
        big = np.nonzero(~small.ravel())[0]
        flat_w = w.ravel()
        flat_out = out.ravel()
        for idx in big:
            flat_out[idx] = _ei_asymptotic(complex(flat_w[idx])).real
        out = flat_out.reshape(w.shape)
    return out


def g1_values(z: np.ndarray) -> np.ndarray:
    """Vectorized Faddeev fundamental solution at parameter 1 (z != 0)."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise SingularPointError("g1 is singular at z = 0")
    return -(0.5 / math.pi) * np.exp(-1j * z) * _re_ei_values(1j * z)


def g1(z: complex) -> complex:
    """Faddeev fundamental solution g1(z) = -(1/2pi) e^{-iz} Re Ei(iz)."""
    return complex(g1_values(np.array([complex(z)]))[0])


def _h1_direct(z: np.ndarray) -> np.ndarray:
    """H1 by the literal formula e^{iz} g1(z) + log|z|/(2pi); z != 0 required."""
    z = np.asarray(z, dtype=complex)
    g = np.exp(1j * z) * g1_values(z)
    return g.real + np.log(np.abs(z)) / (2.0 * math.pi)


_circle_cache: dict[float, np.ndarray] = {}


def _circle_values(radius: float) -> np.ndarray:
    """Direct H1 samples on |z| = radius, cached (immutable after fill)."""
    vals = _circle_cache.get(radius)
    if vals is None:
        theta = 2.0 * math.pi * np.arange(POISSON_SAMPLES) / POISSON_SAMPLES
        vals = _h1_direct(radius * np.exp(1j * theta))
        vals.setflags(write=False)
        _circle_cache[radius] = vals
    return vals


def _poisson_eval(z: np.ndarray, radius: float) -> np.ndarray:
    """Harmonic extension of the circle samples to interior points |z| < radius."""
    theta = 2.0 * math.pi * np.arange(POISSON_SAMPLES) / POISSON_SAMPLES
    ring = radius * np.exp(1j * theta)
    vals = _circle_values(radius)
    z = np.asarray(z, dtype=complex)[:, None]
    kernel = (radius**2 - np.abs(z) ** 2) / np.abs(ring[None, :] - z) ** 2
    return kernel.dot(vals) / POISSON_SAMPLES


def h1_values(z: np.ndarray, circle_radius: float = 0.1, stabilize: bool = True) -> np.ndarray:
    """Smooth harmonic kernel H1 on an array of points.

    Points with 0 < |z| < min(0.05, 3/4 circle_radius) are evaluated via the
    Poisson kernel on |z'| = circle_radius; z = 0 returns -gamma/(2pi) by
    continuity; everything else takes the direct formula.
    """
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=float)
    absz = np.abs(flat)
    zero = absz == 0.0
    cutoff = min(STABILIZE_BELOW, 0.75 * circle_radius) if stabilize else 0.0
    near = (~zero) & (absz < cutoff)
    far = (~zero) & (~near)
    if np.any(zero):
        out[zero] = H1_AT_ZERO
    if np.any(near):
        out[near] = _poisson_eval(flat[near], circle_radius)
    if np.any(far):
        out[far] = _h1_direct(flat[far])
    return out.reshape(z.shape)


def h1(z: complex) -> float:
    """H1 at a single point."""
    return float(h1_values(np.array([complex(z)]))[0])


def h_kernel_eval(k: complex, z: complex) -> KernelEvaluation:
    """H_k(z) = H1(kz) - log|k|/(2pi), reporting the evaluation path.

    The Poisson stabilization circle has radius min(0.1/|k|, 2) around the
    origin (in z), entered when |kz| < 0.05; points too close to the circle
    itself fall back to the direct formula, which is accurate there.
    """
    k = complex(k)
    if k == 0:
        raise ParameterError("h_kernel requires k != 0")
    z = complex(z)
    zeta = k * z
    shift = math.log(abs(k)) / (2.0 * math.pi)
    if zeta == 0:
        return KernelEvaluation(H1_AT_ZERO - shift, False)
    ring = min(0.1, 2.0 * abs(k))  # z-circle min(0.1/|k|, 2) mapped to kz
    cutoff = min(STABILIZE_BELOW, 0.75 * ring)
    stabilized = abs(zeta) < cutoff
    val = float(h1_values(np.array([zeta]), circle_radius=ring)[0])
    return KernelEvaluation(val - shift, stabilized)


def h_kernel(k: complex, z: complex) -> float:
    """H_k(z) as a plain float; see h_kernel_eval."""
    return h_kernel_eval(k, z).value
