"""Fourier-truncated boundary integral system on the unit circle.

The boundary trace of the exponentially growing solution solves

    (I + S_k (L_q - L_0)) psi = e^{ikz}|_{S^1},

written on the truncated Fourier basis phi_n = e^{in theta}/sqrt(2pi),
|n| <= N.  The single-layer operator splits as

    S_k = S_0 + H_k - log|k| P,

where S_0 and the DN matrices are diagonal, P projects on the n = 0 mode,
and H_k is the dense matrix of the smooth harmonic kernel H1(k(z - z')),
computed by the M-node periodic trapezoid rule in both boundary variables
(spectrally accurate for smooth periodic integrands).  The scattering
transform is then the boundary integral of e^{i conj(k) conj(z)} against
(L_q - L_0) psi.

Assembled H_k matrices depend only on (k, N, M) and may be cached on disk;
the cache is an optimization only and results are identical without it.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .faddeev import EULER_GAMMA, h1_values
from .potentials import ParameterError
from .radial_dn import DNSpectrum

__all__ = [
    "FourierTrace",
    "BoundarySystem",
    "TraceSolution",
    "ScatteringSample",
    "HkCache",
    "assemble_hk_matrix",
    "assemble_system",
    "rhs_exponential",
    "solve_trace",
    "scattering_transform",
    "scattering_sample",
    "zero_mode_diagnostic",
]

SQRT_2PI = math.sqrt(2.0 * math.pi)
DEFAULT_M = 256
SINGULAR_THRESHOLD = 1e-10


@dataclass(frozen=True)
class FourierTrace:
    """Truncated Fourier coefficient vector of a boundary function.

    coeff[j] is the coefficient of phi_n with n = j - N, so the layout is
    (-N, ..., 0, ..., N).
    """

    N: int
    coeff: np.ndarray

    def __post_init__(self):
        if self.coeff.shape != (2 * self.N + 1,):
            raise ParameterError(
                f"coefficient vector must have length {2 * self.N + 1}"
            )
        if not np.all(np.isfinite(self.coeff)):
            raise ParameterError("coefficient vector has non-finite entries")

    def __getitem__(self, n: int) -> complex:
        return complex(self.coeff[n + self.N])

    def sobolev_half_norm_sq(self) -> float:
        """Sum (1 + |n|) |a_n|^2, the squared H^{1/2}-type norm."""
        n = np.abs(np.arange(-self.N, self.N + 1))
        return float(np.sum((1.0 + n) * np.abs(self.coeff) ** 2))

    def evaluate(self, theta: np.ndarray) -> np.ndarray:
        """Boundary function values sum_n a_n e^{in theta} / sqrt(2 pi)."""
        n = np.arange(-self.N, self.N + 1)
        return np.exp(1j * np.multiply.outer(np.asarray(theta), n)).dot(
            self.coeff
        ) / SQRT_2PI


@dataclass(frozen=True)
class BoundarySystem:
    """The assembled operator I + (S0 + Hk - log|k| P)(Lq - L0) at one k."""

    k: complex
    N: int
    L0: np.ndarray
    Lq: np.ndarray
    S0: np.ndarray
    P: np.ndarray
    Hk: np.ndarray
    system: np.ndarray
    min_singular_value: float
    pole_flag: bool = False


@dataclass(frozen=True)
class TraceSolution:
    """Solved boundary trace with the LU residual and near-singular flag."""

    psi_hat: FourierTrace
    residual: float
    min_singular_value: float
    flagged: bool


@dataclass(frozen=True)
class ScatteringSample:
    """Scattering transform value and singularity diagnostics at one |k|."""

    k_modulus: float
    t: complex
    zero_mode_diag: float
    min_sv: float
    flagged: bool


# ----------------------------------------------------------------------
# H_k matrix assembly and on-disk cache
# ----------------------------------------------------------------------

def _check_m(M: int, N: int) -> None:
    if M < 8 * N or (M & (M - 1)) != 0:
        raise ParameterError(f"M must be a power of two >= 8N, got M={M}, N={N}")


def assemble_hk_matrix(
    k: complex,
    N: int,
    M: int = DEFAULT_M,
    cache: Optional["HkCache"] = None,
) -> np.ndarray:
    """Dense (2N+1)^2 matrix of the smooth kernel H1(k(z - z')).

    Entry (m, n) is (1/2pi) times the double boundary integral of
    H1(k(z - z')) e^{i n theta'} e^{-i m theta}, by the M-node periodic
    trapezoid rule in both variables.  The -log|k| P contribution of the
    full single-layer splitting is NOT included here; it is added at
    system assembly.
    """
    k = complex(k)
    if k == 0:
        raise ParameterError("assemble_hk_matrix requires k != 0")
    _check_m(M, N)
    if cache is not None:
        hit = cache.load(k, N, M)
        if hit is not None:
            return hit

    theta = 2.0 * math.pi * np.arange(M) / M
    z = np.exp(1j * theta)
    zeta = k * (z[:, None] - z[None, :])
    ring = min(0.1, 2.0 * abs(k))  # z-circle min(0.1/|k|, 2) mapped through k
    kernel = h1_values(zeta.ravel(), circle_radius=ring).reshape(M, M)

    n = np.arange(-N, N + 1)
    w_out = np.exp(-1j * np.multiply.outer(n, theta))  # (2N+1, M): e^{-im theta}
    w_in = np.exp(1j * np.multiply.outer(theta, n))    # (M, 2N+1): e^{+in theta'}
    hk = (2.0 * math.pi / M**2) * (w_out @ kernel @ w_in)

    if cache is not None:
        cache.store(k, N, M, hk)
    return hk


_CACHE_MAGIC = b"RSHK"
_CACHE_VERSION = 1


class HkCache:
    """One file per (k, N, M) key: versioned header + row-major complex data.

    Layout: magic "RSHK", uint32 version, float64 k.re, float64 k.im,
    uint32 N, uint32 M, then (2N+1)^2 complex entries as interleaved
    little-endian 8-byte floats.
    """

    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def path_for(self, k: complex, N: int, M: int) -> Path:
        key = f"hk_{k.real.hex()}_{k.imag.hex()}_N{N}_M{M}.bin"
        return self.directory / key.replace("+", "p").replace("-", "m")

    def store(self, k: complex, N: int, M: int, matrix: np.ndarray) -> Path:
        path = self.path_for(k, N, M)
        header = _CACHE_MAGIC + struct.pack(
            "<IddII", _CACHE_VERSION, k.real, k.imag, N, M
        )
        data = np.ascontiguousarray(matrix, dtype="<c16").tobytes()
        tmp = path.with_suffix(".tmp")
        tmp.write_bytes(header + data)
        tmp.replace(path)  # atomic publish: single writer, then shared readers
        return path

    def load(self, k: complex, N: int, M: int) -> Optional[np.ndarray]:
        path = self.path_for(k, N, M)
        if not path.exists():
            return None
        raw = path.read_bytes()
        head = struct.calcsize("<IddII")
        if len(raw) < 4 + head or raw[:4] != _CACHE_MAGIC:
            raise IOError(f"corrupt cache file {path}")
        version, kre, kim, n_stored, m_stored = struct.unpack(
            "<IddII", raw[4:4 + head]
        )
        if version != _CACHE_VERSION or (kre, kim, n_stored, m_stored) != (
            k.real, k.imag, N, M,
        ):
            raise IOError(f"cache key mismatch in {path}")
        side = 2 * N + 1
        mat = np.frombuffer(raw[4 + head:], dtype="<c16").reshape(side, side)
        return mat.astype(complex)

    def clear(self) -> int:
        removed = 0
        for path in self.directory.glob("hk_*.bin"):
            path.unlink()
            removed += 1
        return removed


# ----------------------------------------------------------------------
# system assembly and solve
# ----------------------------------------------------------------------

def assemble_system(
    k: complex,
    spectrum: DNSpectrum,
    M: int = DEFAULT_M,
    cache: Optional[HkCache] = None,
    hk: Optional[np.ndarray] = None,
) -> BoundarySystem:
    """Assemble I + (S0 + Hk - log|k| P)(Lq - L0) and its conditioning.

    A Dirichlet-pole flag on the spectrum propagates to the system; the
    system is still assembled (the singularity is the object of study).
    """
    k = complex(k)
    if k == 0:
        raise ParameterError("assemble_system requires k != 0")
    N = spectrum.N
    if hk is None:
        hk = assemble_hk_matrix(k, N, M, cache=cache)

    n = np.arange(-N, N + 1)
    absn = np.abs(n)
    l0 = absn.astype(float)
    lq = spectrum.dn_diagonal()
    with np.errstate(divide="ignore"):
        s0 = np.where(n != 0, 0.5 / np.maximum(absn, 1), 0.0)
    p = np.zeros(2 * N + 1)
    p[N] = 1.0

    single_layer = hk.copy()
    single_layer[np.arange(2 * N + 1), np.arange(2 * N + 1)] += s0
    single_layer[N, N] -= math.log(abs(k))
    system = np.eye(2 * N + 1, dtype=complex) + single_layer * (lq - l0)[None, :]
    min_sv = float(np.linalg.svd(system, compute_uv=False)[-1])
    return BoundarySystem(
        k=k, N=N, L0=l0, Lq=lq, S0=s0, P=p, Hk=hk, system=system,
        min_singular_value=min_sv, pole_flag=spectrum.pole_flag,
    )


def rhs_exponential(k: complex, N: int) -> FourierTrace:
    """Fourier vector of e^{ikz} on the unit circle.

    The expansion e^{ikz} = sum_{n>=0} (ik)^n/n! e^{in theta} has no
    negative modes; coefficients carry the sqrt(2pi) basis normalization.
    """
    coeff = np.zeros(2 * N + 1, dtype=complex)
    term = 1.0 + 0.0j
    ik = 1j * complex(k)
    for n in range(N + 1):
        if n > 0:
            term *= ik / n
        coeff[N + n] = SQRT_2PI * term
    return FourierTrace(N=N, coeff=coeff)


def solve_trace(
    system: BoundarySystem,
    rhs: FourierTrace,
    singular_threshold: float = SINGULAR_THRESHOLD,
) -> TraceSolution:
    """Solve the boundary system by dense LU with partial pivoting.

    Near-singular systems (min singular value below the threshold) are not
    rejected: the solution is returned flagged, with the conditioning
    attached, since singularity detection consumes exactly those solves.
    """
    if rhs.N != system.N:
        raise ParameterError("rhs truncation order does not match the system")
    flagged = system.min_singular_value <= singular_threshold
    try:
        psi = np.linalg.solve(system.system, rhs.coeff)
    except np.linalg.LinAlgError:
        psi, *_ = np.linalg.lstsq(system.system, rhs.coeff, rcond=None)
        flagged = True
    residual = float(np.linalg.norm(system.system @ psi - rhs.coeff))
    return TraceSolution(
        psi_hat=FourierTrace(N=system.N, coeff=psi),
        residual=residual,
        min_singular_value=system.min_singular_value,
        flagged=flagged,
    )


def scattering_transform(
    k: complex,
    psi_hat: FourierTrace,
    spectrum: DNSpectrum,
    M: int = DEFAULT_M,
) -> complex:
    """Boundary integral for the scattering transform at one k.

    g = (Lq - L0) psi on the circle, then
        t(k) ~ int_0^{2pi} e^{i conj(k) e^{-i theta}} g(theta) dtheta
    by the M-node periodic trapezoid rule.  The quadrature is spectrally
    accurate; the truncation to |n| <= N is most accurate for k near zero.
    """
    k = complex(k)
    if k == 0:
        raise ParameterError("scattering_transform requires k != 0")
    N = spectrum.N
    n = np.arange(-N, N + 1)
    ghat = (spectrum.dn_diagonal() - np.abs(n)) * psi_hat.coeff
    theta = 2.0 * math.pi * np.arange(M) / M
    g = np.exp(1j * np.multiply.outer(theta, n)).dot(ghat) / SQRT_2PI
    weight = np.exp(1j * np.conj(k) * np.exp(-1j * theta))
    return complex((2.0 * math.pi / M) * np.dot(weight, g))


def zero_mode_diagnostic(k_modulus: float, mu0: float) -> float:
    """D = 1 + mu0 (2 pi h - log|k|) with h = -gamma/(2pi); vanishing D marks
    the leading-order singularity of the zero mode."""
    return 1.0 + mu0 * (-EULER_GAMMA - math.log(k_modulus))


def scattering_sample(
    k: complex,
    spectrum: DNSpectrum,
    M: int = DEFAULT_M,
    cache: Optional[HkCache] = None,
    hk: Optional[np.ndarray] = None,
    singular_threshold: float = SINGULAR_THRESHOLD,
) -> ScatteringSample:
    """Assemble, solve, and evaluate t at one k, with diagnostics."""
    system = assemble_system(k, spectrum, M=M, cache=cache, hk=hk)
    sol = solve_trace(system, rhs_exponential(k, spectrum.N), singular_threshold)
    t = scattering_transform(k, sol.psi_hat, spectrum, M=M)
    return ScatteringSample(
        k_modulus=abs(complex(k)),
        t=t,
        zero_mode_diag=zero_mode_diagnostic(abs(complex(k)), spectrum.mu_at(0)),
        min_sv=system.min_singular_value,
        flagged=sol.flagged or system.pole_flag,
    )
