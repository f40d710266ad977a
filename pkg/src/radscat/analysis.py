"""Exceptional-circle detection and asymptotic laws for scattering sweeps.

A singular circle shows up in a |k|-sweep as a sign change of Re t with a
blow-up on at least one side, together with a collapse of the smallest
singular value of the boundary system.  Detections are refined by
bisection on the sign of Re t, re-solving the system at each bisection
point; the refinement also certifies the singular-value dip, which a
coarse scan grid cannot resolve on its own (the dip width shrinks with
the distance to the circle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from .bie import HkCache, ScatteringSample, assemble_hk_matrix, scattering_sample
from .faddeev import EULER_GAMMA
from .potentials import DomainError, ParameterError, RadialProfile
from .radial_dn import DNSpectrum

__all__ = [
    "DetectedRadius",
    "ExceptionalReport",
    "detect_exceptional_radii",
    "scan_exceptional_radii",
    "asymptotic_radius",
    "small_k_law",
    "safe_k_scale",
]

BLOWUP_THRESHOLD = 50.0
MIN_SV_THRESHOLD = 1e-3
BISECT_TOL = 1e-4
SMALL_K_CUTOFF = 0.1
_MAX_BISECT = 60


@dataclass(frozen=True)
class DetectedRadius:
    radius: float
    bracket_low: float
    bracket_high: float
    min_sv_at_dip: float


@dataclass(frozen=True)
class ExceptionalReport:
    """Per-lambda record of detected singular radii and the asymptotic laws."""

    lam: float
    detected_radii: List[DetectedRadius]
    asymptotic_radius: Optional[float]
    small_k_deviation: Optional[float]
    safe_k_scale: Optional[float]

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "radii": [
                {
                    "r": d.radius,
                    "lo": d.bracket_low,
                    "hi": d.bracket_high,
                    "min_sv": d.min_sv_at_dip,
                }
                for d in self.detected_radii
            ],
            "r_asym": self.asymptotic_radius,
            "small_k_dev": self.small_k_deviation,
            "safe_k_scale": self.safe_k_scale,
        }


def asymptotic_radius(mu_lambda: float) -> float:
    """Predicted singular radius exp(2 pi (h + 1/(2 pi mu))), h = -gamma/2pi.

    This is where the leading zero-mode factor 1 + mu (2 pi h - log|k|)
    vanishes; it is meaningful for small negative family parameters.
    """
    if mu_lambda == 0.0:
        raise DomainError("asymptotic radius is undefined at mu = 0")
    return math.exp(-EULER_GAMMA + 1.0 / mu_lambda)


def small_k_law(k_modulus: float) -> float:
    """Leading small-|k| value -2 pi / log|k| of the scattering transform."""
    if not (0.0 < k_modulus < 1.0):
        raise DomainError(f"small-k law is stated for 0 < |k| < 1, got {k_modulus}")
    return -2.0 * math.pi / math.log(k_modulus)


def safe_k_scale(q: RadialProfile, grid_points: int = 1000) -> float:
    """sup |2 q| over the disc: the scale beyond which |k| is provably
    free of exceptional points, up to an unspecified constant.  Reported
    as a scale only, never asserted as a guarantee."""
    r = np.linspace(0.0, 1.0, grid_points)
    return float(np.max(np.abs(2.0 * np.asarray(q(r), dtype=float))))


def _sign(x: float) -> float:
    return math.copysign(1.0, x)


def detect_exceptional_radii(
    samples: Sequence[ScatteringSample],
    lam: float,
    solve_at: Optional[Callable[[float], ScatteringSample]] = None,
    mu_lambda: Optional[float] = None,
    safe_scale: Optional[float] = None,
    blowup_threshold: float = BLOWUP_THRESHOLD,
    min_sv_threshold: float = MIN_SV_THRESHOLD,
    bisect_tol: float = BISECT_TOL,
    small_k_cutoff: float = SMALL_K_CUTOFF,
) -> ExceptionalReport:
    """Locate singular radii in an ordered |k|-sweep.

    A candidate interval requires a sign change of Re t between adjacent
    samples with |t| above `blowup_threshold` on at least one side.  Each
    candidate is narrowed by bisection on the sign of Re t to width
    `bisect_tol` (re-solving the system at bisection points via
    `solve_at`), continuing below that width until the smallest singular
    value observed dips under `min_sv_threshold`; candidates whose dip
    never materializes are rejected as regular sign changes.

    Parameters
    ----------
    samples : sequence of ScatteringSample
        Sorted by k_modulus on a uniform or near-uniform grid.
    lam : float
        Family parameter, recorded in the report.
    solve_at : callable, optional
        k_modulus -> ScatteringSample, required to refine any candidate.
    mu_lambda : float, optional
        Zero-mode DN eigenvalue at this lambda; enables the asymptotic
        radius entry (reported for mu < 0).
    """
    ks = np.array([s.k_modulus for s in samples])
    if len(ks) >= 2 and np.any(np.diff(ks) <= 0):
        raise ParameterError("samples must be sorted by |k| in increasing order")

    detections: List[DetectedRadius] = []
    for i in range(len(samples) - 1):
        a, b = samples[i], samples[i + 1]
        re_a, re_b = a.t.real, b.t.real
        if re_a == 0.0 or re_b == 0.0 or _sign(re_a) == _sign(re_b):
            continue
        if max(abs(a.t), abs(b.t)) < blowup_threshold:
            continue
        if solve_at is None:
            raise ParameterError(
                "singular candidate found but no solver was provided for refinement"
            )
        lo, hi = a.k_modulus, b.k_modulus
        sign_lo = _sign(re_a)
        sv_min = min(a.min_sv, b.min_sv)
        iterations = 0
        while iterations < _MAX_BISECT and (hi - lo) > 1e-13:
            width_ok = (hi - lo) <= bisect_tol
            if width_ok and sv_min <= min_sv_threshold:
                break
            mid = 0.5 * (lo + hi)
            s_mid = solve_at(mid)
            sv_min = min(sv_min, s_mid.min_sv)
            if _sign(s_mid.t.real) == sign_lo:
                lo = mid
            else:
                hi = mid
            iterations += 1
        if sv_min <= min_sv_threshold:
            detections.append(
                DetectedRadius(
                    radius=0.5 * (lo + hi),
                    bracket_low=lo,
                    bracket_high=hi,
                    min_sv_at_dip=sv_min,
                )
            )

    r_asym = None
    if mu_lambda is not None and mu_lambda < 0.0:
        r_asym = asymptotic_radius(mu_lambda)

    small_dev = None
    small = [s for s in samples if s.k_modulus <= small_k_cutoff]
    if small:
        small_dev = max(
            abs(s.t + 2.0 * math.pi / math.log(s.k_modulus)) / s.k_modulus
            for s in small
        )

    return ExceptionalReport(
        lam=lam,
        detected_radii=detections,
        asymptotic_radius=r_asym,
        small_k_deviation=small_dev,
        safe_k_scale=safe_scale,
    )


def scan_exceptional_radii(
    spectra: Sequence[DNSpectrum],
    k_start: float,
    k_stop: float,
    coarse_step: float,
    fine_step: float,
    M: int = 256,
    cache: Optional[HkCache] = None,
    safe_scales: Optional[Sequence[float]] = None,
    **detect_kwargs,
) -> List[ExceptionalReport]:
    """Two-stage singularity scan shared across several spectra.

    Stage 1 walks a coarse uniform |k| grid once, sharing each assembled
    H_k matrix across all spectra.  Stage 2 re-samples a fine uniform
    window around every sign change of Re t found for a given spectrum and
    runs the detector there.  A sample within r/8 of a circle of radius r
    sees |t| above the blow-up threshold, so the fine step bounds the
    smallest detectable radius at roughly 4x the step.
    """
    if k_start <= 0 or k_stop <= k_start:
        raise ParameterError("scan window must satisfy 0 < k_start < k_stop")
    if not spectra:
        return []
    n_coarse = int(round((k_stop - k_start) / coarse_step)) + 1
    coarse_ks = k_start + coarse_step * np.arange(n_coarse)
    N = spectra[0].N

    coarse: List[List[ScatteringSample]] = [[] for _ in spectra]
    for k in coarse_ks:
        hk = assemble_hk_matrix(complex(k), N, M, cache=cache)
        for row, spec in zip(coarse, spectra):
            row.append(scattering_sample(complex(k), spec, M=M, hk=hk))

    reports: List[ExceptionalReport] = []
    for j, spec in enumerate(spectra):
        row = coarse[j]

        def solve_at(km: float, _spec=spec) -> ScatteringSample:
            return scattering_sample(complex(km), _spec, M=M)

        detections: List[DetectedRadius] = []
        for i in range(len(row) - 1):
            ra, rb = row[i].t.real, row[i + 1].t.real
            if ra == 0.0 or rb == 0.0 or _sign(ra) == _sign(rb):
                continue
            lo = max(k_start, coarse_ks[i] - coarse_step)
            hi = min(k_stop, coarse_ks[i + 1] + coarse_step)
            n_fine = int(round((hi - lo) / fine_step)) + 1
            fine_ks = lo + fine_step * np.arange(n_fine)
            fine = [solve_at(km) for km in fine_ks if km <= k_stop]
            partial = detect_exceptional_radii(
                fine, spec.lam if spec.lam is not None else 0.0,
                solve_at=solve_at, **detect_kwargs,
            )
            for d in partial.detected_radii:
                if all(abs(d.radius - e.radius) > 2 * fine_step for e in detections):
                    detections.append(d)

        mu0 = spec.mu_at(0)
        r_asym = asymptotic_radius(mu0) if mu0 < 0.0 else None
        cutoff = detect_kwargs.get("small_k_cutoff", SMALL_K_CUTOFF)
        small = [s for s in row if s.k_modulus <= cutoff]
        small_dev = max(
            (abs(s.t + 2.0 * math.pi / math.log(s.k_modulus)) / s.k_modulus
             for s in small),
            default=None,
        )
        reports.append(
            ExceptionalReport(
                lam=spec.lam if spec.lam is not None else 0.0,
                detected_radii=sorted(detections, key=lambda d: d.radius),
                asymptotic_radius=r_asym,
                small_k_deviation=small_dev,
                safe_k_scale=None if safe_scales is None else safe_scales[j],
            )
        )
    return reports
