"""Configuration-driven batch sweeps over (lambda, |k|) with file outputs.

A sweep computes one DN spectrum per lambda, one H_k matrix per k (shared
across the lambda axis and optionally cached on disk), solves the boundary
system at every grid cell, detects exceptional radii per lambda, and emits
CSV/JSON/PGM data products.  Output is deterministic: identical
configurations produce byte-identical samples.csv regardless of worker
count or cache state.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from . import analysis
from .bie import (
    HkCache,
    ScatteringSample,
    assemble_hk_matrix,
    scattering_sample,
)
from .potentials import (
    ParameterError,
    RadialProfile,
    bump_profile,
    conductivity_to_potential,
    family_member,
    sigma_profile,
    zero_profile,
)
from .radial_dn import DNSpectrum, dn_spectrum

__all__ = [
    "GridSpec",
    "SweepConfig",
    "SweepResult",
    "parse_config",
    "build_potentials",
    "run_sweep",
    "emit_outputs",
]

CACHE_DIR_ENV = "RADSCAT_CACHE_DIR"
_EXAMPLES = ("example1", "example2", "custom")


@dataclass(frozen=True)
class GridSpec:
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if self.step <= 0:
            raise ParameterError(f"grid step must be positive, got {self.step}")

    def values(self) -> np.ndarray:
        # stop < start yields an empty grid
        n = max(0, int(math.floor((self.stop - self.start) / self.step + 0.5)) + 1)
        return self.start + self.step * np.arange(n)

    @staticmethod
    def parse(text: str) -> "GridSpec":
        parts = text.split(":")
        if len(parts) != 3:
            raise ParameterError(f"grid must be start:stop:step, got {text!r}")
        return GridSpec(*(float(p) for p in parts))

    def __str__(self) -> str:
        return f"{self.start:g}:{self.stop:g}:{self.step:g}"


@dataclass
class SweepConfig:
    """Flat sweep settings; parse from `key = value` text via parse_config."""

    example: str = "example1"
    lambda_grid: GridSpec = field(default_factory=lambda: GridSpec(-2.0, 2.0, 0.25))
    k_grid: GridSpec = field(default_factory=lambda: GridSpec(0.05, 3.5, 0.05))
    N: int = 12
    M: int = 256
    w_params: Tuple[float, float] = (0.8, 0.9)
    sigma_params: Tuple[float, float, float] = (1.5, 0.3, 0.7)
    output_dir: str = "sweep_out"
    cache: bool = False
    cache_dir: Optional[str] = None
    workers: int = 1
    detect: bool = True
    blowup_threshold: float = analysis.BLOWUP_THRESHOLD
    min_sv_threshold: float = analysis.MIN_SV_THRESHOLD
    bisect_tol: float = analysis.BISECT_TOL

    def __post_init__(self):
        if self.example not in _EXAMPLES:
            raise ParameterError(f"example must be one of {_EXAMPLES}")
        if self.k_grid.start <= 0:
            raise ParameterError("k grid must be bounded away from zero")
        if not (1 <= self.N <= 25):
            raise ParameterError("truncation order N must lie in 1..25")
        if self.workers < 1:
            raise ParameterError("workers must be >= 1")

    def resolved_cache_dir(self) -> Path:
        env = os.environ.get(CACHE_DIR_ENV)
        if env:
            return Path(env)
        if self.cache_dir:
            return Path(self.cache_dir)
        return Path(self.output_dir) / "hk_cache"

    def echo(self) -> dict:
        return {
            "example": self.example,
            "lambda_grid": str(self.lambda_grid),
            "k_grid": str(self.k_grid),
            "N": self.N,
            "M": self.M,
            "w_r1": self.w_params[0],
            "w_r2": self.w_params[1],
            "sigma_a": self.sigma_params[0],
            "sigma_r1": self.sigma_params[1],
            "sigma_r2": self.sigma_params[2],
            "output_dir": self.output_dir,
            "cache": self.cache,
            "cache_dir": str(self.resolved_cache_dir()) if self.cache else None,
            "workers": self.workers,
            "detect": self.detect,
            "blowup_threshold": self.blowup_threshold,
            "min_sv_threshold": self.min_sv_threshold,
            "bisect_tol": self.bisect_tol,
        }


_BOOL = {"true": True, "false": False, "1": True, "0": False,
         "yes": True, "no": False}


def parse_config(path: Union[str, Path]) -> SweepConfig:
    """Read a flat `key = value` file (# starts a comment)."""
    values: dict = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"malformed config line: {raw!r}")
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip()

    cfg = SweepConfig()
    w1, w2 = cfg.w_params
    sa, s1, s2 = cfg.sigma_params
    for key, val in values.items():
        if key == "example":
            cfg.example = val
        elif key == "lambda_grid":
            cfg.lambda_grid = GridSpec.parse(val)
        elif key == "k_grid":
            cfg.k_grid = GridSpec.parse(val)
        elif key == "N":
            cfg.N = int(val)
        elif key == "M":
            cfg.M = int(val)
        elif key == "w_r1":
            w1 = float(val)
        elif key == "w_r2":
            w2 = float(val)
        elif key == "sigma_a":
            sa = float(val)
        elif key == "sigma_r1":
            s1 = float(val)
        elif key == "sigma_r2":
            s2 = float(val)
        elif key == "output_dir":
            cfg.output_dir = val
        elif key == "cache":
            cfg.cache = _BOOL[val.lower()]
        elif key == "cache_dir":
            cfg.cache_dir = val
        elif key == "workers":
            cfg.workers = int(val)
        elif key == "detect":
            cfg.detect = _BOOL[val.lower()]
        elif key == "blowup_threshold":
            cfg.blowup_threshold = float(val)
        elif key == "min_sv_threshold":
            cfg.min_sv_threshold = float(val)
        elif key == "bisect_tol":
            cfg.bisect_tol = float(val)
        else:
            raise ParameterError(f"unknown config key: {key}")
    cfg.w_params = (w1, w2)
    cfg.sigma_params = (sa, s1, s2)
    cfg.__post_init__()
    return cfg


def build_potentials(config: SweepConfig) -> Tuple[RadialProfile, RadialProfile]:
    """(base, bump) profiles for the configured example."""
    bump = bump_profile(*config.w_params)
    if config.example == "example1":
        base = zero_profile()
    else:
        amp, r1, r2 = config.sigma_params
        base = (
            conductivity_to_potential(sigma_profile(amp, r1, r2))
            if amp != 0.0
            else zero_profile()
        )
    return base, bump


@dataclass
class SweepResult:
    config: SweepConfig
    lambdas: np.ndarray
    ks: np.ndarray
    samples: List[List[ScatteringSample]]   # [i_lambda][i_k]
    spectra: List[DNSpectrum]
    reports: List[analysis.ExceptionalReport]
    timing: dict


def _spectrum_from_row(N: int, mu: np.ndarray, pole: bool, lam: float) -> DNSpectrum:
    with np.errstate(divide="ignore"):
        nu = np.where(np.abs(mu) > 1e-8, 1.0 / mu, np.nan)
    return DNSpectrum(N=N, mu=mu, nu=nu, pole_flag=pole, lam=lam)


def _k_task(args) -> Tuple[int, list]:
    """Worker unit: one k column across all lambdas; assembles H_k once."""
    (ik, k, N, M, mu_rows, poles, lambdas, cache_dir) = args
    cache = HkCache(cache_dir) if cache_dir is not None else None
    hk = assemble_hk_matrix(complex(k), N, M, cache=cache)
    out = []
    for mu, pole, lam in zip(mu_rows, poles, lambdas):
        spec = _spectrum_from_row(N, mu, pole, lam)
        s = scattering_sample(complex(k), spec, M=M, hk=hk)
        out.append((s.t, s.zero_mode_diag, s.min_sv, s.flagged))
    return ik, out


def _spot_check_cache(config: SweepConfig, ks: np.ndarray, cache: HkCache) -> int:
    """Compare 3 cached matrices against fresh assembly; raises on mismatch."""
    if len(ks) == 0:
        return 0
    rng = np.random.RandomState(0)
    picks = rng.choice(len(ks), size=min(3, len(ks)), replace=False)
    for ik in picks:
        k = complex(ks[ik])
        stored = cache.load(k, config.N, config.M)
        fresh = assemble_hk_matrix(k, config.N, config.M, cache=None)
        if stored is None or not np.array_equal(stored, fresh):
            raise IOError(f"cache entry for k={k} differs from fresh assembly")
    return len(picks)


def run_sweep(config: SweepConfig) -> SweepResult:
    """Execute the full sweep described by `config`.

    Spectra are computed once per lambda; each k column assembles (or
    loads) one H_k matrix shared across lambdas.  Worker count only
    affects wall time: results are assembled by grid index, so output is
    order independent.
    """
    timing: dict = {}
    t_start = time.time()
    base, bump = build_potentials(config)
    lambdas = config.lambda_grid.values()
    ks = config.k_grid.values()

    t0 = time.time()
    spectra = [
        dn_spectrum(family_member(base, bump, lam).combined, config.N, lam=float(lam))
        for lam in lambdas
    ]
    timing["spectra_s"] = time.time() - t0

    cache = HkCache(config.resolved_cache_dir()) if config.cache else None
    cache_dir = str(config.resolved_cache_dir()) if config.cache else None
    mu_rows = [spec.mu for spec in spectra]
    poles = [spec.pole_flag for spec in spectra]

    t0 = time.time()
    samples: List[List[Optional[ScatteringSample]]] = [
        [None] * len(ks) for _ in lambdas
    ]
    tasks = [
        (ik, float(k), config.N, config.M, mu_rows, poles,
         [float(l) for l in lambdas], cache_dir)
        for ik, k in enumerate(ks)
    ]
    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_k_task, tasks, chunksize=8))
    else:
        results = [_k_task(t) for t in tasks]
    for ik, row in results:
        for j, (t, diag, sv, flag) in enumerate(row):
            samples[j][ik] = ScatteringSample(
                k_modulus=float(ks[ik]), t=t, zero_mode_diag=diag,
                min_sv=sv, flagged=flag,
            )
    timing["solve_s"] = time.time() - t0

    if cache is not None:
        timing["cache_spot_checks"] = _spot_check_cache(config, ks, cache)

    t0 = time.time()
    reports: List[analysis.ExceptionalReport] = []
    if config.detect:
        for j, spec in enumerate(spectra):
            q = family_member(base, bump, float(lambdas[j])).combined

            def solve_at(km: float, _spec=spec) -> ScatteringSample:
                return scattering_sample(complex(km), _spec, M=config.M)

            reports.append(
                analysis.detect_exceptional_radii(
                    samples[j],
                    float(lambdas[j]),
                    solve_at=solve_at,
                    mu_lambda=spec.mu_at(0),
                    safe_scale=analysis.safe_k_scale(q),
                    blowup_threshold=config.blowup_threshold,
                    min_sv_threshold=config.min_sv_threshold,
                    bisect_tol=config.bisect_tol,
                )
            )
    timing["detect_s"] = time.time() - t0
    timing["total_s"] = time.time() - t_start

    return SweepResult(
        config=config,
        lambdas=lambdas,
        ks=ks,
        samples=[list(row) for row in samples],
        spectra=spectra,
        reports=reports,
        timing=timing,
    )


# ----------------------------------------------------------------------
# file outputs
# ----------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def emit_outputs(result: SweepResult, directory: Union[str, Path]) -> dict:
    """Write samples.csv, spectra.csv, reports.json, map.pgm, manifest.json.

    samples.csv is byte-deterministic for a given configuration; the
    manifest echoes the configuration and carries SHA-256 checksums of
    every emitted file (manifest timing fields vary run to run).
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []

    def finish() -> dict:
        manifest = {
            "config": result.config.echo(),
            "files": {p.name: _sha256(p) for p in written},
            "grid": {"lambdas": len(result.lambdas), "ks": len(result.ks)},
            "timing": result.timing,
        }
        (directory / "manifest.json").write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n"
        )
        return manifest

    try:
        samples_path = directory / "samples.csv"
        with open(samples_path, "w") as fh:
            fh.write("lambda,k,re_t,im_t,zero_mode_diag,min_sv,flag\n")
            for j, lam in enumerate(result.lambdas):
                for ik, k in enumerate(result.ks):
                    s = result.samples[j][ik]
                    fh.write(
                        f"{_fmt(lam)},{_fmt(k)},{_fmt(s.t.real)},{_fmt(s.t.imag)},"
                        f"{_fmt(s.zero_mode_diag)},{_fmt(s.min_sv)},{int(s.flagged)}\n"
                    )
        written.append(samples_path)

        spectra_path = directory / "spectra.csv"
        with open(spectra_path, "w") as fh:
            fh.write("lambda,n,mu_n,nu_n,pole_flag\n")
            for spec in result.spectra:
                for n in range(spec.N + 1):
                    fh.write(
                        f"{_fmt(spec.lam)},{n},{_fmt(spec.mu[n])},"
                        f"{_fmt(spec.nu[n])},{int(spec.pole_flag)}\n"
                    )
        written.append(spectra_path)

        reports_path = directory / "reports.json"
        reports_path.write_text(
            json.dumps([r.to_dict() for r in result.reports], indent=2,
                       sort_keys=True) + "\n"
        )
        written.append(reports_path)

        if len(result.lambdas) and len(result.ks):
            gray = np.empty((len(result.ks), len(result.lambdas)), dtype=np.uint8)
            for j in range(len(result.lambdas)):
                col = np.array([s.t.real for s in result.samples[j]])
                clamped = np.clip(col, -20.0, 20.0)
                gray[:, j] = np.round((clamped + 20.0) / 40.0 * 255.0).astype(np.uint8)
            gray = gray[::-1, :]  # top row = largest |k|
            pgm_path = directory / "map.pgm"
            with open(pgm_path, "wb") as fh:
                fh.write(f"P5\n{gray.shape[1]} {gray.shape[0]}\n255\n".encode())
                fh.write(gray.tobytes())
            written.append(pgm_path)
    except OSError:
        # abort, but leave a manifest of whatever completed
        finish()
        raise
    return finish()
