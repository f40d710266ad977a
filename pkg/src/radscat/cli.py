"""Command-line front end: sweeps, single profiles, spectra, verification.

Subcommands
-----------
sweep      run a configured (lambda, |k|) sweep and emit data files
profile    scattering transform along one |k| row at a fixed lambda
spectrum   DN/ND eigenvalues at a fixed lambda
verify     cross-check core numerics against the independent oracles
cache      manage the H_k matrix cache (--clear)
kernel     dump H_k on a Cartesian grid as CSV for harmonicity inspection
potential  dump the potential profile q(r) as two-column CSV
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis, bie, oracles, sweep
from .faddeev import EULER_GAMMA, g1, h_kernel
from .potentials import family_member
from .radial_dn import dn_spectrum
from .sweep import CACHE_DIR_ENV, GridSpec, SweepConfig, build_potentials


def _example_config(args) -> SweepConfig:
    cfg = SweepConfig()
    cfg.example = args.example
    if getattr(args, "N", None):
        cfg.N = args.N
    if getattr(args, "M", None):
        cfg.M = args.M
    return cfg


def _cmd_sweep(args) -> int:
    cfg = sweep.parse_config(args.config)
    if args.output_dir:
        cfg.output_dir = args.output_dir
    result = sweep.run_sweep(cfg)
    manifest = sweep.emit_outputs(result, cfg.output_dir)
    n_radii = sum(len(r.detected_radii) for r in result.reports)
    print(f"sweep complete: {manifest['grid']['lambdas']} lambdas x "
          f"{manifest['grid']['ks']} k-values, {n_radii} singular radii detected")
    print(f"outputs in {cfg.output_dir}: {', '.join(sorted(manifest['files']))}")
    return 0


def _cmd_profile(args) -> int:
    cfg = _example_config(args)
    base, bump = build_potentials(cfg)
    q = family_member(base, bump, args.lam).combined
    spec = dn_spectrum(q, cfg.N, lam=args.lam)
    grid = GridSpec.parse(args.k_grid)
    rows = []
    for k in grid.values():
        s = bie.scattering_sample(complex(k), spec, M=cfg.M)
        rows.append(s)

    def solve_at(km: float) -> bie.ScatteringSample:
        return bie.scattering_sample(complex(km), spec, M=cfg.M)

    report = analysis.detect_exceptional_radii(
        rows, args.lam, solve_at=solve_at, mu_lambda=spec.mu_at(0),
        safe_scale=analysis.safe_k_scale(q),
    )
    out = sys.stdout if args.out is None else open(args.out, "w")
    try:
        out.write("k,re_t,im_t,zero_mode_diag,min_sv,flag\n")
        for s in rows:
            out.write(f"{s.k_modulus:.17g},{s.t.real:.17g},{s.t.imag:.17g},"
                      f"{s.zero_mode_diag:.17g},{s.min_sv:.17g},{int(s.flagged)}\n")
    finally:
        if args.out is not None:
            out.close()
    for d in report.detected_radii:
        print(f"# singular radius {d.radius:.6f} in "
              f"[{d.bracket_low:.6f}, {d.bracket_high:.6f}], "
              f"min sv {d.min_sv_at_dip:.2e}", file=sys.stderr)
    if report.asymptotic_radius is not None:
        print(f"# asymptotic radius {report.asymptotic_radius:.6f}",
              file=sys.stderr)
    return 0


def _cmd_spectrum(args) -> int:
    cfg = _example_config(args)
    base, bump = build_potentials(cfg)
    q = family_member(base, bump, args.lam).combined
    spec = dn_spectrum(q, cfg.N, lam=args.lam)
    out = sys.stdout if args.out is None else open(args.out, "w")
    try:
        out.write("lambda,n,mu_n,nu_n,pole_flag\n")
        for n in range(spec.N + 1):
            out.write(f"{args.lam:.17g},{n},{spec.mu[n]:.17g},"
                      f"{spec.nu[n]:.17g},{int(spec.pole_flag)}\n")
    finally:
        if args.out is not None:
            out.close()
    return 0


def _cmd_verify(args) -> int:
    """Oracle cross-checks; prints one pass/fail row per check."""
    failures = 0

    def row(name: str, got: float, tol: float) -> None:
        nonlocal failures
        ok = got <= tol
        failures += 0 if ok else 1
        print(f"{'PASS' if ok else 'FAIL'}  {name:<44s} {got:.3e} <= {tol:.1e}")

    from .potentials import constant_profile, zero_profile
    from .radial_dn import dn_eigenvalue

    spec0 = dn_spectrum(zero_profile(), 12)
    row("free-space DN eigenvalues mu_n = n",
        float(np.max(np.abs(spec0.mu - np.arange(13)))), 1e-8)

    worst = 0.0
    for c in (0.25, 1.0, 4.0):
        q = constant_profile(c)
        for n in range(5):
            ref = oracles.bessel_dn_oracle(c, n).value
            worst = max(worst, abs(dn_eigenvalue(q, n) - ref) / abs(ref))
    row("constant-q DN vs Bessel closed form (rel)", worst, 1e-6)

    z0 = 1e-9
    anchor = (np.exp(1j * z0) * g1(z0)).real + math.log(abs(z0)) / (2 * math.pi)
    row("g1 small-z anchor vs -gamma/2pi",
        abs(anchor + EULER_GAMMA / (2 * math.pi)), 1e-8)

    worst = 0.0
    for z in (0.5 + 0.3j, -0.8 + 0.6j):
        res = oracles.gk_integral_oracle(z)
        worst = max(worst, abs(res.value - g1(z)) / (3 * res.estimated_error))
    row("g1 vs Fourier-integral oracle (x of 3 sigma)", worst, 1.0)

    lap = max(
        abs(oracles.fd_laplacian(lambda zz: h_kernel(1.0, zz), z, 1e-3))
        for z in (0.3 + 0.2j, 0.5, -0.6 + 0.7j)
    )
    row("harmonicity of H_k (5-point Laplacian)", lap, 1e-4)

    area = oracles.quadrature(lambda r: np.ones_like(r)).value
    row("unit-disc quadrature sanity (int r dr = 1/2)", abs(area - 0.5), 1e-12)

    print("verify:", "all checks passed" if failures == 0 else
          f"{failures} check(s) FAILED")
    return 0 if failures == 0 else 1


def _cmd_cache(args) -> int:
    directory = args.dir or os.environ.get(CACHE_DIR_ENV)
    if directory is None:
        print("no cache directory given (use --dir or RADSCAT_CACHE_DIR)",
              file=sys.stderr)
        return 2
    if args.clear:
        removed = bie.HkCache(directory).clear()
        print(f"removed {removed} cached matrices from {directory}")
        return 0
    n = len(list(Path(directory).glob("hk_*.bin")))
    print(f"{n} cached matrices in {directory}")
    return 0


def _cmd_kernel(args) -> int:
    re_k, im_k = (float(p) for p in args.k.split(","))
    k = complex(re_k, im_k)
    xs = np.linspace(-args.half_width, args.half_width, args.grid)
    out = sys.stdout if args.out is None else open(args.out, "w")
    try:
        out.write("x,y,h_k\n")
        for y in xs:
            for x in xs:
                out.write(f"{x:.17g},{y:.17g},{h_kernel(k, complex(x, y)):.17g}\n")
    finally:
        if args.out is not None:
            out.close()
    return 0


def _cmd_potential(args) -> int:
    cfg = _example_config(args)
    base, bump = build_potentials(cfg)
    q = family_member(base, bump, args.lam).combined
    r = np.linspace(0.0, 1.0, args.points)
    vals = np.asarray(q(r), dtype=float)
    out = sys.stdout if args.out is None else open(args.out, "w")
    try:
        out.write("r,value\n")
        for ri, vi in zip(r, vals):
            out.write(f"{ri:.17g},{vi:.17g}\n")
    finally:
        if args.out is not None:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radscat",
        description="Zero-energy scattering transforms of radial potentials "
                    "on the unit disc",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a configured sweep")
    p.add_argument("--config", required=True, help="key = value config file")
    p.add_argument("--output-dir", help="override the configured output dir")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("profile", help="t(|k|) profile at one lambda")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--example", default="example1",
                   choices=("example1", "example2"))
    p.add_argument("--k-grid", default="0.01:3.5:0.01")
    p.add_argument("--N", type=int, default=12)
    p.add_argument("--M", type=int, default=256)
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("spectrum", help="DN/ND eigenvalues at one lambda")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--example", default="example1",
                   choices=("example1", "example2"))
    p.add_argument("--N", type=int, default=12)
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("verify", help="run the oracle cross-check table")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("cache", help="inspect or clear the H_k cache")
    p.add_argument("--dir", help="cache directory")
    p.add_argument("--clear", action="store_true")
    p.set_defaults(func=_cmd_cache)

    p = sub.add_parser("kernel", help="dump H_k on a grid as CSV")
    p.add_argument("--k", default="1,0", help="re,im of k")
    p.add_argument("--grid", type=int, default=21)
    p.add_argument("--half-width", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_kernel)

    p = sub.add_parser("potential", help="dump q(r) as two-column CSV")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--example", default="example1",
                   choices=("example1", "example2"))
    p.add_argument("--points", type=int, default=1000)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_potential)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
