#!/usr/bin/env python3
"""A small (lambda, |k|) sweep producing the CSV/JSON/PGM data products.

The map.pgm image is the grayscale landscape of Re t clamped to [-20, 20]:
singular circles show up as sharp dark/bright curves whose radius shrinks
as lambda increases toward 0 from below.  The same sweep is available from
the command line:

    radscat sweep --config demos/demo_sweep.cfg

Run from the repository root:  python demos/06_sweep_and_map.py
"""

from pathlib import Path

from radscat import GridSpec, SweepConfig, emit_outputs, run_sweep

cfg = SweepConfig(
    example="example1",
    lambda_grid=GridSpec(-2.0, 0.0, 0.25),
    k_grid=GridSpec(0.02, 0.4, 0.01),
    N=12,
    M=256,
    cache=True,
    workers=2,
    output_dir="demo_sweep_out",
)

result = run_sweep(cfg)
manifest = emit_outputs(result, cfg.output_dir)

print("timing:", {k: round(v, 2) if isinstance(v, float) else v
                  for k, v in result.timing.items()})
print("\n lambda   detected radii")
for rep in result.reports:
    radii = [f"{d.radius:.4f}" for d in rep.detected_radii]
    print(f" {rep.lam:6.2f}   {radii or '-'}")

out = Path(cfg.output_dir)
print("\nfiles written:")
for name in sorted(manifest["files"]):
    print(f"  {out / name}")
