import json
import os

import numpy as np
import pytest

from radscat import cli, sweep
from radscat.bie import HkCache, assemble_hk_matrix
from radscat.potentials import ParameterError
from radscat.sweep import CACHE_DIR_ENV, GridSpec, SweepConfig


class TestGridSpec:
    def test_values_inclusive(self):
        g = GridSpec.parse("0.05:0.2:0.05")
        assert np.allclose(g.values(), [0.05, 0.1, 0.15, 0.2])

    def test_empty_grid(self):
        assert len(GridSpec(1.0, 0.5, 0.1).values()) == 0

    def test_single_point(self):
        assert np.allclose(GridSpec(0.7, 0.7, 0.1).values(), [0.7])

    def test_parse_errors(self):
        with pytest.raises(ParameterError):
            GridSpec.parse("1:2")
        with pytest.raises(ParameterError):
            GridSpec(0.0, 1.0, 0.0)


class TestConfig:
    def test_defaults_round_trip(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("""
# comment line
example = example2
lambda_grid = -1:1:0.5
k_grid = 0.1:0.5:0.1
N = 8
M = 128
w_r1 = 0.75
w_r2 = 0.85
sigma_a = 1.2
cache = yes
workers = 2
output_dir = out
""")
        cfg = sweep.parse_config(path)
        assert cfg.example == "example2"
        assert cfg.N == 8 and cfg.M == 128
        assert cfg.w_params == (0.75, 0.85)
        assert cfg.sigma_params[0] == 1.2
        assert cfg.cache and cfg.workers == 2
        echo = cfg.echo()
        assert echo["lambda_grid"] == "-1:1:0.5"

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("bogus = 1\n")
        with pytest.raises(ParameterError):
            sweep.parse_config(path)

    def test_validation(self):
        with pytest.raises(ParameterError):
            SweepConfig(example="example3")
        with pytest.raises(ParameterError):
            SweepConfig(k_grid=GridSpec(0.0, 1.0, 0.1))
        with pytest.raises(ParameterError):
            SweepConfig(N=26)

    def test_cache_dir_env_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv(CACHE_DIR_ENV, str(tmp_path / "env_cache"))
        cfg = SweepConfig()
        assert cfg.resolved_cache_dir() == tmp_path / "env_cache"

    def test_build_potentials(self):
        base1, _ = sweep.build_potentials(SweepConfig(example="example1"))
        assert np.max(np.abs(base1(np.linspace(0, 1, 50)))) == 0.0
        base2, _ = sweep.build_potentials(SweepConfig(example="example2"))
        assert np.max(np.abs(base2(np.linspace(0, 1, 50)))) > 0.1


def _tiny_config(tmp_path, **overrides) -> SweepConfig:
    cfg = SweepConfig(
        example="example1",
        lambda_grid=GridSpec(-1.0, 0.5, 0.5),
        k_grid=GridSpec(0.04, 0.12, 0.02),
        N=6,
        M=64,
        output_dir=str(tmp_path / "out"),
    )
    for key, val in overrides.items():
        setattr(cfg, key, val)
    return cfg


@pytest.mark.slow
class TestRunSweep:
    def test_shapes_and_outputs(self, tmp_path):
        cfg = _tiny_config(tmp_path)
        res = sweep.run_sweep(cfg)
        assert len(res.lambdas) == 4 and len(res.ks) == 5
        assert len(res.samples) == 4 and len(res.samples[0]) == 5
        assert len(res.spectra) == 4 and len(res.reports) == 4

        manifest = sweep.emit_outputs(res, cfg.output_dir)
        out = tmp_path / "out"
        for name in ("samples.csv", "spectra.csv", "reports.json",
                     "map.pgm", "manifest.json"):
            assert (out / name).exists()
        lines = (out / "samples.csv").read_text().splitlines()
        assert lines[0] == "lambda,k,re_t,im_t,zero_mode_diag,min_sv,flag"
        assert len(lines) == 1 + 4 * 5
        srows = (out / "spectra.csv").read_text().splitlines()
        assert len(srows) == 1 + 4 * 7  # N = 6 -> 7 modes per lambda
        raw = (out / "map.pgm").read_bytes()
        head, pixels = raw.split(b"255\n", 1)
        assert head == b"P5\n4 5\n"
        assert len(pixels) == 4 * 5
        reports = json.loads((out / "reports.json").read_text())
        assert [r["lambda"] for r in reports] == [-1.0, -0.5, 0.0, 0.5]
        import hashlib
        for name, digest in manifest["files"].items():
            assert hashlib.sha256((out / name).read_bytes()).hexdigest() == digest

    def test_determinism_workers_and_cache(self, tmp_path):
        cache_dir = tmp_path / "shared_cache"
        runs = {}
        for tag, workers, cache in (("a", 1, True), ("b", 3, True), ("c", 1, False)):
            cfg = _tiny_config(tmp_path, workers=workers, cache=cache,
                               cache_dir=str(cache_dir),
                               output_dir=str(tmp_path / tag))
            res = sweep.run_sweep(cfg)
            sweep.emit_outputs(res, cfg.output_dir)
            runs[tag] = (tmp_path / tag / "samples.csv").read_bytes()
            if cache:
                assert res.timing["cache_spot_checks"] >= 1
        assert runs["a"] == runs["b"] == runs["c"]

    def test_empty_sweep(self, tmp_path):
        cfg = _tiny_config(tmp_path, lambda_grid=GridSpec(1.0, 0.0, 0.5))
        res = sweep.run_sweep(cfg)
        manifest = sweep.emit_outputs(res, cfg.output_dir)
        out = tmp_path / "out"
        assert (out / "samples.csv").read_text().splitlines() == [
            "lambda,k,re_t,im_t,zero_mode_diag,min_sv,flag"
        ]
        assert json.loads((out / "reports.json").read_text()) == []
        assert not (out / "map.pgm").exists()
        assert manifest["grid"]["lambdas"] == 0

    def test_samples_are_real_valued_when_regular(self, tmp_path):
        cfg = _tiny_config(tmp_path)
        res = sweep.run_sweep(cfg)
        for row in res.samples:
            for s in row:
                if not s.flagged:
                    assert abs(s.t.imag) <= 1e-6 * (1 + abs(s.t))

    def test_io_failure_leaves_manifest(self, tmp_path, monkeypatch):
        cfg = _tiny_config(tmp_path, lambda_grid=GridSpec(0.0, 0.0, 1.0))
        res = sweep.run_sweep(cfg)
        orig = sweep.Path.write_text

        def fail_on_reports(self, *a, **kw):
            if self.name == "reports.json":
                raise OSError("disk full")
            return orig(self, *a, **kw)

        monkeypatch.setattr(sweep.Path, "write_text", fail_on_reports)
        with pytest.raises(OSError):
            sweep.emit_outputs(res, tmp_path / "partial")
        manifest = json.loads((tmp_path / "partial" / "manifest.json").read_text())
        assert set(manifest["files"]) == {"samples.csv", "spectra.csv"}

    def test_example2_zero_row_is_regular(self, tmp_path):
        # conductivity-type potential: bounded transform, no jump
        cfg = SweepConfig(
            example="example2",
            lambda_grid=GridSpec(0.0, 0.0, 1.0),
            k_grid=GridSpec(0.05, 1.0, 0.05),
            N=8, M=128,
            output_dir=str(tmp_path / "ex2"),
        )
        res = sweep.run_sweep(cfg)
        row = res.samples[0]
        assert res.reports[0].detected_radii == []
        assert max(abs(s.t) for s in row) < 10.0
        assert all(s.min_sv > 0.01 for s in row)


@pytest.mark.slow
class TestCli:
    def test_spectrum_command(self, tmp_path, capsys):
        out = tmp_path / "spec.csv"
        assert cli.main(["spectrum", "--lambda", "-1", "--N", "3",
                         "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "lambda,n,mu_n,nu_n,pole_flag"
        assert len(lines) == 5

    def test_potential_command(self, tmp_path):
        out = tmp_path / "q.csv"
        assert cli.main(["potential", "--lambda", "-5", "--points", "5",
                         "--out", str(out)]) == 0
        rows = [l.split(",") for l in out.read_text().splitlines()[1:]]
        assert float(rows[0][1]) == -5.0
        assert float(rows[-1][1]) == 0.0

    def test_kernel_command(self, tmp_path):
        out = tmp_path / "hk.csv"
        assert cli.main(["kernel", "--k", "1,0", "--grid", "5",
                         "--half-width", "0.5", "--out", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 1 + 25

    def test_profile_command(self, tmp_path):
        out = tmp_path / "profile.csv"
        assert cli.main(["profile", "--lambda", "0", "--k-grid", "0.1:0.3:0.1",
                         "--N", "6", "--M", "64", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 4
        # zero potential: transform vanishes on the whole row
        assert all(abs(float(l.split(",")[1])) < 1e-12 for l in lines[1:])

    def test_sweep_command(self, tmp_path):
        cfg = tmp_path / "s.cfg"
        cfg.write_text(
            "example = example1\nlambda_grid = 0:0.5:0.5\n"
            "k_grid = 0.1:0.2:0.1\nN = 6\nM = 64\n"
            f"output_dir = {tmp_path / 'swout'}\n"
        )
        assert cli.main(["sweep", "--config", str(cfg)]) == 0
        assert (tmp_path / "swout" / "samples.csv").exists()

    def test_cache_command(self, tmp_path):
        cache = HkCache(tmp_path)
        assemble_hk_matrix(1.0, 4, 64, cache=cache)
        assert cli.main(["cache", "--dir", str(tmp_path)]) == 0
        assert cli.main(["cache", "--dir", str(tmp_path), "--clear"]) == 0
        assert not list(tmp_path.glob("hk_*.bin"))

    def test_cache_command_requires_dir(self, monkeypatch):
        monkeypatch.delenv(CACHE_DIR_ENV, raising=False)
        assert cli.main(["cache", "--clear"]) == 2

    def test_verify_command(self):
        assert cli.main(["verify"]) == 0
