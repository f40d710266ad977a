"""Acceptance gate: one test per criterion, each at its stated tolerance.

Every test prints a `[acceptance] criterion N: PASS/FAIL` line with the
measured quantities, so `pytest -s tests/test_acceptance.py` doubles as a
verification report.  Criterion 6 is implemented exactly as stated and is
expected to fail: the -2pi/log|k| form of the small-k law carries an
O(1/log^2|k|) error (about 0.7 at k = 0.01 for |lambda| = 0.5), which no
k-linear bound can absorb; the exact zero-mode law that the solver does
satisfy is asserted in test_bie.py::test_small_k_zero_mode_model.
"""

import math
import time

import numpy as np
import pytest

from radscat import analysis, bie, sweep
from radscat.faddeev import EULER_GAMMA, g1, h_kernel
from radscat.oracles import bessel_dn_oracle, gk_integral_oracle, quadrature
from radscat.potentials import (
    bump_profile,
    conductivity_to_potential,
    constant_profile,
    family_member,
    sigma_profile,
    zero_profile,
)
from radscat.radial_dn import dn_eigenvalue, dn_spectrum, mu_prime_at_zero
from radscat.sweep import GridSpec, SweepConfig

pytestmark = pytest.mark.acceptance

W = bump_profile(0.8, 0.9)
ZERO = zero_profile()


def _report(criterion, ok, detail, elapsed):
    status = "PASS" if ok else "FAIL"
    print(f"\n[acceptance] criterion {criterion}: {status} "
          f"({detail}; {elapsed:.2f} s)")


def _ex1_spectrum(lam, N=12):
    return dn_spectrum(family_member(ZERO, W, lam).combined, N, lam=lam)


# ----------------------------------------------------------------------
# shared heavy fixtures
# ----------------------------------------------------------------------

@pytest.fixture(scope="module")
def exceptional_scan():
    """Criterion 7 data: singular radii across lambda in [-2, -0.5] step
    0.25 and clean windows for the positive list (reused by criterion 9).
    Criterion 7 asserts the whole-unit subset; the monotonicity check and
    the one-radius-per-lambda invariant use the full set."""
    t0 = time.time()
    neg_lams = (-2.0, -1.75, -1.5, -1.25, -1.0, -0.75, -0.5)
    pos_lams = (0.5, 1.0, 2.0)
    neg_specs = [_ex1_spectrum(l) for l in neg_lams]
    pos_specs = [_ex1_spectrum(l) for l in pos_lams]
    neg_reports = analysis.scan_exceptional_radii(
        neg_specs, 0.001, 0.6, coarse_step=2e-3, fine_step=2.5e-4
    )
    pos_reports = analysis.scan_exceptional_radii(
        pos_specs, 0.01, 3.5, coarse_step=0.01, fine_step=2.5e-4
    )
    return {
        "neg": dict(zip(neg_lams, neg_reports)),
        "pos": dict(zip(pos_lams, pos_reports)),
        "elapsed": time.time() - t0,
    }


@pytest.fixture(scope="module")
def desk_sweeps(tmp_path_factory):
    """Criterion 10 data: two full desk-grid runs, cold/1-worker then
    warm/3-worker, sharing one cache directory."""
    root = tmp_path_factory.mktemp("desk")
    cache_dir = root / "cache"
    t0 = time.time()
    outs = {}
    for tag, workers in (("cold_serial", 1), ("warm_parallel", 3)):
        cfg = SweepConfig(
            example="example1",
            lambda_grid=GridSpec(-2.0, 2.0, 0.25),
            k_grid=GridSpec(0.05, 3.5, 0.05),
            N=12,
            M=256,
            cache=True,
            cache_dir=str(cache_dir),
            workers=workers,
            output_dir=str(root / tag),
        )
        result = sweep.run_sweep(cfg)
        sweep.emit_outputs(result, cfg.output_dir)
        outs[tag] = root / tag
    return {"dirs": outs, "elapsed": time.time() - t0}


# ----------------------------------------------------------------------
# criteria
# ----------------------------------------------------------------------

def test_criterion_01_free_space_spectrum():
    t0 = time.time()
    spec = dn_spectrum(ZERO, 12)
    err = float(np.max(np.abs(spec.mu - np.arange(13))))
    elapsed = time.time() - t0
    _report(1, err <= 1e-8 and elapsed < 1.0,
            f"max |mu_n - n| = {err:.2e}", elapsed)
    assert err <= 1e-8
    assert elapsed < 1.0


def test_criterion_02_bessel_oracle_equivalence():
    t0 = time.time()
    worst = 0.0
    for c in (0.25, 1.0, 4.0):
        q = constant_profile(c)
        for n in range(5):
            ref = bessel_dn_oracle(c, n).value
            worst = max(worst, abs(dn_eigenvalue(q, n) - ref) / abs(ref))
    elapsed = time.time() - t0
    _report(2, worst <= 1e-6 and elapsed < 1.0,
            f"worst relative error = {worst:.2e}", elapsed)
    assert worst <= 1e-6
    assert elapsed < 1.0


def test_criterion_03_conductivity_identities():
    t0 = time.time()
    sig = sigma_profile()
    q0 = conductivity_to_potential(sig)
    mu0 = dn_eigenvalue(q0, 0)

    reference = mu_prime_at_zero(q0, W)
    cross = 2 * math.pi * quadrature(
        lambda r: np.asarray(W(r)) * np.asarray(sig(r)),
        nodes=64, breakpoints=(0.3, 0.7, 0.8, 0.9),
    ).value
    h = 1e-4
    up = dn_eigenvalue(family_member(q0, W, h).combined, 0)
    dn = dn_eigenvalue(family_member(q0, W, -h).combined, 0)
    slope = 2 * math.pi * (up - dn) / (2 * h)
    rel = abs(slope - reference) / reference
    elapsed = time.time() - t0
    ok = abs(mu0) <= 1e-8 and rel <= 1e-4 and elapsed < 5.0
    _report(3, ok, f"mu_0 = {mu0:.2e}, slope rel err = {rel:.2e}", elapsed)
    assert abs(mu0) <= 1e-8
    assert rel <= 1e-4
    assert abs(reference - cross) <= 1e-6 * cross
    assert elapsed < 5.0


def test_criterion_04_kernel_anchors():
    t0 = time.time()
    # H1(0) via the small-z limit of the defining combination
    z0 = 1e-9 * np.exp(0.7j)
    anchor = (np.exp(1j * z0) * g1(z0)).real + math.log(abs(z0)) / (2 * math.pi)
    anchor_err = abs(anchor + EULER_GAMMA / (2 * math.pi))

    worst_ratio = 0.0
    for absk in (0.01, 1.0, 3.5):
        k = complex(absk)
        h = 1e-3
        worst = 0.0
        for x in np.linspace(-1, 1, 21):
            for y in np.linspace(-1, 1, 21):
                z = complex(x, y)
                if abs(z) > 1.0:
                    continue
                lap = (h_kernel(k, z + h) + h_kernel(k, z - h)
                       + h_kernel(k, z + 1j * h) + h_kernel(k, z - 1j * h)
                       - 4 * h_kernel(k, z)) / h**2
                worst = max(worst, abs(lap))
        worst_ratio = max(worst_ratio, worst / (1e-4 * (1 + absk**2)))

    pts = [0.5 + 0.3j, 1.0 + 0j, -0.8 + 0.6j, 0.3 - 0.4j,
           2.0 + 1.0j, -1.5 - 0.5j, 0.25 + 0j, 2.5j]
    worst_sigma = 0.0
    for z in pts:
        res = gk_integral_oracle(z)
        worst_sigma = max(worst_sigma,
                          abs(res.value - g1(z)) / (3 * res.estimated_error))
    elapsed = time.time() - t0
    ok = (anchor_err <= 1e-8 and worst_ratio <= 1.0 and worst_sigma <= 1.0
          and elapsed < 30.0)
    _report(4, ok,
            f"anchor err = {anchor_err:.1e}, laplacian ratio = "
            f"{worst_ratio:.2f}, oracle ratio = {worst_sigma:.2f}", elapsed)
    assert anchor_err <= 1e-8
    assert worst_ratio <= 1.0
    assert worst_sigma <= 1.0
    assert elapsed < 30.0


def test_criterion_05_zero_mode_identity():
    t0 = time.time()
    k = 0.01
    worst = 0.0
    for lam in (0.5, -0.5):
        spec = _ex1_spectrum(lam)
        system = bie.assemble_system(k, spec)
        const = np.zeros(2 * spec.N + 1, dtype=complex)
        const[spec.N] = math.sqrt(2 * math.pi)
        got = (system.system @ const)[spec.N] / math.sqrt(2 * math.pi)
        expect = bie.zero_mode_diagnostic(k, spec.mu_at(0))
        worst = max(worst, abs(got - expect))
    elapsed = time.time() - t0
    _report(5, worst <= 1e-5 and elapsed < 5.0,
            f"worst |deviation| = {worst:.2e}", elapsed)
    assert worst <= 1e-5
    assert elapsed < 5.0


@pytest.mark.xfail(
    strict=True,
    reason="the -2pi/log|k| small-k form has O(1/log^2|k|) error "
           "(~0.7 at k = 0.01 for |lambda| = 0.5), so the stated k-linear "
           "bound and the 1.364 pin are unattainable; the exact zero-mode "
           "law is verified in test_bie.py::test_small_k_zero_mode_model",
)
def test_criterion_06_small_k_law_literal():
    t0 = time.time()
    worst_ratio = 0.0
    t_at_001 = {}
    for lam in (0.5, -0.5):
        spec = _ex1_spectrum(lam)
        for k in (0.01, 0.02, 0.05):
            t = bie.scattering_sample(k, spec).t
            worst_ratio = max(worst_ratio,
                              abs(t + 2 * math.pi / math.log(k)) / k)
            if k == 0.01:
                t_at_001[lam] = t
    elapsed = time.time() - t0
    pin_err = max(abs(t - 1.364) for t in t_at_001.values())
    ok = worst_ratio <= 1.0 and pin_err <= 0.01
    _report(6, ok,
            f"worst |t + 2pi/log k|/k = {worst_ratio:.1f}, "
            f"t(0.01) = {t_at_001[0.5]:.3f} / {t_at_001[-0.5]:.3f} "
            f"vs pinned 1.364", elapsed)
    assert worst_ratio <= 1.0
    assert pin_err <= 0.01
    assert elapsed < 10.0


def test_criterion_07_exceptional_circles(exceptional_scan):
    elapsed = exceptional_scan["elapsed"]
    gate_lams = (-2.0, -1.5, -1.0, -0.5)
    details = []
    ok = True
    for lam in gate_lams:
        rep = exceptional_scan["neg"][lam]
        n_found = len(rep.detected_radii)
        if n_found != 1:
            ok = False
            details.append(f"lam={lam}: {n_found} radii")
            continue
        r = rep.detected_radii[0].radius
        rel = abs(r - rep.asymptotic_radius) / rep.asymptotic_radius
        ok = ok and rel <= 0.10
        details.append(f"lam={lam}: r={r:.4f} rel={rel:.1%}")
    for lam, rep in exceptional_scan["pos"].items():
        if rep.detected_radii:
            ok = False
            details.append(f"lam={lam}: spurious radii")
    ok = ok and elapsed < 300.0
    _report(7, ok, "; ".join(details), elapsed)
    for lam in gate_lams:
        rep = exceptional_scan["neg"][lam]
        assert len(rep.detected_radii) == 1, f"lambda={lam}"
        r = rep.detected_radii[0].radius
        assert abs(r - rep.asymptotic_radius) / rep.asymptotic_radius <= 0.10
    # supporting invariant: the whole quarter-step family behaves the same
    for lam, rep in exceptional_scan["neg"].items():
        assert len(rep.detected_radii) == 1, f"lambda={lam}"
        rel = (abs(rep.detected_radii[0].radius - rep.asymptotic_radius)
               / rep.asymptotic_radius)
        assert rel <= 0.10, f"lambda={lam}"
    for lam, rep in exceptional_scan["pos"].items():
        assert rep.detected_radii == [], f"lambda={lam}"
    assert elapsed < 300.0


def test_criterion_08_radiality_reality():
    t0 = time.time()
    spec = _ex1_spectrum(-1.0)
    worst_rel = 0.0
    worst_imag = 0.0
    for km in (0.1, 1.0):
        vals = [
            bie.scattering_sample(km * np.exp(1j * a), spec).t
            for a in (0.0, math.pi / 4, math.pi / 2)
        ]
        scale = abs(vals[0])
        worst_rel = max(worst_rel,
                        max(abs(v - vals[0]) for v in vals[1:]) / scale)
        worst_imag = max(worst_imag,
                         max(abs(v.imag) / (1 + abs(v)) for v in vals))
    elapsed = time.time() - t0
    ok = worst_rel <= 1e-6 and worst_imag <= 1e-6 and elapsed < 30.0
    _report(8, ok,
            f"rotation rel dev = {worst_rel:.1e}, Im ratio = {worst_imag:.1e}",
            elapsed)
    assert worst_rel <= 1e-6
    assert worst_imag <= 1e-6
    assert elapsed < 30.0


def test_criterion_09_map_and_monotone_radii(exceptional_scan, desk_sweeps):
    t0 = time.time()
    lams = sorted(exceptional_scan["neg"])  # -2 .. -0.5 ascending
    radii = [exceptional_scan["neg"][l].detected_radii[0].radius for l in lams]
    monotone = all(r_prev > r_next for r_prev, r_next in zip(radii, radii[1:]))

    pgm = (desk_sweeps["dirs"]["cold_serial"] / "map.pgm").read_bytes()
    magic, dims, rest = pgm.split(b"\n", 2)
    width, height = (int(v) for v in dims.split())
    pixels = np.frombuffer(rest.split(b"\n", 1)[1], dtype=np.uint8)
    img = pixels.reshape(height, width)

    def has_jump(col):
        # adjacent dark/bright flip marks the sign change through the circle
        steps = np.abs(np.diff(col.astype(int)))
        i = int(np.argmax(steps))
        lo, hi = sorted((int(col[i]), int(col[i + 1])))
        return steps[i] >= 100 and lo <= 80 and hi >= 150

    # columns for lambda in {-2, ..., -1}, where the circle sits inside the
    # desk k-window
    jump_cols_ok = all(has_jump(img[:, j]) for j in range(5))
    elapsed = time.time() - t0
    ok = monotone and jump_cols_ok
    _report(9, ok,
            f"radii {['%.4f' % r for r in radii]} decrease toward lambda=0; "
            f"map jump columns ok = {jump_cols_ok}", elapsed)
    assert magic == b"P5"
    assert (width, height) == (17, 70)
    assert monotone
    assert jump_cols_ok


def test_criterion_10_determinism(desk_sweeps):
    t0 = time.time()
    a = (desk_sweeps["dirs"]["cold_serial"] / "samples.csv").read_bytes()
    b = (desk_sweeps["dirs"]["warm_parallel"] / "samples.csv").read_bytes()
    identical = a == b
    elapsed = desk_sweeps["elapsed"] + (time.time() - t0)
    _report(10, identical,
            f"{len(a)} bytes, cold/serial vs warm/parallel identical = "
            f"{identical}", elapsed)
    assert identical
