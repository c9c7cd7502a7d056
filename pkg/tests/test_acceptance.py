"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with -s to see them inline).

Shared sweeps are computed once per session; the stated runtime budgets are
asserted where the criterion names one.
"""

import math
import time
from dataclasses import replace

import numpy as np
import pytest

from uavfd.campaign import (
    GridSpec,
    builtin_scenarios,
    mirror_symmetry,
    run_capacity_sweep,
    run_power_sweep,
)
from uavfd.cli import main
from uavfd.duplexing import Assignment, build_channel_plan, interference_edges, validate_plan
from uavfd.metrics import capacity_tdd, coverage_fraction
from uavfd.phy import (
    OfdmParams,
    build_frame,
    impair,
    noise_power_for_subcarrier_snr,
    receive_frame,
)
from uavfd.placement import ObjectiveKind, PlacementObjective, best_record
from uavfd.propagation import fspl_db


def report(num, ok, text):
    status = "PASS" if ok else "FAIL"
    print(f"criterion {num:02d} {status} - {text}")
    assert ok, f"criterion {num:02d}: {text}"


@pytest.fixture(scope="module")
def waveform_dir01():
    sc = replace(builtin_scenarios()["directional-0.1"], engine="waveform")
    t0 = time.perf_counter()
    recs = run_capacity_sweep(sc, GridSpec(), seed=0)
    return recs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def waveform_dipole():
    sc = replace(builtin_scenarios()["dipole-0.1"], engine="waveform")
    return run_capacity_sweep(sc, GridSpec(), seed=0)


def test_criterion_01_friis_oracle():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        d = rng.uniform(1.0, 1000.0)
        f = rng.uniform(1e9, 10e9)
        oracle = 32.44778322188337 + 20.0 * math.log10((d / 1000.0) * (f / 1e6))
        worst = max(worst, abs(fspl_db(d, f) - oracle))
    elapsed = time.perf_counter() - t0
    report(
        1,
        worst < 0.01 and elapsed < 1.0,
        f"fspl vs independent Friis oracle: worst {worst:.2e} dB over 1000 draws in {elapsed:.2f}s",
    )


def test_criterion_02_antenna_anchors():
    from uavfd.antenna import gain_db, horn

    h = horn(21.0, 18.0)
    g0, g9 = gain_db(h, 0.0), gain_db(h, 9.0)
    report(2, g0 == 21.0 and g9 == 18.0, f"horn gain {g0} dBi at 0 deg, {g9} dBi at 9 deg")


def test_criterion_03_modem_loopback():
    params = OfdmParams()
    rng = np.random.default_rng(202)
    t0 = time.perf_counter()
    bad_bits = 0
    worst_evm = 0.0
    for _ in range(100):
        payload = rng.integers(0, 2, params.payload_bits(2))
        fb = build_frame(params, payload)
        rx = receive_frame(fb.samples, params, fb.data_symbols)
        assert rx.sync_success
        worst_evm = max(worst_evm, rx.evm_rms)
        bad_bits += int(np.sum(rx.payload != payload))
    elapsed = time.perf_counter() - t0
    report(
        3,
        bad_bits == 0 and worst_evm < 1e-6 and elapsed < 10.0,
        f"100-frame loopback: {bad_bits} bit errors, worst EVM {worst_evm:.2e}, {elapsed:.1f}s",
    )


def test_criterion_04_evm_snr_calibration():
    params = OfdmParams()
    n_sym = 28
    rng = np.random.default_rng(303)
    t0 = time.perf_counter()
    gaps = {}
    for snr in (5, 10, 15, 20, 25):
        noise_dbm = noise_power_for_subcarrier_snr(params, snr, n_sym)
        fb = build_frame(params, rng.integers(0, 2, params.payload_bits(n_sym)))
        evm_sq = []
        for k in range(100):
            mixed = impair(fb, None, 0.0, math.inf, noise_dbm, seed=1000 * snr + k)
            rx = receive_frame(mixed, params, fb.data_symbols, decode=False)
            assert rx.sync_success
            evm_sq.append(rx.evm_rms**2)
        derived = -10.0 * math.log10(np.mean(evm_sq))
        gaps[snr] = derived - snr
    elapsed = time.perf_counter() - t0
    worst = max(abs(g) for g in gaps.values())
    detail = " ".join(f"{s}:{g:+.2f}" for s, g in gaps.items())
    report(4, worst <= 0.5 and elapsed < 60.0, f"EVM-SNR gaps dB {{{detail}}} in {elapsed:.0f}s")


def test_criterion_05_tdd_anchor():
    sc = builtin_scenarios()["tdd-baseline"]
    cap = capacity_tdd(sc.capacity_config(), sc.tdd_snr_db)
    recs = run_capacity_sweep(sc, GridSpec())
    constant = len({r.capacity_bps for r in recs}) == 1
    ok = abs(cap - 11.6e6) <= 0.05e6 and constant and recs[0].capacity_bps == cap
    report(5, ok, f"TDD capacity {cap / 1e6:.4f} Mbps at {sc.tdd_snr_db} dB, position-independent={constant}")


def test_criterion_06_coverage_ordering(waveform_dir01):
    grid = GridSpec()
    sc = builtin_scenarios()
    t0 = time.perf_counter()
    run_capacity_sweep(sc["directional-0.1"], grid)
    analytic_time = time.perf_counter() - t0

    cov = {
        name: coverage_fraction(
            [r.interference_raw_dbm for r in run_power_sweep(sc[name], grid)], -95.0
        )
        for name in ("dipole-0.1", "directional-0.1", "directional-1.8")
    }
    _, waveform_time = waveform_dir01
    ordered = cov["dipole-0.1"] < cov["directional-0.1"] < cov["directional-1.8"]
    in_window = 0.61 <= cov["directional-0.1"] <= 0.85 and 0.61 <= cov["directional-1.8"] <= 0.85
    ok = ordered and in_window and analytic_time < 1.0 and waveform_time < 300.0
    report(
        6,
        ok,
        f"coverage dipole={cov['dipole-0.1']:.3f} < dir0.1={cov['directional-0.1']:.3f} "
        f"< dir1.8={cov['directional-1.8']:.3f}; analytic {analytic_time * 1e3:.0f}ms, "
        f"waveform {waveform_time:.0f}s",
    )


def test_criterion_07_dipole_sync_failure(waveform_dipole):
    n = len(waveform_dipole)
    failed = sum(1 for r in waveform_dipole if not r.sync_ok)
    zero_cap = all(r.capacity_bps == 0.0 for r in waveform_dipole if not r.sync_ok)
    report(7, failed / n >= 0.95 and zero_cap, f"dipole waveform sync failures {failed}/{n}, capacity 0 at failures")


def test_criterion_08_fd_vs_tdd_gain():
    sc = builtin_scenarios()
    grid = GridSpec()
    fd = run_capacity_sweep(sc["directional-0.1"], grid)
    best = best_record(fd, PlacementObjective(ObjectiveKind.MAX_VICTIM_CAPACITY))
    tdd = capacity_tdd(sc["tdd-baseline"].capacity_config(), sc["tdd-baseline"].tdd_snr_db)
    ratio = best.value / tdd
    report(8, ratio >= 3.0, f"best FD {best.value / 1e6:.2f} Mbps vs TDD {tdd / 1e6:.2f} Mbps: {ratio:.2f}x")


def test_criterion_09_duplexing_properties():
    ok = True
    for n in range(1, 65):
        plan = build_channel_plan(n)
        ok = ok and validate_plan(plan) == [] and len(interference_edges(plan)) == 2 * (n // 2)
    ref = build_channel_plan(2, min_separation=1)
    fig = (
        ref.assignment_for(1) == Assignment(uav=1, uplink=1, downlink=2)
        and ref.assignment_for(2) == Assignment(uav=2, uplink=2, downlink=1)
    )
    report(9, ok and fig, "plans valid for n in [1,64], edge count 2*floor(n/2), two-UAV assignment verbatim")


def test_criterion_10_engine_cross_check(waveform_dir01):
    wav, _ = waveform_dir01
    ana = run_capacity_sweep(builtin_scenarios()["directional-0.1"], GridSpec())
    eligible = [
        (a, w)
        for a, w in zip(ana, wav)
        if w.sync_ok and a.sinr_db is not None and 0.0 <= a.sinr_db <= 25.0
    ]
    stride = max(1, len(eligible) // 50)
    sample = eligible[::stride][:50]
    diffs = [w.sinr_db - a.sinr_db for a, w in sample]
    worst = max(abs(d) for d in diffs)
    report(
        10,
        len(sample) == 50 and worst <= 1.0,
        f"analytic vs waveform SINR at {len(sample)} points: worst |diff| {worst:.2f} dB",
    )


def test_criterion_11_height_effect():
    sc = builtin_scenarios()
    grid = GridSpec()
    low = run_power_sweep(sc["directional-0.1"], grid)
    high = run_power_sweep(sc["directional-1.8"], grid)
    checked = 0
    violations = 0
    for r01, r18 in zip(low, high):
        if math.hypot(r01.position.x - 60.0, r01.position.y) < 20.0:
            checked += 1
            if r18.interference_dbm > r01.interference_dbm + 1e-9:
                violations += 1
    report(11, checked > 0 and violations == 0, f"raising to 1.8 m: {violations}/{checked} violations near the victim")


def test_criterion_12_sweep_determinism(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    args = ["sweep", "--scenario", "directional-0.1", "--seed", "11"]
    assert main(args + ["--out", str(out_a)]) == 0
    assert main(args + ["--out", str(out_b)]) == 0
    names = [
        "directional-0.1_power.csv",
        "directional-0.1_capacity.csv",
        "directional-0.1_power_mirrored.csv",
        "directional-0.1_capacity_mirrored.csv",
    ]
    identical = all((out_a / n).read_bytes() == (out_b / n).read_bytes() for n in names)
    report(12, identical, "repeated sweep runs produce byte-identical CSVs")
