"""Acceptance suite: ten go/no-go checks on the finished artifact.

Each criterion prints one ``[PASS]``/``[FAIL]`` line (run with ``pytest -s``
to see them all; failures show theirs in the captured output).  Tolerances
and budgets are asserted exactly as stated -- nothing is loosened to make a
check green.

Two criteria are expected to fail against the published stiffness table and
are left failing on purpose:

* criterion 3: the 5 cm jammed-spine modulus (0.318 MPa) is *below* the
  silicone base modulus (0.507 MPa), so the 0 -> 5 cm step softens the rod
  and tip deflection rises instead of falling;
* criterion 4: the same inversion (plus the 10 cm entry barely catching up)
  breaks strict elongation decrease on the first two spine-length steps.

The remaining pairs obey both trends; the per-pair numbers are printed so
the violating steps are visible in the failure output.
"""

from __future__ import annotations

import dataclasses
import time

import numpy as np
import pytest

from spinerod.actuation import PressureCommand, pneumatic_load
from spinerod.cli import CENTERLINE_HEADER, main
from spinerod.rod import MaterialParams
from spinerod.scenario import Scenario, parse_scenario
from spinerod.solver import pressure_sweep, shoot
from spinerod.spine import (
    MODULUS_TABLE,
    SpineConfig,
    beam_deflection,
    combined_modulus,
    modulus_from_tip_deflection,
    spine_modulus,
)
from spinerod.studies import (
    ELONGATION_PRESSURES,
    SPINE_LENGTHS,
    SWEEP_PRESSURES,
    convergence_study,
    elongation_study,
)

RNG = np.random.default_rng(20260814)
MAT = MaterialParams()


def _report(num: int, title: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num:02d} {title}: {detail}")


@pytest.fixture(scope="module")
def grid_sweep():
    """The 7 spine lengths x 5 pressures grid, solved once for criteria 2/3/8."""
    base = parse_scenario("")
    t0 = time.perf_counter()
    results = pressure_sweep(base, SWEEP_PRESSURES, SPINE_LENGTHS)
    elapsed = time.perf_counter() - t0
    return results, elapsed


@pytest.fixture(scope="module")
def elongation():
    return elongation_study(parse_scenario(""))


def test_criterion_01_unloaded_exactness():
    scenario = parse_scenario("gravity = off\nexternal.force = 0 0 0")
    t0 = time.perf_counter()
    result = shoot(scenario)
    elapsed = time.perf_counter() - t0
    error = float(np.linalg.norm(result.tip_position - np.array([0.0, 0.0, 0.4])))
    ok = error < 1e-9 and elapsed < 0.1
    _report(1, "unloaded exactness", ok, f"tip error {error:.3e} m in {elapsed*1e3:.1f} ms")
    assert error < 1e-9
    assert elapsed < 0.1


def test_criterion_02_sweep_convergence(grid_sweep):
    results, elapsed = grid_sweep
    assert len(results) == 35
    worst = max(r.residual_norm for r in results)
    most = max(r.iterations for r in results)
    ok = all(r.converged for r in results) and worst < 1e-8 and most <= 50 and elapsed < 30.0
    _report(2, "sweep convergence", ok,
            f"35 cells, worst residual {worst:.3e}, max iterations {most}, {elapsed:.2f} s")
    assert all(r.converged for r in results)
    assert worst < 1e-8
    assert most <= 50
    assert elapsed < 30.0


def test_criterion_03_deflection_trends(grid_sweep):
    results, _ = grid_sweep
    tip_x = np.array([r.tip_position[0] for r in results]).reshape(
        len(SPINE_LENGTHS), len(SWEEP_PRESSURES))

    down_violations = [
        (SPINE_LENGTHS[i], SPINE_LENGTHS[i + 1])
        for i in range(len(SPINE_LENGTHS) - 1)
        if not tip_x[i, -1] > tip_x[i + 1, -1]
    ]
    up_violations = [
        (length, SWEEP_PRESSURES[j], SWEEP_PRESSURES[j + 1])
        for i, length in enumerate(SPINE_LENGTHS)
        for j in range(len(SWEEP_PRESSURES) - 1)
        if not tip_x[i, j] < tip_x[i, j + 1]
    ]
    ok = not down_violations and not up_violations
    profile = " ".join(f"{v:.5f}" for v in tip_x[:, -1])
    _report(3, "deflection trends", ok,
            f"tip_x(250 kPa) per spine length [{profile}]; "
            f"non-decreasing spine pairs {down_violations or 'none'}; "
            f"non-increasing pressure pairs {up_violations or 'none'}")
    assert not up_violations, f"tip_x not strictly increasing in pressure at {up_violations}"
    assert not down_violations, (
        "tip_x at 250 kPa not strictly decreasing over spine lengths; "
        f"violating pairs {down_violations} (the 5 cm tabulated modulus is softer "
        "than the silicone base, so that step flexes more, not less)")


def test_criterion_04_elongation_trend(elongation):
    study = elongation
    assert study.pressures == ELONGATION_PRESSURES
    at_150 = study.elongation[:, list(study.pressures).index(150e3)]
    violations = [
        (study.spine_lengths[i], study.spine_lengths[i + 1])
        for i in range(len(at_150) - 1)
        if not at_150[i] > at_150[i + 1]
    ]
    transverse_ok = study.max_transverse < 1e-6
    ok = transverse_ok and not violations
    profile = " ".join(f"{v*1e3:.3f}" for v in at_150)
    _report(4, "elongation trend", ok,
            f"max transverse {study.max_transverse:.2e} m; elongation(150 kPa) per spine "
            f"length [{profile}] mm; non-decreasing pairs {violations or 'none'}")
    assert transverse_ok
    assert not violations, (
        "elongation at 150 kPa not strictly decreasing over spine lengths; "
        f"violating pairs {violations} (the 5 and 10 cm tabulated moduli sit at or "
        "below the silicone base modulus, so short spines soften the rod)")


def test_criterion_05_euler_order():
    study = convergence_study(parse_scenario("pressure = 150e3"))
    ratio_ok = all(1.7 <= r <= 2.3 for r in study.ratios)
    order_ok = abs(study.order - 1.0) <= 0.2
    ok = ratio_ok and order_ok
    _report(5, "euler order", ok,
            f"ratios {[f'{r:.3f}' for r in study.ratios]}, order {study.order:.4f}")
    assert ratio_ok, f"error ratios {study.ratios} outside [1.7, 2.3]"
    assert order_ok, f"fitted order {study.order} outside 1.0 +/- 0.2"


def test_criterion_06_beam_identity():
    worst = 0.0
    for _ in range(1000):
        F = float(RNG.uniform(0.01, 50.0))
        L = float(RNG.uniform(0.05, 1.0))
        r = float(RNG.uniform(0.001, 0.05))
        E = float(10 ** RNG.uniform(4.0, 9.0))
        inertia = np.pi * r**4 / 4.0
        y = beam_deflection(F, L, L, E, inertia)
        recovered = modulus_from_tip_deflection(F, L, r, y)
        worst = max(worst, abs(recovered - E) / E)
    lookups_exact = all(
        spine_modulus(SpineConfig(length=length), length) == value
        for length, value in MODULUS_TABLE
    )
    ok = worst < 1e-12 and lookups_exact
    _report(6, "beam identity", ok,
            f"worst round-trip error {worst:.2e}, table lookups exact {lookups_exact}")
    assert worst < 1e-12
    assert lookups_exact


def test_criterion_07_combined_stiffness_bounds():
    n = 10000
    e_core = 10 ** RNG.uniform(4.0, 8.0, size=n)
    e_spine = 10 ** RNG.uniform(4.0, 8.0, size=n)
    v_core = 10 ** RNG.uniform(-6.0, -3.0, size=n)
    v_spine = 10 ** RNG.uniform(-6.0, -3.0, size=n)
    worst_rel = 0.0
    bounded = True
    for ec, es, vc, vs in zip(e_core, e_spine, v_core, v_spine):
        out = combined_modulus(float(ec), float(es), float(vc), float(vs))
        hand = (vc * ec + vs * es) / (vc + vs)
        worst_rel = max(worst_rel, abs(out - hand) / hand)
        bounded = bounded and min(ec, es) <= out <= max(ec, es)
    ok = bounded and worst_rel < 1e-14
    _report(7, "combined stiffness bounds", ok,
            f"10000 samples, bounded {bounded}, worst formula deviation {worst_rel:.2e}")
    assert bounded
    assert worst_rel < 1e-14


def test_criterion_08_rotation_integrity(grid_sweep):
    results, _ = grid_sweep
    worst_drift = 0.0
    worst_det = np.inf
    for result in results:
        for st in result.centerline:
            worst_drift = max(worst_drift, float(np.linalg.norm(st.R.T @ st.R - np.eye(3))))
            worst_det = min(worst_det, float(np.linalg.det(st.R)))
    ok = worst_drift < 1e-6 and worst_det > 0.99
    _report(8, "rotation integrity", ok,
            f"3500 frames, worst Frobenius drift {worst_drift:.2e}, min det {worst_det:.8f}")
    assert worst_drift < 1e-6
    assert worst_det > 0.99


def test_criterion_09_pneumatic_symmetry():
    scenario = parse_scenario("")
    worst = 0.0
    for pressure in (50e3, 150e3, 250e3, 400e3):
        cmd = PressureCommand.uniform(pressure)
        a_eff = scenario.effective_area()
        _, m_p = pneumatic_load(cmd, scenario.layout, a_eff, np.eye(3))
        bound = 1e-12 * pressure * a_eff * MAT.r_path
        worst = max(worst, float(np.linalg.norm(m_p)) / bound)
    ok = worst < 1.0
    _report(9, "pneumatic symmetry", ok, f"worst |m|/bound {worst:.3e}")
    assert worst < 1.0


def test_criterion_10_determinism_and_format(tmp_path):
    scenario = tmp_path / "case.txt"
    scenario.write_text("pressure = 200e3\nspine.length = 0.15\ngrid.n = 64\n")
    argv = ["solve", str(scenario), "--out", str(tmp_path)]
    assert main(argv) == 0
    first_csv = (tmp_path / "case_centerline.csv").read_bytes()
    first_summary = (tmp_path / "case_summary.txt").read_bytes()
    assert main(argv) == 0
    same_csv = (tmp_path / "case_centerline.csv").read_bytes() == first_csv
    same_summary = (tmp_path / "case_summary.txt").read_bytes() == first_summary

    lines = first_csv.decode().splitlines()
    header_ok = lines[0] == CENTERLINE_HEADER == "s,px,py,pz,nx,ny,nz,mx,my,mz"
    rows_ok = len(lines) - 1 == 64
    width_ok = all(len(line.split(",")) == 10 for line in lines)
    ok = same_csv and same_summary and header_ok and rows_ok and width_ok
    _report(10, "determinism and format", ok,
            f"byte-identical rerun {same_csv and same_summary}, header ok {header_ok}, "
            f"{len(lines) - 1} rows of 10 columns")
    assert same_csv and same_summary
    assert header_ok
    assert rows_ok
    assert width_ok
