"""Parameter studies built on the shooting solver.

Three canned experiments:

* ``sweep_records``     -- tip deflection over a (spine length x pressure) grid,
* ``convergence_study`` -- tip error versus grid spacing, with the observed
  order of accuracy,
* ``elongation_study``  -- axial stretch under uniform pressure, with a
  linearity score per spine length.

The convergence reference is Richardson-extrapolated from the two finest
grids assuming first-order error, because the finest computed solution still
carries an O(h) error of its own: measuring against it directly would inflate
the coarse-to-fine ratios well above 2.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .actuation import PressureCommand
from .errors import InvalidParameterError, SolverFailureError
from .scenario import DEFAULT_GROUP, ResultRecord, Scenario
from .solver import pressure_sweep, shoot

SWEEP_PRESSURES = (50e3, 100e3, 150e3, 200e3, 250e3)
SPINE_LENGTHS = (0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30)
ELONGATION_PRESSURES = (30e3, 60e3, 90e3, 120e3, 150e3)
CONVERGENCE_GRIDS = (25, 50, 100, 200, 400)


def sweep_records(
    base: Scenario,
    pressures=SWEEP_PRESSURES,
    spine_lengths=SPINE_LENGTHS,
    group: int = DEFAULT_GROUP,
) -> list[ResultRecord]:
    """Deflection sweep as flat records, row-major over (spine length, pressure)."""
    results = pressure_sweep(base, pressures, spine_lengths, group=group)
    records = []
    cells = [(length, pressure) for length in spine_lengths for pressure in pressures]
    for (length, pressure), result in zip(cells, results):
        tip = result.tip_position
        records.append(
            ResultRecord(
                spine_length=float(length),
                pressure=float(pressure),
                grid_n=base.integration.n_points,
                tip_x=float(tip[0]),
                tip_y=float(tip[1]),
                tip_z=float(tip[2]),
                residual_norm=result.residual_norm,
                iterations=result.iterations,
                converged=result.converged,
            )
        )
    return records


@dataclass(frozen=True)
class ConvergenceStudy:
    """Tip error versus grid spacing for one fixed load case."""

    grid_sizes: tuple[int, ...]
    step_sizes: tuple[float, ...]
    errors: tuple[float, ...]
    ratios: tuple[float, ...]  # errors[i] / errors[i+1], nan when degenerate
    order: float  # log-log slope of error vs step size, nan when errors vanish
    reference_tip: np.ndarray


def convergence_study(scenario: Scenario, grid_sizes=CONVERGENCE_GRIDS) -> ConvergenceStudy:
    """Re-solve one scenario on successively finer grids and measure tip error.

    The reference tip is extrapolated from the two finest solutions under the
    first-order model tip(h) = T + C*h, so every grid (including the finest)
    gets a consistent error estimate.
    """
    sizes = tuple(int(n) for n in grid_sizes)
    if len(sizes) < 3:
        raise InvalidParameterError("convergence study needs at least 3 grid sizes")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise InvalidParameterError("grid sizes must be strictly ascending")

    steps = tuple(scenario.material.L / (n - 1) for n in sizes)
    tips = []
    warm = None
    for n in sizes:
        cfg = dataclasses.replace(scenario.integration, n_points=n)
        cell = dataclasses.replace(scenario, integration=cfg)
        result = shoot(cell, init=warm)
        if not result.converged:
            raise SolverFailureError(
                f"grid with {n} points did not converge; the study is meaningless",
                diagnostics={
                    "n_points": n,
                    "residual_norm": result.residual_norm,
                    "iterations": result.iterations,
                },
            )
        warm = result.guess
        tips.append(result.tip_position)

    h_coarse, h_fine = steps[-2], steps[-1]
    t_coarse, t_fine = tips[-2], tips[-1]
    reference = t_fine + (t_fine - t_coarse) * (h_fine / (h_coarse - h_fine))

    errors = tuple(float(np.linalg.norm(t - reference)) for t in tips)
    ratios = tuple(
        errors[i] / errors[i + 1] if errors[i + 1] > 0.0 else float("nan")
        for i in range(len(errors) - 1)
    )
    positive = [(h, e) for h, e in zip(steps, errors) if e > 0.0]
    if len(positive) >= 2:
        log_h = np.log([h for h, _ in positive])
        log_e = np.log([e for _, e in positive])
        order = float(np.polyfit(log_h, log_e, 1)[0])
    else:
        order = float("nan")
    return ConvergenceStudy(
        grid_sizes=sizes,
        step_sizes=steps,
        errors=errors,
        ratios=ratios,
        order=order,
        reference_tip=reference,
    )


@dataclass(frozen=True)
class ElongationStudy:
    """Axial stretch under uniform pressurization of all nine chambers."""

    spine_lengths: tuple[float, ...]
    pressures: tuple[float, ...]
    elongation: np.ndarray  # metres, shape (len(spine_lengths), len(pressures))
    r_squared: np.ndarray  # linearity of elongation vs pressure, per spine length
    max_transverse: float  # largest |tip_x| or |tip_y| seen across all cells
    all_converged: bool


def elongation_study(
    base: Scenario,
    spine_lengths=SPINE_LENGTHS,
    pressures=ELONGATION_PRESSURES,
) -> ElongationStudy:
    """Uniform-pressure elongation over the (spine length x pressure) grid.

    Gravity is switched off so the response isolates the pneumatic thrust;
    with all chambers at one pressure the net moment cancels and the rod
    stretches along its axis without bending.
    """
    lengths = tuple(float(x) for x in spine_lengths)
    press = tuple(float(p) for p in pressures)
    base = dataclasses.replace(base, gravity_enabled=False)
    L = base.material.L
    elongation = np.empty((len(lengths), len(press)))
    max_transverse = 0.0
    all_converged = True
    for i, length in enumerate(lengths):
        spine = dataclasses.replace(base.spine, length=length)
        warm = None
        for j, pressure in enumerate(press):
            cell = dataclasses.replace(
                base, spine=spine, pressures=PressureCommand.uniform(pressure)
            )
            result = shoot(cell, init=warm)
            warm = result.guess
            all_converged = all_converged and result.converged
            tip = result.tip_position
            elongation[i, j] = tip[2] - L
            max_transverse = max(max_transverse, abs(tip[0]), abs(tip[1]))

    r_squared = np.empty(len(lengths))
    p_arr = np.asarray(press)
    for i in range(len(lengths)):
        y = elongation[i]
        coeffs = np.polyfit(p_arr, y, 1)
        ss_res = float(np.sum((y - np.polyval(coeffs, p_arr)) ** 2))
        ss_tot = float(np.sum((y - y.mean()) ** 2))
        if ss_tot == 0.0:
            r_squared[i] = 1.0 if ss_res == 0.0 else 0.0
        else:
            r_squared[i] = 1.0 - ss_res / ss_tot
    return ElongationStudy(
        spine_lengths=lengths,
        pressures=press,
        elongation=elongation,
        r_squared=r_squared,
        max_transverse=max_transverse,
        all_converged=all_converged,
    )
