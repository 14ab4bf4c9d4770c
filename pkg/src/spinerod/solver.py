"""Boundary-value solver: explicit Euler march plus damped-Newton shooting.

The rod equations form a two-point boundary-value problem: p, R are known at
the base, n, m at the tip.  A guess of the base internal loads (n0, m0) is
integrated tip-ward with a first-order Euler scheme,

    y_{i+1} = y_i + ds f(y_i),    ds = L / (N - 1),

the frame being projected back onto SO(3) after each step, and the guess is
corrected by a damped Newton iteration on the tip residual

    E(guess) = [n(L) - n_L(R(L)),  m(L) - m_L(R(L))],

where the targets follow the deformed tip frame (follower pneumatic thrust).
The Jacobian comes from forward finite differences; steps are halved until the
residual norm decreases.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .actuation import PressureCommand, pneumatic_load, tip_boundary
from .errors import (
    IntegrationDivergedError,
    InvalidParameterError,
    SolverFailureError,
)
from .rod import LoadModel, RodState
from .spine import StiffnessProfile, stiffness_at

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, typing only
    from .scenario import Scenario

FD_STEP = 1e-6  # forward-difference step, scaled per guess component
MAX_HALVINGS = 8  # line-search budget per Newton step
JACOBIAN_RIDGE = 1e-9  # diagonal regularization for a singular Jacobian


@dataclass(frozen=True)
class IntegrationConfig:
    """Spatial grid settings for the Euler march."""

    n_points: int = 100
    reorthonormalize_every: int = 1  # steps between frame projections, 0 = never

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 10:
            raise InvalidParameterError(f"n_points must be an integer >= 10, got {self.n_points}")
        if int(self.reorthonormalize_every) != self.reorthonormalize_every or self.reorthonormalize_every < 0:
            raise InvalidParameterError(
                f"reorthonormalize_every must be an integer >= 0, got {self.reorthonormalize_every}"
            )
        object.__setattr__(self, "n_points", int(self.n_points))
        object.__setattr__(self, "reorthonormalize_every", int(self.reorthonormalize_every))


@dataclass(frozen=True)
class ShootGuess:
    """Unknown base internal loads the shooting method iterates on."""

    n0: np.ndarray = field(default_factory=lambda: np.zeros(3))
    m0: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        n0 = np.asarray(self.n0, dtype=float)
        m0 = np.asarray(self.m0, dtype=float)
        if n0.shape != (3,) or m0.shape != (3,):
            raise InvalidParameterError("guess components must be 3-vectors")
        if not (np.isfinite(n0).all() and np.isfinite(m0).all()):
            raise InvalidParameterError("guess components must be finite")
        object.__setattr__(self, "n0", n0)
        object.__setattr__(self, "m0", m0)

    def to_vector(self) -> np.ndarray:
        return np.concatenate((self.n0, self.m0))

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "ShootGuess":
        x = np.asarray(x, dtype=float)
        return cls(n0=x[:3], m0=x[3:])


@dataclass(frozen=True)
class Residual:
    """Tip boundary mismatch: force and moment components."""

    force: np.ndarray
    moment: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.force @ self.force + self.moment @ self.moment))


@dataclass(frozen=True)
class SolveResult:
    """Converged (or best-effort) equilibrium of one scenario."""

    centerline: tuple[RodState, ...]
    residual_norm: float
    iterations: int
    converged: bool
    tip_position: np.ndarray
    guess: ShootGuess


def _renormalize(R: np.ndarray) -> np.ndarray:
    """Hot-path variant of rod.orthonormalize (same projection, no np.cross)."""
    c0 = R[:, 0]
    c0 = c0 / (c0 @ c0) ** 0.5
    c1 = R[:, 1] - (c0 @ R[:, 1]) * c0
    c1 = c1 / (c1 @ c1) ** 0.5
    out = np.empty((3, 3))
    out[:, 0] = c0
    out[:, 1] = c1
    out[0, 2] = c0[1] * c1[2] - c0[2] * c1[1]
    out[1, 2] = c0[2] * c1[0] - c0[0] * c1[2]
    out[2, 2] = c0[0] * c1[1] - c0[1] * c1[0]
    return out


class _Problem:
    """Precomputed march data shared by every residual evaluation of a solve."""

    __slots__ = (
        "n_pts",
        "ds",
        "reorth_every",
        "boundary",
        "kse_inv_lo",
        "kbt_inv_lo",
        "kse_inv_hi",
        "kbt_inv_hi",
        "f_lo",
        "f_hi",
        "l",
    )

    def __init__(self, profile: StiffnessProfile, load: LoadModel, cfg: IntegrationConfig):
        mat = profile.mat
        self.n_pts = cfg.n_points
        self.ds = mat.L / (cfg.n_points - 1)
        self.reorth_every = cfg.reorthonormalize_every
        self.boundary = profile.boundary_s
        sec_lo = stiffness_at(profile, 0.0)
        sec_hi = stiffness_at(profile, mat.L)
        self.kse_inv_lo = 1.0 / np.diagonal(sec_lo.Kse).copy()
        self.kbt_inv_lo = 1.0 / np.diagonal(sec_lo.Kbt).copy()
        self.kse_inv_hi = 1.0 / np.diagonal(sec_hi.Kse).copy()
        self.kbt_inv_hi = 1.0 / np.diagonal(sec_hi.Kbt).copy()
        f = load.f
        if load.gravity_enabled and profile.spine.weight_per_length > 0.0 and self.boundary > 0.0:
            self.f_lo = f + profile.spine.weight_per_length * load.g_dir
        else:
            self.f_lo = f
        self.f_hi = f
        self.l = load.l


def _march(prob: _Problem, n0: np.ndarray, m0: np.ndarray):
    """Euler march from the base; returns (positions, frames, forces, moments)."""
    n_pts, ds = prob.n_pts, prob.ds
    P = np.empty((n_pts, 3))
    F = np.empty((n_pts, 3, 3))
    N = np.empty((n_pts, 3))
    M = np.empty((n_pts, 3))
    p = np.zeros(3)
    R = np.eye(3)
    n = np.array(n0, dtype=float)
    m = np.array(m0, dtype=float)
    P[0], F[0], N[0], M[0] = p, R, n, m
    boundary = prob.boundary
    reorth = prob.reorth_every
    l = prob.l
    # divergence is detected via the isfinite check below; let overflow
    # produce inf/nan silently instead of warning on every blown-up trial
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n_pts - 1):
            if i * ds < boundary:
                kse_inv, kbt_inv, f = prob.kse_inv_lo, prob.kbt_inv_lo, prob.f_lo
            else:
                kse_inv, kbt_inv, f = prob.kse_inv_hi, prob.kbt_inv_hi, prob.f_hi
            Rt = R.T
            v = (Rt @ n) * kse_inv
            v[2] += 1.0
            u = (Rt @ m) * kbt_inv
            dp = R @ v
            # dm = -(dp x n) - l  ==  n x dp - l (cross products unrolled for speed)
            dm = np.empty(3)
            dm[0] = n[1] * dp[2] - n[2] * dp[1] - l[0]
            dm[1] = n[2] * dp[0] - n[0] * dp[2] - l[1]
            dm[2] = n[0] * dp[1] - n[1] * dp[0] - l[2]
            u0, u1, u2 = u
            dR = R @ np.array([[0.0, -u2, u1], [u2, 0.0, -u0], [-u1, u0, 0.0]])
            p = p + ds * dp
            R = R + ds * dR
            n = n - ds * f
            m = m + ds * dm
            if reorth and (i + 1) % reorth == 0:
                R = _renormalize(R)
            if not (np.isfinite(p).all() and np.isfinite(m).all() and np.isfinite(R).all()):
                raise IntegrationDivergedError(i + 1)
            j = i + 1
            P[j], F[j], N[j], M[j] = p, R, n, m
    return P, F, N, M


def integrate_rod(
    guess: ShootGuess,
    profile: StiffnessProfile,
    load: LoadModel,
    cfg: IntegrationConfig = IntegrationConfig(),
) -> tuple[RodState, ...]:
    """Integrate the rod from the base with known base loads; no boundary matching."""
    prob = _Problem(profile, load, cfg)
    P, F, N, M = _march(prob, guess.n0, guess.m0)
    ds = prob.ds
    return tuple(
        RodState(s=i * ds, p=P[i], R=F[i], n=N[i], m=M[i]) for i in range(prob.n_pts)
    )


def _tip_targets(scenario: "Scenario", R_tip: np.ndarray):
    """Boundary loads n_L, m_L for a given deformed tip frame."""
    n_p, m_p = pneumatic_load(
        scenario.pressures, scenario.layout, scenario.effective_area(), R_tip
    )
    return tip_boundary(n_p, m_p, scenario.external)


def _residual_vec(prob: _Problem, scenario: "Scenario", x: np.ndarray):
    """Shooting residual as a 6-vector, plus the marched arrays."""
    P, F, N, M = _march(prob, x[:3], x[3:])
    nL, mL = _tip_targets(scenario, F[-1])
    r = np.concatenate((N[-1] - nL, M[-1] - mL))
    return r, (P, F, N, M)


def residual(guess: ShootGuess, scenario: "Scenario") -> Residual:
    """Tip boundary mismatch for a base-load guess."""
    prob = _Problem(scenario.stiffness_profile(), scenario.load_model(), scenario.integration)
    r, _ = _residual_vec(prob, scenario, guess.to_vector())
    return Residual(force=r[:3], moment=r[3:])


def _jacobian(prob, scenario, x, r0):
    """Forward-difference Jacobian of the residual, column by column."""
    J = np.empty((6, 6))
    for j in range(6):
        h = FD_STEP * (1.0 + abs(x[j]))
        x_pert = x.copy()
        x_pert[j] += h
        r_j, _ = _residual_vec(prob, scenario, x_pert)
        J[:, j] = (r_j - r0) / h
    return J


def shoot(
    scenario: "Scenario",
    init: ShootGuess | None = None,
    tol: float | None = None,
    max_iter: int | None = None,
) -> SolveResult:
    """Solve the boundary-value problem by damped-Newton shooting.

    Args:
        scenario: full problem description (loads, stiffness, grid, limits).
        init: warm-start guess for (n0, m0); zeros when omitted.
        tol: residual norm target; scenario.tol when omitted.
        max_iter: Newton iteration cap; scenario.max_iter when omitted.

    Returns:
        SolveResult with the centerline at the best iterate.  ``converged``
        is False when the cap is reached first; no exception is raised for
        that case so sweeps can continue.
    """
    tol = scenario.tol if tol is None else float(tol)
    max_iter = scenario.max_iter if max_iter is None else int(max_iter)
    if tol <= 0.0 or not np.isfinite(tol):
        raise InvalidParameterError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise InvalidParameterError(f"max_iter must be >= 1, got {max_iter}")

    prob = _Problem(scenario.stiffness_profile(), scenario.load_model(), scenario.integration)
    x = np.zeros(6) if init is None else init.to_vector().copy()
    r, arrays = _residual_vec(prob, scenario, x)
    rn = float(np.linalg.norm(r))
    best_x, best_rn, best_arrays = x, rn, arrays
    iterations = 0

    while rn >= tol and iterations < max_iter:
        J = _jacobian(prob, scenario, x, r)
        try:
            dx = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            try:
                dx = np.linalg.solve(J + JACOBIAN_RIDGE * np.eye(6), -r)
            except np.linalg.LinAlgError as exc:
                raise SolverFailureError(
                    "Jacobian is singular even with diagonal regularization",
                    diagnostics={"iteration": iterations, "residual_norm": rn, "guess": x.copy()},
                ) from exc

        # backtracking: halve the step until the residual norm decreases
        accepted = None
        fallback = None
        alpha = 1.0
        for _ in range(MAX_HALVINGS + 1):
            x_trial = x + alpha * dx
            try:
                r_trial, arrays_trial = _residual_vec(prob, scenario, x_trial)
            except IntegrationDivergedError:
                alpha *= 0.5
                continue
            rn_trial = float(np.linalg.norm(r_trial))
            if np.isfinite(rn_trial):
                if rn_trial < rn:
                    accepted = (x_trial, r_trial, rn_trial, arrays_trial)
                    break
                if fallback is None or rn_trial < fallback[2]:
                    fallback = (x_trial, r_trial, rn_trial, arrays_trial)
            alpha *= 0.5
        if accepted is None:
            if fallback is None:
                raise SolverFailureError(
                    "every line-search trial diverged",
                    diagnostics={"iteration": iterations, "residual_norm": rn, "guess": x.copy()},
                )
            accepted = fallback  # stalled step; keeps iterating toward the cap

        x, r, rn, arrays = accepted
        iterations += 1
        if rn < best_rn:
            best_x, best_rn, best_arrays = x, rn, arrays

    P, F, N, M = best_arrays
    ds = prob.ds
    centerline = tuple(
        RodState(s=i * ds, p=P[i], R=F[i], n=N[i], m=M[i]) for i in range(prob.n_pts)
    )
    return SolveResult(
        centerline=centerline,
        residual_norm=best_rn,
        iterations=iterations,
        converged=bool(best_rn < tol),
        tip_position=P[-1].copy(),
        guess=ShootGuess.from_vector(best_x),
    )


def pressure_sweep(
    scenario_base: "Scenario",
    pressures,
    spine_lengths,
    group: int = 1,
) -> list[SolveResult]:
    """Solve a (spine length x pressure) grid, row-major, with warm starts.

    Within each spine length the pressures are solved in ascending order and
    each solve starts from the previous converged guess (continuation), which
    keeps the Newton iteration counts low at high pressure.  Unconverged
    cells are flagged in their SolveResult, never raised.
    """
    pressures = [float(p) for p in pressures]
    spine_lengths = [float(s) for s in spine_lengths]
    if any(b <= a for a, b in zip(pressures, pressures[1:])):
        raise InvalidParameterError("pressures must be strictly ascending for continuation")
    if any(p < 0.0 for p in pressures):
        raise InvalidParameterError("pressures must be >= 0")
    results = []
    for length in spine_lengths:
        spine = dataclasses.replace(scenario_base.spine, length=length)
        warm = None
        for pressure in pressures:
            cell = dataclasses.replace(
                scenario_base,
                spine=spine,
                pressures=PressureCommand.for_group(scenario_base.layout, group, pressure),
            )
            result = shoot(cell, init=warm)
            warm = result.guess
            results.append(result)
    return results
