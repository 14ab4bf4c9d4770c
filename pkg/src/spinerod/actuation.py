"""Pneumatic chamber layout and the tip loads it produces.

Nine chambers sit on a pitch circle in the cross section, 40 degrees apart,
grouped into three contiguous triplets (group g holds chambers 3g..3g+2).
Pressurizing a chamber pushes on the end cap along the deformed tip tangent,
so the resultant wrench depends on the tip frame R(L):

    n_P = sum_i P_i A_eff R e3,
    m_P = sum_i path_i x (P_i A_eff R e3).

The rod bends away from the pressurized centroid; with the default layout,
group 1 (chambers 3-5, centroid azimuth 160 deg) drives the tip into the +x
half-plane.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidCommandError, InvalidParameterError
from .rod import GRAVITY, MaterialParams, _vec3

PRESSURE_CEILING = 400e3  # Pa, hardware safety limit
N_CHAMBERS = 9


@dataclass(frozen=True)
class ChamberLayout:
    """Chamber anchor points on the end cap, nominal bore area, and grouping."""

    positions: np.ndarray  # (9, 3), cross-section frame, z = 0
    A_norm: float  # m^2, geometric bore area
    group_map: np.ndarray  # (9,), chamber index -> group id 0..2

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.shape != (N_CHAMBERS, 3):
            raise InvalidParameterError(f"expected {N_CHAMBERS} chamber positions, got {pos.shape}")
        if not np.isfinite(pos).all():
            raise InvalidParameterError("chamber positions must be finite")
        if np.any(pos[:, 2] != 0.0):
            raise InvalidParameterError("chamber positions must lie in the cross-section plane")
        radii = np.linalg.norm(pos, axis=1)
        if np.ptp(radii) > 1e-12 * radii.max():
            raise InvalidParameterError("chambers must share a single pitch radius")
        if not np.isfinite(self.A_norm) or self.A_norm <= 0.0:
            raise InvalidParameterError(f"A_norm must be positive, got {self.A_norm}")
        groups = np.asarray(self.group_map, dtype=int)
        if groups.shape != (N_CHAMBERS,):
            raise InvalidParameterError("group_map must assign every chamber")
        for g in range(3):
            if np.count_nonzero(groups == g) != 3:
                raise InvalidParameterError(f"group {g} must contain exactly 3 chambers")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "group_map", groups)

    @property
    def count(self) -> int:
        return len(self.positions)


def default_layout(mat: MaterialParams) -> ChamberLayout:
    """Nine chambers at i * 40 deg on the r_path circle, grouped as triplets."""
    angles = np.deg2rad(40.0 * np.arange(N_CHAMBERS))
    positions = mat.r_path * np.column_stack(
        (np.cos(angles), np.sin(angles), np.zeros(N_CHAMBERS))
    )
    return ChamberLayout(
        positions=positions,
        A_norm=np.pi * mat.r_c**2,
        group_map=np.arange(N_CHAMBERS) // 3,
    )


@dataclass(frozen=True)
class PressureCommand:
    """Per-chamber gauge pressures (Pa), validated to [0, PRESSURE_CEILING]."""

    pressures: np.ndarray = field(default_factory=lambda: np.zeros(N_CHAMBERS))

    def __post_init__(self):
        p = np.asarray(self.pressures, dtype=float)
        if p.shape != (N_CHAMBERS,):
            raise InvalidCommandError(f"expected {N_CHAMBERS} pressures, got shape {p.shape}")
        if not np.isfinite(p).all():
            raise InvalidCommandError("pressures must be finite")
        if np.any(p < 0.0):
            raise InvalidCommandError(f"negative pressure in command: {p.min()}")
        if np.any(p > PRESSURE_CEILING):
            raise InvalidCommandError(
                f"pressure {p.max()} exceeds the {PRESSURE_CEILING:.0f} Pa ceiling"
            )
        object.__setattr__(self, "pressures", p)

    @classmethod
    def uniform(cls, pressure: float) -> "PressureCommand":
        return cls(pressures=np.full(N_CHAMBERS, float(pressure)))

    @classmethod
    def for_group(cls, layout: ChamberLayout, group: int, pressure: float) -> "PressureCommand":
        """Equal pressure on one chamber triplet, zero elsewhere."""
        if group not in (0, 1, 2):
            raise InvalidParameterError(f"group must be 0, 1 or 2, got {group}")
        pressures = np.where(layout.group_map == group, float(pressure), 0.0)
        return cls(pressures=pressures)


@dataclass(frozen=True)
class ExternalLoad:
    """Point force and moment applied at the tip (base-frame components)."""

    force: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 0.053 * GRAVITY]))
    moment: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "force", _vec3(self.force, "force"))
        object.__setattr__(self, "moment", _vec3(self.moment, "moment"))

    @classmethod
    def tip_mass(cls, mass_kg: float, g_dir=(0.0, 0.0, 1.0)) -> "ExternalLoad":
        """Weight of a payload hanging at the tip, pulling along g_dir."""
        if not np.isfinite(mass_kg) or mass_kg < 0.0:
            raise InvalidParameterError(f"mass must be finite and >= 0, got {mass_kg}")
        g = _vec3(g_dir, "g_dir")
        return cls(force=mass_kg * GRAVITY * g, moment=np.zeros(3))


def pneumatic_load(
    cmd: PressureCommand, layout: ChamberLayout, A_effect: float, R_tip: np.ndarray
):
    """Resultant tip force and moment of the pressurized chambers.

    A_effect is the calibrated effective bore area; R_tip is the deformed tip
    frame, which makes the thrust a follower load along the tip tangent.
    """
    if not np.isfinite(A_effect) or A_effect <= 0.0:
        raise InvalidParameterError(f"A_effect must be positive, got {A_effect}")
    R = np.asarray(R_tip, dtype=float)
    if R.shape != (3, 3) or np.abs(R.T @ R - np.eye(3)).max() > 1e-6:
        raise InvalidParameterError("R_tip must be an orthonormal rotation")
    p = np.asarray(cmd.pressures, dtype=float)
    if np.any(p < 0.0):
        raise InvalidCommandError("negative pressure in command")
    direction = R[:, 2]
    n_p = p.sum() * A_effect * direction
    weighted = p @ layout.positions  # sum_i P_i path_i
    m_p = A_effect * np.cross(weighted, direction)
    return n_p, m_p


def tip_boundary(n_p: np.ndarray, m_p: np.ndarray, external: ExternalLoad):
    """Free-end boundary targets: n(L) and m(L) from pneumatics plus tip load."""
    nL = _vec3(n_p, "n_p") + external.force
    mL = _vec3(m_p, "m_p") + external.moment
    return nL, mL
