"""Core state, cross-section stiffness, and static equilibrium equations of the rod.

The rod is described by a centerline position p(s), a material frame R(s), and
internal force/moment resultants n(s), m(s) over arc length s in [0, L].  The
static balance reads

    dp/ds = R v,      dR/ds = R hat(u),
    dn/ds = -f,       dm/ds = -(dp/ds) x n - l,

with linear constitutive closures

    v = Kse^-1 R^T n + v_star,    u = Kbt^-1 R^T m + u_star,

where Kse = diag(G A, G A, E A) and Kbt = diag(E Ixx, E Iyy, E Izz) for an
annular cross section.  All quantities are SI.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError, SingularStiffnessError

GRAVITY = 9.81  # m/s^2

_E3 = np.array([0.0, 0.0, 1.0])


def _vec3(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (3,):
        raise InvalidParameterError(f"{name} must be a 3-vector, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise InvalidParameterError(f"{name} must be finite, got {arr}")
    return arr


def _mat3(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (3, 3):
        raise InvalidParameterError(f"{name} must be a 3x3 matrix, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise InvalidParameterError(f"{name} must be finite")
    return arr


def hat(v) -> np.ndarray:
    """Skew-symmetric map: hat(v) @ w equals the cross product v x w."""
    vx, vy, vz = v
    return np.array([[0.0, -vz, vy], [vz, 0.0, -vx], [-vy, vx, 0.0]])


def orthonormalize(R: np.ndarray) -> np.ndarray:
    """Project a drifted frame back onto SO(3).

    Columns are normalized and re-orthogonalized: the first column is kept (up
    to scale), the second is made orthogonal to it, and the third is rebuilt
    from their cross product so the result is always a proper rotation.
    """
    c0 = R[:, 0]
    c0 = c0 / np.linalg.norm(c0)
    c1 = R[:, 1] - (c0 @ R[:, 1]) * c0
    c1 = c1 / np.linalg.norm(c1)
    c2 = np.cross(c0, c1)
    return np.column_stack((c0, c1, c2))


@dataclass(frozen=True)
class MaterialParams:
    """Geometry and material constants of the silicone rod.

    Defaults describe the physical prototype: a 0.4 m annular silicone body
    (outer radius 0.05 m, bore radius 0.029 m) with nine 5 mm pneumatic
    chambers on a 0.04 m pitch circle.  G defaults to E/3 (incompressible
    elastomer approximation).
    """

    E: float = 0.507147e6  # Pa
    G: float | None = None  # Pa, defaults to E / 3
    rho: float = 1300.0  # kg/m^3
    r_o: float = 0.05  # m, outer radius
    r_i: float = 0.029  # m, inner bore radius
    r_c: float = 0.005  # m, chamber bore radius
    r_path: float = 0.04  # m, chamber pitch-circle radius
    L: float = 0.4  # m, rod length

    def __post_init__(self):
        if self.G is None:
            object.__setattr__(self, "G", self.E / 3.0)
        for name in ("E", "G", "rho", "r_o", "r_i", "r_c", "r_path", "L"):
            val = getattr(self, name)
            if not np.isfinite(val) or val <= 0.0:
                raise InvalidParameterError(f"{name} must be finite and positive, got {val}")
        if self.r_i >= self.r_o:
            raise InvalidParameterError(
                f"inner radius {self.r_i} must be smaller than outer radius {self.r_o}"
            )
        if self.r_path >= self.r_o:
            raise InvalidParameterError(
                f"chamber pitch radius {self.r_path} must lie inside the outer radius {self.r_o}"
            )


@dataclass(frozen=True)
class SectionProperties:
    """Cross-section constants and assembled stiffness matrices."""

    A: float
    Ixx: float
    Iyy: float
    Izz: float
    E: float
    G: float
    Kse: np.ndarray
    Kbt: np.ndarray
    v_star: np.ndarray
    u_star: np.ndarray


def section_properties(mat: MaterialParams, E_effective: float | None = None) -> SectionProperties:
    """Assemble annulus section constants and stiffness matrices.

    E_effective replaces the material modulus in both matrices (used for the
    spine-stiffened region); the shear modulus always stays mat.G.  The bore
    is treated as fully open: chamber holes are not subtracted.
    """
    E_eff = mat.E if E_effective is None else float(E_effective)
    if not np.isfinite(E_eff) or E_eff <= 0.0:
        raise InvalidParameterError(f"effective modulus must be finite and positive, got {E_eff}")
    A = np.pi * (mat.r_o**2 - mat.r_i**2)
    Ixx = 0.25 * np.pi * (mat.r_o**4 - mat.r_i**4)
    Iyy = Ixx
    Izz = Ixx + Iyy
    Kse = np.diag([mat.G * A, mat.G * A, E_eff * A])
    Kbt = np.diag([E_eff * Ixx, E_eff * Iyy, E_eff * Izz])
    return SectionProperties(
        A=A,
        Ixx=Ixx,
        Iyy=Iyy,
        Izz=Izz,
        E=E_eff,
        G=mat.G,
        Kse=Kse,
        Kbt=Kbt,
        v_star=_E3.copy(),
        u_star=np.zeros(3),
    )


@dataclass(frozen=True)
class LoadModel:
    """Distributed loads along the rod.

    f is the distributed force per unit length in the base frame and l the
    distributed couple (zero for this robot).  When gravity is enabled the
    factory sets f = rho A g g_dir; the default direction (0, 0, +1) matches a
    rod hanging tip-down with the base z-axis along gravity.
    """

    f: np.ndarray = field(default_factory=lambda: np.zeros(3))
    l: np.ndarray = field(default_factory=lambda: np.zeros(3))
    g_dir: np.ndarray = field(default_factory=lambda: _E3.copy())
    gravity_enabled: bool = False

    def __post_init__(self):
        object.__setattr__(self, "f", _vec3(self.f, "f"))
        object.__setattr__(self, "l", _vec3(self.l, "l"))
        g = _vec3(self.g_dir, "g_dir")
        if abs(np.linalg.norm(g) - 1.0) > 1e-9:
            raise InvalidParameterError(f"g_dir must be a unit vector, got norm {np.linalg.norm(g)}")
        object.__setattr__(self, "g_dir", g)

    @classmethod
    def with_gravity(cls, mat: MaterialParams, g_dir=(0.0, 0.0, 1.0)) -> "LoadModel":
        """Distributed self-weight of the annular body along g_dir."""
        g = _vec3(g_dir, "g_dir")
        if abs(np.linalg.norm(g) - 1.0) > 1e-9:
            raise InvalidParameterError(f"g_dir must be a unit vector, got norm {np.linalg.norm(g)}")
        A = np.pi * (mat.r_o**2 - mat.r_i**2)
        return cls(f=mat.rho * A * GRAVITY * g, g_dir=g, gravity_enabled=True)


@dataclass(frozen=True)
class RodState:
    """State of one centerline station: position, frame, and internal loads."""

    s: float
    p: np.ndarray
    R: np.ndarray
    n: np.ndarray
    m: np.ndarray

    def __post_init__(self):
        if not np.isfinite(self.s) or self.s < 0.0:
            raise InvalidParameterError(f"arc length must be finite and >= 0, got {self.s}")
        object.__setattr__(self, "p", _vec3(self.p, "p"))
        object.__setattr__(self, "n", _vec3(self.n, "n"))
        object.__setattr__(self, "m", _vec3(self.m, "m"))
        R = _mat3(self.R, "R")
        drift = np.abs(R.T @ R - np.eye(3)).max()
        if drift > 1e-6:
            raise InvalidParameterError(f"rotation drifted from orthonormality by {drift:.3e}")
        object.__setattr__(self, "R", R)


def _strains(R, n, m, kse_diag, kbt_diag):
    """Raw-array constitutive inversion; diagonals must be nonzero."""
    v = (R.T @ n) / kse_diag
    v[2] += 1.0
    u = (R.T @ m) / kbt_diag
    return v, u


def constitutive_strains(state: RodState, sec: SectionProperties):
    """Invert the linear constitutive law for the local strains (v, u)."""
    kse_diag = np.diagonal(sec.Kse)
    kbt_diag = np.diagonal(sec.Kbt)
    if np.any(kse_diag == 0.0) or np.any(kbt_diag == 0.0):
        raise SingularStiffnessError("stiffness matrix has a zero diagonal entry")
    v = (state.R.T @ state.n) / kse_diag + sec.v_star
    u = (state.R.T @ state.m) / kbt_diag + sec.u_star
    return v, u


def ode_rhs(state: RodState, sec: SectionProperties, load: LoadModel):
    """Arc-length derivatives (dp, dR, dn, dm) of the static balance."""
    v, u = constitutive_strains(state, sec)
    dp = state.R @ v
    dR = state.R @ hat(u)
    dn = -load.f
    dm = -np.cross(dp, state.n) - load.l
    return dp, dR, dn, dm
