"""Jammed growing-spine stiffness: identification, lookup, and blending.

The spine is a layer-jammed tube occupying the rod bore over [0, length).  Its
effective Young's modulus is identified from cantilever tip deflections via

    y(x) = F (3L - x) x^2 / (6 E I),    E = 4 F L^3 / (3 pi r^4 y),

tabulated against spine length, and blended with the silicone body by volume
fraction:

    E_eq = (V_c E_c + V_s E_s) / (V_c + V_s).

The effective pneumatic area follows a calibrated coefficient schedule over
spine length (friction between spine and bore grows with overlap).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DomainError,
    EnvelopeError,
    InvalidParameterError,
    ZeroDeflectionError,
)
from .rod import MaterialParams, SectionProperties, section_properties

E_SILICONE = 0.507147e6  # Pa, base material modulus (MaterialParams default)

# identified jammed-spine modulus vs spine length (m -> Pa)
MODULUS_TABLE = (
    (0.05, 0.318e6),
    (0.10, 1.323e6),
    (0.15, 2.032e6),
    (0.20, 3.069e6),
    (0.25, 3.763e6),
    (0.30, 4.389e6),
)

# calibrated effective-area coefficient vs spine length (dimensionless)
A_EFFECT_TABLE = (
    (0.00, 1.5),
    (0.05, 1.5),
    (0.10, 1.7),
    (0.15, 1.9),
    (0.20, 2.0),
    (0.25, 2.15),
    (0.30, 2.4),
)


def beam_deflection(F: float, L: float, x: float, E: float, I: float) -> float:
    """Cantilever deflection y(x) under a tip force F: y = F (3L - x) x^2 / (6 E I)."""
    for name, val in (("F", F), ("L", L), ("x", x), ("E", E), ("I", I)):
        if not np.isfinite(val):
            raise InvalidParameterError(f"{name} must be finite, got {val}")
    if E <= 0.0 or I <= 0.0 or L <= 0.0:
        raise InvalidParameterError(f"L, E and I must be positive, got L={L}, E={E}, I={I}")
    if x < 0.0 or x > L:
        raise DomainError(f"evaluation point x={x} outside the span [0, {L}]")
    return F * (3.0 * L - x) * x**2 / (6.0 * E * I)


def modulus_from_tip_deflection(F: float, L: float, r: float, y: float) -> float:
    """Invert the tip deflection of a solid circular cantilever: E = 4 F L^3 / (3 pi r^4 y)."""
    for name, val in (("F", F), ("L", L), ("r", r), ("y", y)):
        if not np.isfinite(val):
            raise InvalidParameterError(f"{name} must be finite, got {val}")
    if y == 0.0:
        raise ZeroDeflectionError("zero tip deflection implies an unbounded modulus")
    if F <= 0.0 or L <= 0.0 or r <= 0.0 or y < 0.0:
        raise InvalidParameterError(
            f"inputs must be positive, got F={F}, L={L}, r={r}, y={y}"
        )
    return 4.0 * F * L**3 / (3.0 * np.pi * r**4 * y)


def _check_table(table, name: str):
    if len(table) == 0:
        raise InvalidParameterError(f"{name} must not be empty")
    lengths = [row[0] for row in table]
    values = [row[1] for row in table]
    for x, v in table:
        if not (np.isfinite(x) and np.isfinite(v)) or x <= 0.0 or v <= 0.0:
            raise InvalidParameterError(f"{name} entries must be finite and positive, got ({x}, {v})")
    if any(b <= a for a, b in zip(lengths, lengths[1:])):
        raise InvalidParameterError(f"{name} lengths must be strictly increasing")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InvalidParameterError(f"{name} values must be strictly increasing")


@dataclass(frozen=True)
class SpineConfig:
    """Growing-spine state: deployed length, radius, and modulus lookup table.

    weight_per_length adds the spine's own distributed weight (N/m) to the
    gravity load over the overlapped region; it defaults to off (0) because
    only the modulus blend is calibrated.
    """

    length: float = 0.0  # m, deployed (jammed) length from the base
    radius: float = 0.029  # m, snug fit in the rod bore
    modulus_table: tuple = MODULUS_TABLE
    interpolation: str = "linear"
    weight_per_length: float = 0.0  # N/m along gravity over [0, length)

    def __post_init__(self):
        object.__setattr__(self, "modulus_table", tuple((float(x), float(v)) for x, v in self.modulus_table))
        _check_table(self.modulus_table, "modulus table")
        if not np.isfinite(self.radius) or self.radius <= 0.0:
            raise InvalidParameterError(f"spine radius must be positive, got {self.radius}")
        if not np.isfinite(self.weight_per_length) or self.weight_per_length < 0.0:
            raise InvalidParameterError(
                f"spine weight per length must be >= 0, got {self.weight_per_length}"
            )
        if not np.isfinite(self.length) or self.length < 0.0:
            raise InvalidParameterError(f"spine length must be >= 0, got {self.length}")
        max_len = self.modulus_table[-1][0]
        if self.length > max_len:
            raise EnvelopeError(
                f"spine length {self.length} exceeds the tabulated envelope {max_len}"
            )
        if self.interpolation != "linear":
            raise InvalidParameterError(
                f"unsupported interpolation mode {self.interpolation!r} (only 'linear')"
            )


def spine_modulus(spine: SpineConfig, length: float, e_at_zero: float = E_SILICONE) -> float:
    """Jammed-spine modulus at a given deployed length.

    Exact at table anchors, linearly interpolated between them, and blended
    toward the silicone modulus below the first tabulated length (jamming has
    no datum there).  Zero length is the caller's no-spine branch, not a valid
    lookup.
    """
    if not np.isfinite(length) or length <= 0.0:
        raise InvalidParameterError(f"spine length must be positive, got {length}")
    max_len = spine.modulus_table[-1][0]
    if length > max_len:
        raise EnvelopeError(f"spine length {length} exceeds the tabulated envelope {max_len}")
    xp = np.array([0.0] + [row[0] for row in spine.modulus_table])
    fp = np.array([float(e_at_zero)] + [row[1] for row in spine.modulus_table])
    return float(np.interp(length, xp, fp))


def combined_modulus(E_c: float, E_s: float, V_c: float, V_s: float) -> float:
    """Volume-fraction blend of body and spine moduli: (V_c E_c + V_s E_s) / (V_c + V_s)."""
    for name, val in (("E_c", E_c), ("E_s", E_s), ("V_c", V_c), ("V_s", V_s)):
        if not np.isfinite(val):
            raise InvalidParameterError(f"{name} must be finite, got {val}")
    if E_c <= 0.0 or E_s <= 0.0:
        raise InvalidParameterError(f"moduli must be positive, got E_c={E_c}, E_s={E_s}")
    if V_c < 0.0 or V_s < 0.0 or V_c + V_s == 0.0:
        raise InvalidParameterError(f"volumes must be >= 0 with a positive sum, got {V_c}, {V_s}")
    return (V_c * E_c + V_s * E_s) / (V_c + V_s)


def a_effect(spine_length: float, A_norm: float, table=A_EFFECT_TABLE) -> float:
    """Calibrated effective pneumatic area for a given spine length."""
    if not np.isfinite(A_norm) or A_norm <= 0.0:
        raise InvalidParameterError(f"A_norm must be positive, got {A_norm}")
    if not np.isfinite(spine_length) or spine_length < 0.0:
        raise InvalidParameterError(f"spine length must be >= 0, got {spine_length}")
    lengths = [row[0] for row in table]
    coeffs = [row[1] for row in table]
    if spine_length > lengths[-1]:
        raise EnvelopeError(
            f"spine length {spine_length} exceeds the calibrated envelope {lengths[-1]}"
        )
    coeff = float(np.interp(spine_length, lengths, coeffs))
    return coeff * A_norm


@dataclass(frozen=True)
class StiffnessProfile:
    """Piecewise-constant axial stiffness: blended over [0, boundary_s), base beyond."""

    spine: SpineConfig
    mat: MaterialParams
    E_combined: float
    boundary_s: float
    _sec_combined: SectionProperties = field(repr=False, default=None)
    _sec_base: SectionProperties = field(repr=False, default=None)

    @classmethod
    def from_config(cls, mat: MaterialParams, spine: SpineConfig) -> "StiffnessProfile":
        sec_base = section_properties(mat)
        if spine.length == 0.0:
            return cls(
                spine=spine,
                mat=mat,
                E_combined=mat.E,
                boundary_s=0.0,
                _sec_combined=sec_base,
                _sec_base=sec_base,
            )
        if spine.length > mat.L:
            raise EnvelopeError(
                f"spine length {spine.length} exceeds the rod length {mat.L}"
            )
        E_s = spine_modulus(spine, spine.length, e_at_zero=mat.E)
        # equal overlap length cancels: volume ratio reduces to the area ratio
        A_c = np.pi * (mat.r_o**2 - mat.r_i**2)
        A_s = np.pi * spine.radius**2
        V_c = A_c * spine.length
        V_s = A_s * spine.length
        E_combined = combined_modulus(mat.E, E_s, V_c, V_s)
        return cls(
            spine=spine,
            mat=mat,
            E_combined=E_combined,
            boundary_s=spine.length,
            _sec_combined=section_properties(mat, E_effective=E_combined),
            _sec_base=sec_base,
        )


def stiffness_at(profile: StiffnessProfile, s: float) -> SectionProperties:
    """Section properties at arc length s (combined for s < boundary, base at/after)."""
    if not np.isfinite(s) or s < 0.0 or s > profile.mat.L:
        raise DomainError(f"arc length {s} outside [0, {profile.mat.L}]")
    if s < profile.boundary_s:
        return profile._sec_combined
    return profile._sec_base
