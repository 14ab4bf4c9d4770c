"""Scenario files: a flat key-value description of one solve.

A scenario is plain text, one ``key = value`` pair per line, ``#`` starts a
comment, all values SI.  Unknown keys, malformed values, duplicates, and
out-of-envelope settings are parse errors that name the key and line.

Keys (all optional; defaults describe the physical prototype):

    material.E / .G / .rho          Pa, Pa, kg/m^3
    material.r_o / .r_i / .r_c / .r_path / .L   m
    spine.length                    m, deployed spine length (0 = no spine)
    spine.radius                    m
    spine.weight_per_length         N/m, spine self-weight over the overlap
    spine.interpolation             'linear'
    spine.modulus_table             space-separated length:modulus pairs
    spine.a_effect_table            space-separated length:coefficient pairs
    pressures                       nine chamber pressures (Pa)
    group / pressure                triplet shorthand: group 0|1|2 at one pressure
    external.force / .moment        tip wrench components (N, N m)
    gravity                         on | off
    gravity.direction               unit vector, base frame
    grid.n                          grid points (>= 10)
    grid.reorthonormalize_every     steps between frame projections (0 = never)
    solver.tol / solver.max_iter    shooting tolerance and iteration cap

``group``/``pressure`` and ``pressures`` are mutually exclusive.  ``pressure``
without ``group`` pressurizes group 1 (chambers 3-5), which bends the tip into
the +x half-plane.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .actuation import (
    ChamberLayout,
    ExternalLoad,
    PressureCommand,
    default_layout,
)
from .errors import ScenarioParseError, SpineRodError
from .rod import GRAVITY, LoadModel, MaterialParams
from .solver import IntegrationConfig
from .spine import A_EFFECT_TABLE, SpineConfig, StiffnessProfile, a_effect

DEFAULT_GROUP = 1  # chambers 3-5; their moment drives the tip toward +x


@dataclass(frozen=True, eq=False)
class Scenario:
    """Complete, validated description of one boundary-value solve."""

    material: MaterialParams = field(default_factory=MaterialParams)
    spine: SpineConfig = field(default_factory=SpineConfig)
    layout: ChamberLayout = None
    pressures: PressureCommand = field(default_factory=PressureCommand)
    external: ExternalLoad = field(default_factory=ExternalLoad)
    gravity_enabled: bool = True
    g_dir: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    a_effect_table: tuple = A_EFFECT_TABLE
    integration: IntegrationConfig = field(default_factory=IntegrationConfig)
    tol: float = 1e-8
    max_iter: int = 50

    def __post_init__(self):
        if self.layout is None:
            object.__setattr__(self, "layout", default_layout(self.material))
        g = np.asarray(self.g_dir, dtype=float)
        if g.shape != (3,) or not np.isfinite(g).all() or abs(np.linalg.norm(g) - 1.0) > 1e-9:
            raise ScenarioParseError(f"gravity direction must be a finite unit vector, got {g}")
        object.__setattr__(self, "g_dir", g)
        object.__setattr__(
            self, "a_effect_table", tuple((float(x), float(c)) for x, c in self.a_effect_table)
        )
        if not np.isfinite(self.tol) or self.tol <= 0.0:
            raise ScenarioParseError(f"solver tolerance must be positive, got {self.tol}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ScenarioParseError(f"solver.max_iter must be a positive integer, got {self.max_iter}")
        object.__setattr__(self, "max_iter", int(self.max_iter))

    # -- derived model pieces -------------------------------------------------
    def stiffness_profile(self) -> StiffnessProfile:
        return StiffnessProfile.from_config(self.material, self.spine)

    def load_model(self) -> LoadModel:
        if self.gravity_enabled:
            return LoadModel.with_gravity(self.material, g_dir=self.g_dir)
        return LoadModel(g_dir=self.g_dir)

    def effective_area(self) -> float:
        return a_effect(self.spine.length, self.layout.A_norm, table=self.a_effect_table)


@dataclass(frozen=True)
class ResultRecord:
    """Flat per-solve summary used by sweeps and the CLI."""

    spine_length: float
    pressure: float  # largest chamber pressure in the command
    grid_n: int
    tip_x: float
    tip_y: float
    tip_z: float
    residual_norm: float
    iterations: int
    converged: bool
    centerline_path: str | None = None

    @classmethod
    def from_solve(cls, scenario: Scenario, result, centerline_path=None) -> "ResultRecord":
        tip = result.tip_position
        return cls(
            spine_length=scenario.spine.length,
            pressure=float(scenario.pressures.pressures.max()),
            grid_n=scenario.integration.n_points,
            tip_x=float(tip[0]),
            tip_y=float(tip[1]),
            tip_z=float(tip[2]),
            residual_norm=float(result.residual_norm),
            iterations=result.iterations,
            converged=result.converged,
            centerline_path=centerline_path,
        )


def solve_scenario(scenario: Scenario):
    """Shoot the boundary-value problem described by the scenario."""
    from .solver import shoot

    return shoot(scenario)


# -- parsing ------------------------------------------------------------------

_KNOWN_KEYS = {
    "material.E",
    "material.G",
    "material.rho",
    "material.r_o",
    "material.r_i",
    "material.r_c",
    "material.r_path",
    "material.L",
    "spine.length",
    "spine.radius",
    "spine.weight_per_length",
    "spine.interpolation",
    "spine.modulus_table",
    "spine.a_effect_table",
    "pressures",
    "group",
    "pressure",
    "external.force",
    "external.moment",
    "gravity",
    "gravity.direction",
    "grid.n",
    "grid.reorthonormalize_every",
    "solver.tol",
    "solver.max_iter",
}


def _parse_float(raw: str, key: str, line_no: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ScenarioParseError(f"expected a number, got {raw!r}", key=key, line_no=line_no) from None


def _parse_int(raw: str, key: str, line_no: int) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ScenarioParseError(f"expected an integer, got {raw!r}", key=key, line_no=line_no) from None
    return value


def _parse_bool(raw: str, key: str, line_no: int) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("on", "true", "1", "yes"):
        return True
    if lowered in ("off", "false", "0", "no"):
        return False
    raise ScenarioParseError(f"expected on/off, got {raw!r}", key=key, line_no=line_no)


def _parse_vec3(raw: str, key: str, line_no: int) -> np.ndarray:
    parts = raw.split()
    if len(parts) != 3:
        raise ScenarioParseError(
            f"expected three numbers, got {len(parts)}", key=key, line_no=line_no
        )
    return np.array([_parse_float(p, key, line_no) for p in parts])


def _parse_table(raw: str, key: str, line_no: int) -> tuple:
    rows = []
    for token in raw.split():
        if ":" not in token:
            raise ScenarioParseError(
                f"expected length:value pairs, got {token!r}", key=key, line_no=line_no
            )
        x_raw, v_raw = token.split(":", 1)
        rows.append((_parse_float(x_raw, key, line_no), _parse_float(v_raw, key, line_no)))
    if not rows:
        raise ScenarioParseError("table must not be empty", key=key, line_no=line_no)
    return tuple(rows)


def _split_lines(text: str):
    """Yield (line_no, key, value) for every assignment in the file."""
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ScenarioParseError(
                f"expected 'key = value', got {stripped!r}", line_no=line_no
            )
        key, value = stripped.split("=", 1)
        yield line_no, key.strip(), value.strip()


def parse_scenario(text: str) -> Scenario:
    """Build a validated Scenario from file text (empty text = all defaults)."""
    entries: dict[str, tuple[str, int]] = {}
    for line_no, key, value in _split_lines(text):
        if key not in _KNOWN_KEYS:
            raise ScenarioParseError("unknown key", key=key, line_no=line_no)
        if key in entries:
            raise ScenarioParseError("duplicate key", key=key, line_no=line_no)
        if not value:
            raise ScenarioParseError("missing value", key=key, line_no=line_no)
        entries[key] = (value, line_no)

    def line_of(key: str, fallback: int = 0) -> int:
        return entries[key][1] if key in entries else fallback

    def take_float(key: str, default: float | None) -> float | None:
        if key not in entries:
            return default
        raw, line_no = entries[key]
        return _parse_float(raw, key, line_no)

    def take_str(key: str, default: str) -> str:
        return entries[key][0] if key in entries else default

    # material ---------------------------------------------------------------
    mat_kwargs = {}
    for key, attr in (
        ("material.E", "E"),
        ("material.G", "G"),
        ("material.rho", "rho"),
        ("material.r_o", "r_o"),
        ("material.r_i", "r_i"),
        ("material.r_c", "r_c"),
        ("material.r_path", "r_path"),
        ("material.L", "L"),
    ):
        if key in entries:
            mat_kwargs[attr] = take_float(key, None)
    try:
        material = MaterialParams(**mat_kwargs)
    except SpineRodError as exc:
        key = next((k for k in entries if k.startswith("material.")), "material")
        raise ScenarioParseError(str(exc), key=key, line_no=line_of(key)) from exc

    # spine --------------------------------------------------------------------
    spine_kwargs = {}
    if "spine.length" in entries:
        spine_kwargs["length"] = take_float("spine.length", None)
    if "spine.radius" in entries:
        spine_kwargs["radius"] = take_float("spine.radius", None)
    if "spine.weight_per_length" in entries:
        spine_kwargs["weight_per_length"] = take_float("spine.weight_per_length", None)
    if "spine.interpolation" in entries:
        spine_kwargs["interpolation"] = take_str("spine.interpolation", "linear")
    if "spine.modulus_table" in entries:
        raw, line_no = entries["spine.modulus_table"]
        spine_kwargs["modulus_table"] = _parse_table(raw, "spine.modulus_table", line_no)
    try:
        spine = SpineConfig(**spine_kwargs)
    except SpineRodError as exc:
        key = next((k for k in entries if k.startswith("spine.")), "spine.length")
        if "spine.length" in entries:
            key = "spine.length"
        raise ScenarioParseError(str(exc), key=key, line_no=line_of(key)) from exc

    if "spine.a_effect_table" in entries:
        raw, line_no = entries["spine.a_effect_table"]
        a_table = _parse_table(raw, "spine.a_effect_table", line_no)
    else:
        a_table = A_EFFECT_TABLE

    layout = default_layout(material)

    # gravity ------------------------------------------------------------------
    gravity_enabled = True
    if "gravity" in entries:
        raw, line_no = entries["gravity"]
        gravity_enabled = _parse_bool(raw, "gravity", line_no)
    if "gravity.direction" in entries:
        raw, line_no = entries["gravity.direction"]
        g = _parse_vec3(raw, "gravity.direction", line_no)
        norm = np.linalg.norm(g)
        if norm == 0.0 or not np.isfinite(norm):
            raise ScenarioParseError(
                "gravity direction must be a nonzero vector", key="gravity.direction", line_no=line_no
            )
        g_dir = g / norm
    else:
        g_dir = np.array([0.0, 0.0, 1.0])

    # pressures ------------------------------------------------------------------
    has_full = "pressures" in entries
    has_group = "group" in entries or "pressure" in entries
    if has_full and has_group:
        key = "pressures"
        raise ScenarioParseError(
            "give either 'pressures' or the group/pressure shorthand, not both",
            key=key,
            line_no=line_of(key),
        )
    try:
        if has_full:
            raw, line_no = entries["pressures"]
            parts = raw.split()
            if len(parts) != 9:
                raise ScenarioParseError(
                    f"expected 9 pressures, got {len(parts)}", key="pressures", line_no=line_no
                )
            values = [_parse_float(p, "pressures", line_no) for p in parts]
            pressures = PressureCommand(np.array(values))
        elif has_group:
            if "pressure" not in entries:
                raw, line_no = entries["group"]
                raise ScenarioParseError(
                    "'group' requires a 'pressure' value", key="group", line_no=line_no
                )
            pressure = take_float("pressure", None)
            group = DEFAULT_GROUP
            if "group" in entries:
                raw, line_no = entries["group"]
                group = _parse_int(raw, "group", line_no)
            pressures = PressureCommand.for_group(layout, group, pressure)
        else:
            pressures = PressureCommand()
    except ScenarioParseError:
        raise
    except SpineRodError as exc:
        key = "pressures" if has_full else ("group" if "group" in entries else "pressure")
        raise ScenarioParseError(str(exc), key=key, line_no=line_of(key)) from exc

    # external tip load ----------------------------------------------------------
    if "external.force" in entries:
        raw, line_no = entries["external.force"]
        force = _parse_vec3(raw, "external.force", line_no)
    else:
        force = 0.053 * GRAVITY * g_dir
    if "external.moment" in entries:
        raw, line_no = entries["external.moment"]
        moment = _parse_vec3(raw, "external.moment", line_no)
    else:
        moment = np.zeros(3)
    try:
        external = ExternalLoad(force=force, moment=moment)
    except SpineRodError as exc:
        key = "external.force" if "external.force" in entries else "external.moment"
        raise ScenarioParseError(str(exc), key=key, line_no=line_of(key)) from exc

    # integration and solver -------------------------------------------------------
    grid_kwargs = {}
    if "grid.n" in entries:
        raw, line_no = entries["grid.n"]
        grid_kwargs["n_points"] = _parse_int(raw, "grid.n", line_no)
    if "grid.reorthonormalize_every" in entries:
        raw, line_no = entries["grid.reorthonormalize_every"]
        grid_kwargs["reorthonormalize_every"] = _parse_int(
            raw, "grid.reorthonormalize_every", line_no
        )
    try:
        integration = IntegrationConfig(**grid_kwargs)
    except SpineRodError as exc:
        key = "grid.n" if "grid.n" in entries else "grid.reorthonormalize_every"
        raise ScenarioParseError(str(exc), key=key, line_no=line_of(key)) from exc

    tol = take_float("solver.tol", 1e-8)
    max_iter = take_float("solver.max_iter", 50)
    if "solver.max_iter" in entries:
        raw, line_no = entries["solver.max_iter"]
        max_iter = _parse_int(raw, "solver.max_iter", line_no)

    try:
        return Scenario(
            material=material,
            spine=spine,
            layout=layout,
            pressures=pressures,
            external=external,
            gravity_enabled=gravity_enabled,
            g_dir=g_dir,
            a_effect_table=a_table,
            integration=integration,
            tol=tol,
            max_iter=int(max_iter),
        )
    except ScenarioParseError:
        raise
    except SpineRodError as exc:
        raise ScenarioParseError(str(exc)) from exc


def _fmt(value: float) -> str:
    return repr(float(value))


def _fmt_vec(vec) -> str:
    return " ".join(_fmt(v) for v in vec)


def _fmt_table(table) -> str:
    return " ".join(f"{_fmt(x)}:{_fmt(v)}" for x, v in table)


def serialize_scenario(scenario: Scenario) -> str:
    """Canonical text form; parse_scenario(serialize_scenario(s)) reproduces s."""
    mat = scenario.material
    spine = scenario.spine
    lines = [
        f"material.E = {_fmt(mat.E)}",
        f"material.G = {_fmt(mat.G)}",
        f"material.rho = {_fmt(mat.rho)}",
        f"material.r_o = {_fmt(mat.r_o)}",
        f"material.r_i = {_fmt(mat.r_i)}",
        f"material.r_c = {_fmt(mat.r_c)}",
        f"material.r_path = {_fmt(mat.r_path)}",
        f"material.L = {_fmt(mat.L)}",
        f"spine.length = {_fmt(spine.length)}",
        f"spine.radius = {_fmt(spine.radius)}",
        f"spine.weight_per_length = {_fmt(spine.weight_per_length)}",
        f"spine.interpolation = {spine.interpolation}",
        f"spine.modulus_table = {_fmt_table(spine.modulus_table)}",
        f"spine.a_effect_table = {_fmt_table(scenario.a_effect_table)}",
        f"pressures = {_fmt_vec(scenario.pressures.pressures)}",
        f"external.force = {_fmt_vec(scenario.external.force)}",
        f"external.moment = {_fmt_vec(scenario.external.moment)}",
        f"gravity = {'on' if scenario.gravity_enabled else 'off'}",
        f"gravity.direction = {_fmt_vec(scenario.g_dir)}",
        f"grid.n = {scenario.integration.n_points}",
        f"grid.reorthonormalize_every = {scenario.integration.reorthonormalize_every}",
        f"solver.tol = {_fmt(scenario.tol)}",
        f"solver.max_iter = {scenario.max_iter}",
    ]
    return "\n".join(lines) + "\n"
