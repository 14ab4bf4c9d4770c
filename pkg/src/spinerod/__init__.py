"""Static Cosserat rod model of a pneumatic soft continuum robot with a growing spine."""

from .actuation import (
    N_CHAMBERS,
    PRESSURE_CEILING,
    ChamberLayout,
    ExternalLoad,
    PressureCommand,
    default_layout,
    pneumatic_load,
    tip_boundary,
)
from .errors import (
    DomainError,
    EnvelopeError,
    IntegrationDivergedError,
    InvalidCommandError,
    InvalidParameterError,
    ScenarioParseError,
    SingularStiffnessError,
    SolverFailureError,
    SpineRodError,
    ZeroDeflectionError,
)
from .rod import (
    GRAVITY,
    LoadModel,
    MaterialParams,
    RodState,
    SectionProperties,
    constitutive_strains,
    hat,
    ode_rhs,
    orthonormalize,
    section_properties,
)
from .scenario import (
    DEFAULT_GROUP,
    ResultRecord,
    Scenario,
    parse_scenario,
    serialize_scenario,
    solve_scenario,
)
from .solver import (
    IntegrationConfig,
    Residual,
    ShootGuess,
    SolveResult,
    integrate_rod,
    pressure_sweep,
    residual,
    shoot,
)
from .spine import (
    A_EFFECT_TABLE,
    E_SILICONE,
    MODULUS_TABLE,
    SpineConfig,
    StiffnessProfile,
    a_effect,
    beam_deflection,
    combined_modulus,
    modulus_from_tip_deflection,
    spine_modulus,
    stiffness_at,
)
from .studies import (
    CONVERGENCE_GRIDS,
    ELONGATION_PRESSURES,
    SPINE_LENGTHS,
    SWEEP_PRESSURES,
    ConvergenceStudy,
    ElongationStudy,
    convergence_study,
    elongation_study,
    sweep_records,
)

__all__ = [
    "A_EFFECT_TABLE",
    "CONVERGENCE_GRIDS",
    "ChamberLayout",
    "ConvergenceStudy",
    "DEFAULT_GROUP",
    "DomainError",
    "E_SILICONE",
    "ELONGATION_PRESSURES",
    "ElongationStudy",
    "EnvelopeError",
    "ExternalLoad",
    "GRAVITY",
    "IntegrationConfig",
    "IntegrationDivergedError",
    "InvalidCommandError",
    "InvalidParameterError",
    "LoadModel",
    "MODULUS_TABLE",
    "MaterialParams",
    "N_CHAMBERS",
    "PRESSURE_CEILING",
    "PressureCommand",
    "Residual",
    "ResultRecord",
    "RodState",
    "SPINE_LENGTHS",
    "SWEEP_PRESSURES",
    "Scenario",
    "ScenarioParseError",
    "SectionProperties",
    "ShootGuess",
    "SingularStiffnessError",
    "SolveResult",
    "SolverFailureError",
    "SpineConfig",
    "SpineRodError",
    "StiffnessProfile",
    "ZeroDeflectionError",
    "a_effect",
    "beam_deflection",
    "combined_modulus",
    "constitutive_strains",
    "convergence_study",
    "default_layout",
    "elongation_study",
    "hat",
    "integrate_rod",
    "modulus_from_tip_deflection",
    "ode_rhs",
    "orthonormalize",
    "parse_scenario",
    "pneumatic_load",
    "pressure_sweep",
    "residual",
    "section_properties",
    "serialize_scenario",
    "shoot",
    "solve_scenario",
    "spine_modulus",
    "stiffness_at",
    "sweep_records",
    "tip_boundary",
]
