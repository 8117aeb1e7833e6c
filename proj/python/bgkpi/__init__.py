"""Discrete-velocity BGK solver with projective integration."""

from ._core import (
    Advice,
    BgkpiError,
    Boundary,
    ButcherTableau,
    Config,
    ConfigParseError,
    ConfigValidationError,
    InstabilityError,
    MaxwellianMode,
    Method,
    Reconstruction,
    VelocityGrid,
    advise,
    advise_config,
    cli,
    collision_spectrum,
    initial_field,
    known_tableaus,
    load_config,
    maxwellian,
    moments,
    parse_config,
    profile_moments,
    projective_amplification,
    rhs,
    run,
    serialize_config,
    step,
    tableau,
    transport_collision_spectrum,
    validate_config,
    validate_tableau,
    velocity_grid,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
