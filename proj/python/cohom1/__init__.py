"""Shooting and classification of cohomogeneity one steady and expanding solitons."""

from ._core import (
    BracketError,
    ConfigError,
    DomainError,
    boundary_sign_audit,
    constraint_residual,
    critical_points,
    derived_scalars,
    find_alpha,
    find_theta_star,
    parse_angle,
    q_flow_consistency,
    seed,
    shoot,
    vector_field,
)

__all__ = [
    "BracketError",
    "ConfigError",
    "DomainError",
    "boundary_sign_audit",
    "constraint_residual",
    "critical_points",
    "derived_scalars",
    "find_alpha",
    "find_theta_star",
    "parse_angle",
    "q_flow_consistency",
    "seed",
    "shoot",
    "vector_field",
]
