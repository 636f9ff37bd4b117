"""Swarm shape statistics, wall-friction position control and covariance control."""

from ._core import (
    ConfigError,
    DomainError,
    Moments,
    SwarmError,
    ValidationError,
    arrange_n_robots,
    arrange_two_robots,
    boundary_layer_velocity,
    checksum,
    circle_moments,
    forward_force,
    parse_config,
    point_moments,
    polygon_moments,
    run_scenario,
    square_moments,
    square_region,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "Moments",
    "SwarmError",
    "ValidationError",
    "arrange_n_robots",
    "arrange_two_robots",
    "boundary_layer_velocity",
    "checksum",
    "circle_moments",
    "forward_force",
    "parse_config",
    "point_moments",
    "polygon_moments",
    "run_scenario",
    "square_moments",
    "square_region",
]
