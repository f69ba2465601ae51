"""Shared exception types, mapped to CLI exit codes by the shell."""

from __future__ import annotations


class ConfigError(Exception):
    """Invalid, unparseable, or unknown configuration input (exit code 1)."""


class DynamicsError(Exception):
    """Simulation-time failure, such as a coincident body pair (exit code 2)."""

    def __init__(self, message: str, *, pair: tuple[int, int] | None = None,
                 step: int | None = None) -> None:
        super().__init__(message)
        self.pair = pair
        self.step = step


class SingularPairError(DynamicsError):
    """Field evaluation hit two coincident points with zero softening."""


class ZeroDistanceError(DynamicsError):
    """Two boids occupy exactly the same position."""
