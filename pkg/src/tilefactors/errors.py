"""Error types and resource caps shared across the toolkit.

Every failure mode maps to a process exit code so the command line
interface can stay a thin shell around the library:

    2  malformed input
    3  violated precondition (the requested analysis is undefined)
    4  a resource cap was hit, or a search ended without a certificate
    5  an internal cross-check failed (a bug, not a user error)
"""

from __future__ import annotations

import os
from dataclasses import dataclass


class TileFactorsError(Exception):
    exit_code = 1


class ParseError(TileFactorsError):
    exit_code = 2


class PreconditionError(TileFactorsError):
    exit_code = 3


class CapExceededError(TileFactorsError):
    exit_code = 4

    def __init__(self, message: str, cap_name: str = "", cap_value: int = 0):
        super().__init__(message)
        self.cap_name = cap_name
        self.cap_value = cap_value


class NonCertifiedError(TileFactorsError):
    """A search exhausted its budget with neither witness nor refutation."""

    exit_code = 4


class InternalCheckError(TileFactorsError):
    exit_code = 5


_ENV_PREFIX = "TILEFACTORS_CAP_"


@dataclass(frozen=True)
class Caps:
    """Budgets for the graph searches.

    states caps any single overlap-state collection, depth caps
    extension searches (in placed tiles per row), and tuple_size caps
    the mutual-overlap configurations probed for the coincidence rank.
    """

    states: int = 20000
    depth: int = 64
    tuple_size: int = 8

    @staticmethod
    def from_env(
        states: int | None = None,
        depth: int | None = None,
        tuple_size: int | None = None,
    ) -> "Caps":
        """Build caps from explicit values, falling back to the environment.

        Explicit arguments win over TILEFACTORS_CAP_{STATES,DEPTH,TUPLE},
        which win over the defaults.
        """

        def pick(explicit: int | None, env_key: str, default: int) -> int:
            if explicit is not None:
                return explicit
            raw = os.environ.get(_ENV_PREFIX + env_key)
            if raw is None:
                return default
            try:
                value = int(raw)
            except ValueError:
                raise ParseError(
                    f"environment variable {_ENV_PREFIX + env_key}={raw!r} is not an integer"
                ) from None
            if value <= 0:
                raise ParseError(
                    f"environment variable {_ENV_PREFIX + env_key} must be positive, got {value}"
                )
            return value

        return Caps(
            states=pick(states, "STATES", Caps.states),
            depth=pick(depth, "DEPTH", Caps.depth),
            tuple_size=pick(tuple_size, "TUPLE", Caps.tuple_size),
        )
