"""Python surface for the delta-margin inverse optimization core."""

from ._core import oracle_objective, solve, train, verify

__all__ = ["solve", "verify", "oracle_objective", "train"]
