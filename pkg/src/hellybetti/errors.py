"""Exception hierarchy shared by every module."""

from __future__ import annotations


class HellyBettiError(Exception):
    """Base class for all library errors."""


class InputError(HellyBettiError, ValueError):
    """Malformed or out-of-contract input."""


class BudgetExceeded(HellyBettiError):
    """An enumeration or construction would exceed its configured budget."""


class DegenerateConfiguration(HellyBettiError):
    """The point configuration is not in general position for a predicate."""


class InsufficientFamily(HellyBettiError):
    """A direct search in the construction pipeline came up empty."""


class InvariantViolation(HellyBettiError, AssertionError):
    """An internal invariant failed; indicates a bug, not bad input."""
