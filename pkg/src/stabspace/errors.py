"""Exception types shared across the package.

Each error class corresponds to a distinct CLI exit code, see cli.EXIT_CODES.
"""

from __future__ import annotations


class StabspaceError(Exception):
    """Base class for all library errors."""


class InvalidGraphError(StabspaceError):
    """A marked graph violates connectivity or vertex stability."""


class BoundsExceededError(StabspaceError):
    """A requested computation exceeds the configured size bounds."""


class DegreeMismatchError(StabspaceError):
    """Total degrees of a sheaf class and a stability parameter disagree."""


class DegenerateParameterError(StabspaceError):
    """A stability parameter lies on a wall but the operation needs it off-wall."""


class DimensionLimitError(StabspaceError):
    """A cell-enumeration or plot request exceeds the supported dimension."""


class ConventionError(StabspaceError):
    """Arguments violate the indexing conventions of the special graphs."""
