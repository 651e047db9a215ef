"""Shared exception taxonomy.

The CLI maps :class:`ParameterError` to a usage failure (exit code 2); all
other toolkit errors indicate an internal contract violation and are allowed
to propagate.
"""

from __future__ import annotations


class CanordError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(CanordError, ValueError):
    """A user-supplied family name or parameter is outside its valid range."""


class ClosureCapError(CanordError):
    """Group closure exceeded the element cap without terminating."""


class NotSubgroupError(CanordError, ValueError):
    """The given elements do not form a subgroup."""


class NotNormalError(CanordError, ValueError):
    """The given subgroup is not normal, so the quotient is undefined."""


class LatticeError(CanordError, ValueError):
    """An intersection configuration violates a structural precondition."""


class CurveTypeError(CanordError, ValueError):
    """An exceptional curve does not match any recognised local type."""


class TruncationError(CanordError, ValueError):
    """The truncation degree is too small for the requested check."""
