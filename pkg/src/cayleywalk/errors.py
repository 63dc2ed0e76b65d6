"""Exception hierarchy for the package.

Every error raised on purpose derives from CayleyWalkError so callers can
catch the whole family; the CLI maps the leaf classes onto exit codes.
"""

from __future__ import annotations


class CayleyWalkError(Exception):
    """Base class for all errors raised by this package."""


class SpecError(CayleyWalkError, ValueError):
    """Invalid configuration: bad JSON spec, bad constructor arguments."""


class EncodingError(SpecError):
    """A group element does not match the group's canonical encoding."""


class UnsupportedGroupError(SpecError):
    """Operation needs a property the group does not have (e.g. finiteness)."""


class NotAutomorphismError(SpecError):
    """A generator permutation does not extend to a group automorphism."""


class NonUnitaryError(SpecError):
    """A matrix or phase that must be unitary / a complex unit is not."""


class FamilyPreconditionError(CayleyWalkError, ValueError):
    """Arguments violate a structural precondition of a symmetry family."""


class DegenerateCoinError(CayleyWalkError, ValueError):
    """The coin is diagonal up to phases, so the construction is not unique."""


class NumericDriftError(CayleyWalkError, ArithmeticError):
    """A numeric invariant (state norm) drifted beyond tolerance."""
