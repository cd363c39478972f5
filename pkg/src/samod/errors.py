"""Exception hierarchy for samod."""


class SamodError(Exception):
    """Base class for all library errors."""


class MalformedTableError(SamodError):
    """An operation table is ragged, or holds an out-of-range index."""


class FixtureError(SamodError):
    """Unknown or unparsable fixture id."""


class CapExceededError(SamodError):
    """A size cap (elements, subsets, tuples) was exceeded."""


class AmbientMismatchError(SamodError):
    """Two sets live in different ambient modules."""


class ContainmentError(SamodError):
    """A required inclusion between sets does not hold."""


class PreconditionError(SamodError):
    """A documented precondition of an operation failed."""


class NotHomomorphismError(SamodError):
    """A map fails additivity, zero preservation or action compatibility."""


class NotEquivalentError(SamodError):
    """Two tuples are not exchange equivalent."""


class NotDOrderedError(SamodError):
    """The D-quasiordering is not antisymmetric."""


class NotStableError(SamodError):
    """A set X fails X + D inside X."""


class NotAddClosedError(SamodError):
    """A set that must be closed under addition is not."""


class NotBipotentError(SamodError):
    """A monoid is not bipotent."""


class NotRetractionError(SamodError):
    """A map is not a bipotent retraction."""


class ConvexityError(SamodError):
    """A subset of a chain is not convex where convexity is required."""
