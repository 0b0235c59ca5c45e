"""Exception hierarchy shared by every layer of the toolkit."""


class EvcoError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(EvcoError, ValueError):
    pass


class UnsupportedInstance(EvcoError):
    """The exact algorithm does not cover this input (too many dims, DNF blowup, ...)."""


class NotEConvex(EvcoError):
    pass


class PointInside(EvcoError):
    """A point expected to lie outside a set was found inside it."""


class EmptySetError(EvcoError):
    """An operation that is undefined on the empty set received one."""


class MalformedInstance(EvcoError, ValueError):
    pass


class ImproperMap(EvcoError):
    """The map takes the value Z somewhere, so no affine minorant exists."""
