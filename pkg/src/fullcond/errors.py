"""Exception hierarchy.

Two broad families matter to callers: ``InvalidInputError`` (the problem or
its arrays are malformed; CLI exit code 2) and ``ResourceCapError`` (a
configured size/enumeration cap was hit; CLI exit code 3).  Caps are hard
errors on purpose: a silently truncated generator set would make the
compatibility check unsound.
"""


class FullcondError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(FullcondError):
    """The problem instance or its arrays are not well-formed."""


class ResourceCapError(FullcondError):
    """A configured resource cap was exceeded; results would be partial."""


# -- problem validation -------------------------------------------------------

class InvalidProblem(InvalidInputError):
    """Syntactically malformed problem (bad dimensions, bad index sets)."""


class DuplicateConditioningSet(InvalidInputError):
    """Two conditionals share the same conditioning set."""


class ContainmentViolation(InvalidInputError):
    """One conditioning set contains another; the family must be an antichain."""


class EmptyLeftSide(InvalidInputError):
    """A conditioning set covers every variable, leaving nothing to condition."""


class SizeCapExceeded(ResourceCapError):
    """The instance is larger than the configured cell-count cap."""


# -- arrays and documents ------------------------------------------------------

class ShapeMismatch(InvalidInputError):
    """An array is missing cells, has the wrong shape, or wrong count."""


class DocumentError(InvalidInputError):
    """A problem document could not be parsed."""


# -- graphs and circuits -------------------------------------------------------

class NotACycle(InvalidInputError):
    """The given walk is not a simple cycle of the graph."""


class NotAlternating(InvalidInputError):
    """The edge sequence does not alternate sides of the bipartition."""


class CircuitCapExceeded(ResourceCapError):
    """Circuit enumeration hit the configured circuit-count or length cap."""


class OracleCapExceeded(ResourceCapError):
    """The brute-force cycle oracle refuses graphs above its vertex cap."""


class ProbeCapExceeded(ResourceCapError):
    """The minor-sampling probe refuses matrices above its column cap."""


# -- symmetry ------------------------------------------------------------------

class AmbiguousAction(FullcondError):
    """A symmetry did not map the conditioning family onto itself uniquely."""


# -- reconstruction ------------------------------------------------------------

class IncompatibleInput(FullcondError):
    """Joint reconstruction was asked for arrays that are not compatible."""


class WeightCountMismatch(InvalidInputError):
    """Component weights do not match the number of support components."""
