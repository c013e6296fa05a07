"""Exception types shared across the package."""


class OctetError(Exception):
    """Base class for all domain errors."""


class ParityViolation(OctetError):
    """Lattice point has odd coordinate sum (not an FCC point)."""


class FaceMismatch(OctetError):
    """Two faces cannot be glued because their shapes differ."""


class NotTriangle(OctetError):
    """A triangular face was required but the face is not a triangle."""


class EmptyAssembly(OctetError):
    """Operation requires a nonempty assembly."""


class EmptyRegion(OctetError):
    """Plan region selects no cells / is degenerate."""


class UnknownRule(OctetError):
    """Rule id not present in the rule registry."""


class UnsupportedRelation(OctetError):
    """Relation not supported for the given species pair."""


class StaleMatch(OctetError):
    """Match was computed against a different assembly state."""


class CollisionDetected(OctetError):
    """Applying a match would make cell interiors overlap."""


class UnknownFeature(OctetError):
    """Feature index out of range for the host cell."""


class StepFailed(OctetError):
    """A derivation step could not be replayed."""

    def __init__(self, index: int, cause: Exception):
        self.index = index
        self.cause = cause
        super().__init__(f"step {index} failed: {cause!r}")


class InvalidParams(OctetError):
    """Tower parameters violate an invariant; message names it."""


class SchemaViolation(OctetError):
    """Document does not match the expected schema.

    ``path`` is a JSON-pointer-style location of the offending element.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class IoFailure(OctetError):
    """File could not be written or read."""
