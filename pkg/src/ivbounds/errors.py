"""Exception types raised by the library."""


class IVBoundsError(Exception):
    """Base class for all library errors."""


class InvalidLaw(IVBoundsError, ValueError):
    pass


class NegativeProbability(InvalidLaw):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"negative probability {value} at {index}")


class ArmNotNormalized(InvalidLaw):
    def __init__(self, z, total):
        self.z = z
        self.total = total
        super().__init__(f"arm z={z} sums to {total}, expected 1")


class EmptyArm(InvalidLaw):
    def __init__(self, z):
        self.z = z
        super().__init__(f"arm z={z} has zero marginal mass")


class SupportTooSmall(InvalidLaw):
    def __init__(self, n):
        self.n = n
        super().__init__(f"outcome support needs at least 2 values, got {n}")


class ShapeMismatch(IVBoundsError, ValueError):
    pass


class DimensionTooLarge(IVBoundsError):
    def __init__(self, size, cap):
        self.size = size
        self.cap = cap
        super().__init__(f"problem size {size} exceeds cap {cap}")


class Infeasible(IVBoundsError):
    """A dual point violates ``M v <= c`` (or ``M r <= 0``)."""

    def __init__(self, row, lhs, rhs):
        self.row = row
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"row {row} violated: {lhs} > {rhs}")


class ZeroVector(IVBoundsError, ValueError):
    pass


class NotAdmissible(IVBoundsError, ValueError):
    def __init__(self, clause):
        self.clause = clause
        super().__init__(f"signature not admissible: {clause}")


class NotAVertex(IVBoundsError, ValueError):
    pass


class UnsupportedInstrumentArity(IVBoundsError):
    def __init__(self, ell):
        self.ell = ell
        super().__init__(
            f"sharp enumeration needs a binary instrument (ell=2), got ell={ell}"
        )


class InfeasibleLaw(IVBoundsError):
    """The observed law is incompatible with the IV model."""


class SeparationFailed(IVBoundsError):
    pass


class DimensionMismatch(IVBoundsError, ValueError):
    pass


class SchemaError(IVBoundsError, ValueError):
    """An input document does not follow the JSON schema."""
