"""Exception types shared across the toolkit."""


class PitError(Exception):
    """Base class for all toolkit errors."""


class NonPrimeModulus(PitError):
    pass


class ModulusTooLarge(PitError):
    pass


class NoSuchElement(PitError):
    pass


class ZeroElement(PitError):
    pass


class DuplicatePoints(PitError):
    pass


class FieldMismatch(PitError):
    pass


class MalformedGraph(PitError):
    pass


class ArityMismatch(PitError):
    pass


class DimensionMismatch(PitError):
    pass


class OrderTooSmall(PitError):
    pass


class FieldTooSmall(PitError):
    pass


class FieldTooSmallForDegree(PitError):
    pass


class DNotPowerOfTwo(PitError):
    pass


class TooLarge(PitError):
    pass


class DegreeExceedsD(PitError):
    pass


class BadDegreeIndex(PitError):
    pass


class NonHomogeneousLabel(PitError):
    pass


class FormatError(PitError):
    pass
