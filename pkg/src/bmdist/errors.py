"""Exception types raised across the toolkit.

Every error that callers are expected to catch derives from BmdistError,
so `except BmdistError` separates bad input from genuine bugs.
"""


class BmdistError(Exception):
    pass


class DimensionMismatch(BmdistError):
    pass


class OriginNotInterior(BmdistError):
    pass


class NotVertexEnumerable(BmdistError):
    pass


class SingularMap(BmdistError):
    pass


class NotIdempotent(BmdistError):
    pass


class DimensionTooHigh(BmdistError):
    pass


class InvalidP(BmdistError):
    pass


class DegenerateCone(BmdistError):
    pass


class NotSymmetricBase(BmdistError):
    pass


class MalformedSpec(BmdistError):
    pass


class UnknownName(BmdistError):
    pass


class GeneratorCapacityExceeded(BmdistError):
    pass


class SymmetryFlagViolated(BmdistError):
    pass


class EmptyContactSet(BmdistError):
    pass


class NotOptimalPosition(BmdistError):
    """The inspected position admits no contact-point decomposition.

    Says nothing about other positions of the same body.
    """


class HypothesisViolated(BmdistError):
    pass


class NoConditionHolds(BmdistError):
    pass


class UnknownSuite(BmdistError):
    pass


class NotPlanar(BmdistError):
    pass
