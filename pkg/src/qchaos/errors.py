"""Exception types raised across the package."""


class QChaosError(Exception):
    """Base class for all package errors."""


class NonUnitaryInput(QChaosError, ValueError):
    pass


class DimensionMismatch(QChaosError, ValueError):
    pass


class IndexOutOfRange(QChaosError, ValueError):
    pass


class KindMismatch(QChaosError, ValueError):
    pass


class FamilyTooLarge(QChaosError, ValueError):
    pass


class DomainError(QChaosError, ValueError):
    pass


class EmptySample(QChaosError, ValueError):
    pass


class ZeroVector(QChaosError, ValueError):
    pass


class TooFewMatrices(QChaosError, ValueError):
    pass
