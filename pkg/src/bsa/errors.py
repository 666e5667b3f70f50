"""Exception hierarchy shared across the package."""


class BsaError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(BsaError):
    pass


class NotSymmetric(BsaError):
    pass


class DegenerateBall(BsaError):
    pass


class BadExponent(BsaError):
    pass


class ZeroFunctional(BsaError):
    pass


class UnsupportedDimension(BsaError):
    pass


class NumericalBreakdown(BsaError):
    pass


class UnsupportedNormPair(BsaError):
    pass


class UseSummingFamily(BsaError):
    pass


class TooSmall(BsaError):
    pass


class DegenerateStart(BsaError):
    pass


class NotStrictlyConvexEvidence(BsaError):
    pass


class NotBiorthogonal(BsaError):
    pass


class NotInvertible(BsaError):
    pass


class NormBoundViolated(BsaError):
    pass
