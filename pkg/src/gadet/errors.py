"""Exception hierarchy shared by every module."""


class GadetError(Exception):
    """Base class for all library errors."""


class NotPrime(GadetError, ValueError):
    pass


class NotIrreducible(GadetError, ValueError):
    pass


class NotPrimitive(GadetError, ValueError):
    pass


class OrbitDegenerate(GadetError):
    pass


class PrimeMismatch(GadetError, ValueError):
    pass


class ShapeMismatch(GadetError, ValueError):
    pass


class NotIntegral(GadetError, ArithmeticError):
    pass


class NonRationalDeterminant(GadetError, ArithmeticError):
    pass


class CapExceeded(GadetError):
    pass


class NotCoprime(GadetError, ValueError):
    pass


class CongruenceViolation(GadetError, ValueError):
    pass


class VerificationFailed(GadetError, AssertionError):
    pass


class MissingMonomialNotUnique(GadetError):
    pass


class UnsupportedQ(GadetError, ValueError):
    pass


class UnsupportedCase(GadetError, ValueError):
    pass


class UnsupportedTarget(GadetError, ValueError):
    pass


class GcdFailure(GadetError):
    """The procedure's coefficients share a common factor; try another base element."""


class MismatchAgainstReference(GadetError, AssertionError):
    pass
