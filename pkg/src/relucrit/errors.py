"""Exception hierarchy shared by every module."""


class RelucritError(Exception):
    """Base class for all errors raised by the package."""


class ZeroVector(RelucritError, ValueError):
    pass


class DomainError(RelucritError, ValueError):
    pass


class DimensionMismatch(RelucritError, ValueError):
    pass


class NotInFixedSpace(RelucritError, ValueError):
    def __init__(self, deviation):
        super().__init__(f"matrix is not in the fixed-point space (max deviation {deviation:.3e})")
        self.deviation = deviation


class NotAdmissible(RelucritError, ValueError):
    pass


class SizeLimit(RelucritError, ValueError):
    pass


class UnsupportedChart(RelucritError, ValueError):
    pass


class UnknownFamily(RelucritError, ValueError):
    pass


class NotConsistent(RelucritError, ValueError):
    pass


class InconsistentSystem(RelucritError, ArithmeticError):
    pass


class SingularJacobian(RelucritError, ArithmeticError):
    pass


class SingularJStar(SingularJacobian):
    pass


class NoConvergence(RelucritError, ArithmeticError):
    """Raised when an iterative solve fails.

    ``partial`` carries whatever the caller had completed (a path prefix,
    the last iterate) and ``index`` the failing step when that makes sense.
    """

    def __init__(self, message, partial=None, index=None):
        super().__init__(message)
        self.partial = partial
        self.index = index
