"""Exception hierarchy shared by every module of the package."""


class TelegraphError(Exception):
    """Base class for all package errors."""


class DomainError(TelegraphError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class EmptyIntersectionError(DomainError):
    """The requested interval does not meet the support of the process."""


class BranchError(DomainError):
    """A branch function was called outside its subinterval of the support."""


class RegimeError(DomainError):
    """The speed regime (c1 > c2 versus c1 == c2) does not match the call."""


class NearlyEqualSpeedsError(RegimeError):
    """Speeds differ by less than the relative tolerance but are not equal."""


class EmptySampleError(TelegraphError, ValueError):
    """An empirical distribution was built from zero samples."""


class ConvergenceError(TelegraphError, ArithmeticError):
    """A numerical procedure did not reach its tolerance."""


class SeriesConvergenceError(ConvergenceError):
    def __init__(self, message, tail_bound):
        super().__init__(message)
        self.tail_bound = tail_bound


class QuadratureConvergenceError(ConvergenceError):
    def __init__(self, message, error_estimate):
        super().__init__(message)
        self.error_estimate = error_estimate
