"""Exception hierarchy shared by all modules."""


class WprojError(Exception):
    """Base class for library errors."""


class DomainError(WprojError):
    """Input lies outside the domain of an operation (CLI exit code 3)."""


class InvalidPoint(DomainError):
    """A vector that must be nonzero is (numerically) zero."""


class ZeroScalar(DomainError):
    pass


class DimMismatch(WprojError):
    pass


class PivotTooSmall(DomainError):
    pass


class NotRankOne(DomainError):
    pass


class ZeroMatrix(DomainError):
    pass


class NoRealRoot(DomainError):
    pass


class StepTooSmall(WprojError):
    pass


class DomainViolation(DomainError):
    """A map evaluation left its domain during differentiation."""


class FrameMismatch(WprojError):
    pass


class UnknownCheck(WprojError):
    pass
