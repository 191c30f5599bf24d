"""Exception hierarchy shared by every module of the package."""


class ZpBraceError(Exception):
    """Base class for all errors raised by zpbrace."""


class NonUnit(ZpBraceError, ValueError):
    pass


class NotASquare(ZpBraceError, ValueError):
    pass


class NotSymmetric(ZpBraceError, ValueError):
    pass


class NotUnimodular(ZpBraceError, ValueError):
    pass


class RankDeficient(ZpBraceError, ValueError):
    pass


class UnitKernel(ZpBraceError, ValueError):
    pass


class PrecisionTooSmall(ZpBraceError, ValueError):
    pass


class InsufficientPrecision(ZpBraceError):
    """A classification needed a Jordan scale that the working precision cannot see."""


class NoNondegenerateLift(ZpBraceError):
    pass


class BudgetExceeded(ZpBraceError):
    """An exhaustive computation would exceed its configured size budget."""
