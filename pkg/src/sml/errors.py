"""Exception hierarchy shared by every module."""


class SMLError(Exception):
    """Base class for all errors raised by :mod:`sml`."""


class InvalidConfigError(SMLError, ValueError):
    pass


class SiteIndexError(SMLError, IndexError):
    pass


class SizeBudgetError(SMLError, ValueError):
    pass


class CommutationError(SMLError, ValueError):
    """Operators expected to commute do not.

    ``pair`` holds the offending indices and ``norm`` the relative
    commutator norm.
    """

    def __init__(self, message, pair=None, norm=None):
        super().__init__(message)
        self.pair = pair
        self.norm = norm


class DiagonalizationError(SMLError, ArithmeticError):
    pass


class PoleError(SMLError, ZeroDivisionError):
    pass


class DomainError(SMLError, ValueError):
    pass


class HermiticityError(SMLError, ValueError):
    pass


class WeylRelationError(SMLError, ArithmeticError):
    pass


class LabelError(SMLError, ValueError):
    pass


class ExpansionError(SMLError, ArithmeticError):
    pass


class ExtractionError(SMLError, ArithmeticError):
    pass


class EnumerationError(SMLError, ValueError):
    pass
