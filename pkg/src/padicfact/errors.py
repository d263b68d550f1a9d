"""Exception hierarchy.

Every mathematical failure raised by the toolkit derives from
:class:`PadicFactError`; the CLI maps these to exit code 1 and reports
``type(exc).__name__`` in the ``"error"`` field.
"""


class PadicFactError(Exception):
    """Base class for mathematical errors."""


class NotAUnit(PadicFactError):
    pass


class NonResidue(PadicFactError):
    pass


class Ramified(PadicFactError):
    pass


class RamifiedEmbedding(PadicFactError):
    pass


class PrecisionExhausted(PadicFactError):
    pass


class NotPrimitive(PadicFactError):
    pass


class NotEmbeddable(PadicFactError):
    """Character values do not lie in Z_p (order does not divide p - 1)."""


class ZeroAtPrecision(PadicFactError):
    pass


class OddCharacter(PadicFactError):
    pass


class PoleAtOne(PadicFactError):
    pass


class TrivialProjection(PadicFactError):
    pass


class ConventionMismatch(PadicFactError):
    pass


class ParityViolation(PadicFactError):
    pass


class NotSplit(PadicFactError):
    pass


class ZeroAlpha(PadicFactError):
    pass


class ZeroDenominator(PadicFactError):
    pass


class NotArithmetic(PadicFactError):
    """Hecke/CM data violate the arithmetic-mode constraints."""


class ParityError(PadicFactError):
    pass


class NotFundamental(PadicFactError):
    pass


class SearchExhausted(PadicFactError):
    pass


class BudgetExceeded(PadicFactError):
    pass


class NotRegular(PadicFactError):
    pass
