"""Exception hierarchy.

Three families matter to callers: format errors (the input file could
not be read at all), validation errors (the ledger is well formed but
inconsistent) and domain errors (the request has no defined answer for
the given data).  The CLI maps them to exit codes 2, 3 and 4.
"""


class CashleverError(Exception):
    """Base class for every error raised by this package."""


class FormatError(CashleverError):
    """Input text could not be parsed into model objects."""


class LedgerFormatError(FormatError):
    pass


class ScenarioFormatError(FormatError):
    pass


class ValidationError(CashleverError):
    """A parsed ledger violates a structural invariant."""


class NegativeQuantity(ValidationError):
    """A flow line carries a negative quantity or unit value."""


class IdentityViolation(ValidationError):
    """Products minus inputs do not reproduce the stated result."""


class UnmatchedFlow(ValidationError):
    """A flow id changes kind or cash flag between periods, or a stock
    references a line that does not exist or is not cash effective."""


class DomainError(CashleverError):
    """The computation is undefined for the supplied values."""


class NonPositiveMargin(DomainError):
    """Unit margin (net of anticipation) is zero or negative, so no
    finite breakeven quantity exists."""


class ZeroProduction(DomainError):
    """Margin elasticity is undefined at zero production."""


class AtCriticalProduction(DomainError):
    """Volume elasticity has a pole where virtual treasury is zero."""


class AtCriticalMargin(DomainError):
    """Margin elasticity has a pole where virtual treasury is zero."""


class NeverSolvent(DomainError):
    """Cumulative cash never settles above zero within the horizon."""


class InfeasibleCycle(DomainError):
    """The production cycle cannot disburse its own charges: even with
    every unit sold and collected, cash stays negative."""


class InsufficientPeriods(DomainError):
    """The requested decomposition needs more consecutive periods than
    the ledger provides."""


class CoefficientOutOfRange(DomainError):
    """A transfer coefficient falls outside [0, 1], meaning the closing
    stock exceeds the period flow that should contain it."""


class DecompositionMismatch(DomainError):
    """The two routes to the settled self-financing variation disagree.

    This is an internal consistency failure; it indicates a bug or a
    ledger mutated after validation.
    """
