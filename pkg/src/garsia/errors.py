"""Exception types shared across the package."""


class GarsiaError(Exception):
    """Base class for errors raised by this package."""


class PolynomialParseError(GarsiaError, ValueError):
    """Malformed polynomial text."""


class BetaSpecError(GarsiaError, ValueError):
    """Malformed or unusable beta specification."""


class IndeterminateError(GarsiaError):
    """An exact sign or certification could not be decided within the
    configured refinement budget."""


class IndeterminateOrderingError(IndeterminateError):
    """Two critical values could not be ordered in numeric mode.

    The caller should retry in symbolic mode.
    """


class BudgetExceededError(GarsiaError):
    """A value-set or enumeration would exceed the configured memory budget."""


class CapExceededError(GarsiaError):
    """A transition enumeration beyond the configured length cap was requested
    without the long-run flag."""


class ModulusMismatchError(GarsiaError, ValueError):
    """A field element was evaluated against an algebraic number with a
    different defining polynomial."""
