"""Exception types raised by the hardwall package."""


class HardwallError(Exception):
    """Base class; ``code`` is the short identifier used in CLI error reports."""

    code = "hardwall_error"


class QuadratureError(HardwallError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance.

    The partial estimate is kept so callers can decide whether it is usable.
    """

    code = "quadrature_failure"

    def __init__(self, message, value=float("nan"), error_estimate=float("inf"),
                 subdivisions_used=0):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.subdivisions_used = subdivisions_used


class IntegrandError(QuadratureError):
    """The integrand returned a non-finite value."""

    code = "integrand_not_finite"

    def __init__(self, message, abscissa):
        super().__init__(message)
        self.abscissa = abscissa


class UnderflowError(HardwallError, ArithmeticError):
    """A log-domain integral vanished even after shifting by the exponent maximum."""

    code = "underflow"

    def __init__(self, message, shifted_estimate=0.0, shift=float("nan")):
        super().__init__(message)
        self.shifted_estimate = shifted_estimate
        self.shift = shift


class RootBracketError(HardwallError, ValueError):
    """No sign change on the bracket handed to the root finder."""

    code = "no_sign_change"


class ConvergenceError(HardwallError, ArithmeticError):
    """An iterative special-function evaluation did not converge."""

    code = "no_convergence"


class GeometryError(HardwallError, ValueError):
    """Inconsistent droplet geometry, or a potential that is not subharmonic."""

    code = "geometry_failure"


class RegimeError(HardwallError, ValueError):
    """An operation was requested outside the regime where it is defined."""

    code = "regime_failure"


class DescriptorError(HardwallError, ValueError):
    """A potential descriptor string could not be parsed."""

    code = "bad_descriptor"

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code


class TermError(HardwallError):
    """A per-term evaluation failed inside a sum over ``j``.

    ``code`` is inherited from the underlying failure; ``index`` names the term.
    """

    def __init__(self, index, cause):
        super().__init__(f"term j={index} failed: {cause}")
        self.index = index
        self.cause = cause
        self.code = getattr(cause, "code", "term_failure")
