"""Exception types shared across the package.

Every failure that a caller can provoke with bad (but well-typed) input
gets its own class, so tests and the CLI can react to the exact cause
instead of string-matching messages.
"""


class AdelicError(Exception):
    """Base class for all domain errors raised by this package."""


class ZeroInput(AdelicError, ZeroDivisionError):
    """An operation that needs a nonzero rational received zero."""


class FieldMismatch(AdelicError, TypeError):
    """Two exact reals live in different quadratic fields."""


class PrimeSetMismatch(AdelicError, ValueError):
    """Two adelic objects are indexed by different prime sets."""


class InconsistentConstraints(AdelicError, ValueError):
    """A system of p-adic congruences has empty solution set."""


class TrivialCharacter(AdelicError, ValueError):
    """gamma = 0 selects the trivial character; the request is vacuous."""


class ConditionViolated(AdelicError, ArithmeticError):
    """The nondegeneracy condition on lambda fails (lambda = -alpha_p)."""


class NegativeVolume(AdelicError, ValueError):
    """A requested target volume is negative, so no set can realize it."""


class ZeroGamma(AdelicError, ValueError):
    """gamma = 0 cannot be decomposed against a scaled denominator."""


class CertificateFailure(AdelicError, ArithmeticError):
    """A signed box combination cannot be certified pointwise nonnegative."""


class NegativeIndicator(AdelicError, ArithmeticError):
    """A weighted lift count came out negative; the box set is invalid."""


class UnsupportedCoordinate(AdelicError, ValueError):
    """A coordinate outside the declared support cannot be certified."""
