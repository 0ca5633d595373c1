"""Exception hierarchy.

Every domain failure raises a subclass of :class:`AbelexpError`; the CLI maps
these to exit code 2, and :class:`ParseError` to exit code 3.
"""


class AbelexpError(Exception):
    """Base class for all domain errors."""


class StructuralError(AbelexpError, ValueError):
    """Operands live on different groups, dimensions or scalar fields."""


class CyclotomicDivisionError(AbelexpError, ZeroDivisionError):
    pass


class UnsupportedEmbeddingError(AbelexpError, ValueError):
    """A root of unity of order n was requested in Q(zeta_N) with n not dividing N."""


class NotGeneralizedPolynomialError(AbelexpError, ValueError):
    pass


class NoCertificateError(AbelexpError, ValueError):
    pass


class PreconditionError(AbelexpError, ValueError):
    pass


class DecompositionFailureError(AbelexpError, RuntimeError):
    pass


class IllPosedInstanceError(AbelexpError, RuntimeError):
    pass


class NotInLiftedFormError(AbelexpError, ValueError):
    pass


class NotFiniteError(AbelexpError, ValueError):
    pass


class OverflowGuardError(AbelexpError, ValueError):
    pass


class ParseError(AbelexpError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
