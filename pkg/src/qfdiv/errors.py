"""Exception types shared across the package."""


class QfdivError(Exception):
    """Base class for all package errors."""


class ShapeError(QfdivError, ValueError):
    """Matrix dimensions are inconsistent."""


class SymmetryError(QfdivError, ValueError):
    """A matrix expected to be Hermitian is not."""


class NotPsdError(QfdivError, ValueError):
    """A matrix expected to be positive semidefinite is not."""


class ResourceError(QfdivError):
    """A configured dimension cap would be exceeded."""


class InvalidInputError(QfdivError, ValueError):
    """Parameters are out of range or malformed."""


class EvaluationError(QfdivError, ArithmeticError):
    """A scalar evaluator produced NaN."""


class IndeterminateFormError(QfdivError, ArithmeticError):
    """An extended-real sum met both +inf and -inf."""


class IntegrationError(QfdivError, ArithmeticError):
    """Quadrature failed to converge."""


class SupportError(QfdivError, ValueError):
    """A support containment hypothesis is violated."""


class TracePreservationError(QfdivError, ValueError):
    """Tr Phi(B) differs from Tr B."""


class InputFormatError(QfdivError, ValueError):
    """A JSON input file is malformed."""
