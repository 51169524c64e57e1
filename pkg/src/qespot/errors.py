"""Exception hierarchy shared by all qespot modules."""


class QESError(ValueError):
    """Base class for every error raised by qespot."""


class DomainError(QESError):
    """A coordinate lies outside the domain of the requested function."""


class ParameterError(QESError):
    """Potential or representation parameters are invalid."""


class InconsistentParametersError(ParameterError):
    """Rational coefficients do not correspond to any algebra parameters."""


class InsufficientRangeError(QESError):
    """Samples do not cover enough of the asymptotic region for a fit."""
