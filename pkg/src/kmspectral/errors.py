"""Exception hierarchy shared by every module."""


class KMSpectralError(Exception):
    """Base class for all library errors."""


class NonPositiveParameter(KMSpectralError, ValueError):
    pass


class DegenerateParameters(KMSpectralError, ValueError):
    """A pole formula denominator vanishes for the requested parameters.

    ``reduces_to`` names the simpler catalog family the parameters collapse
    onto, when there is one.
    """

    def __init__(self, message: str, expression: str = "", reduces_to: str | None = None):
        super().__init__(message)
        self.expression = expression
        self.reduces_to = reduces_to


class OutOfDomain(KMSpectralError, ValueError):
    pass


class NoClosedForm(KMSpectralError):
    pass


class ZInSupport(KMSpectralError, ValueError):
    pass


class NonConvergedQuadrature(KMSpectralError, ArithmeticError):
    pass


class WindowTooLarge(KMSpectralError):
    pass
