"""Exception hierarchy shared by all torusear modules."""


class TorusearError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameter(TorusearError, ValueError):
    """An argument violates a documented precondition."""


class DegenerateSpectrum(TorusearError):
    """The spectrum has no nonzero eigenvalue."""


class PrecisionExhausted(TorusearError):
    """Interval evaluation failed to separate two values below the precision cap."""


class NotAProduct(TorusearError):
    """A theta quotient does not exist for the given divisor."""


class NotATorusSpectrum(TorusearError):
    """The spectrum is not the Laplacian spectrum of any discrete rectangular torus.

    ``partial`` holds the cycle lengths peeled off before the failure, largest first.
    """

    def __init__(self, message: str, partial=()):
        super().__init__(message)
        self.partial = tuple(partial)


class InvalidSampler(TorusearError):
    """A theta sampler does not behave like a finite sum of decaying exponentials."""


class RecoveryFailure(TorusearError):
    """Numeric theta recovery could not settle on integer multiplicities."""

    def __init__(self, message: str, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
