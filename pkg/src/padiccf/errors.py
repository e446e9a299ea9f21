"""Exception hierarchy shared by every module of the package."""


class PadicError(Exception):
    """Base class for all errors raised by padiccf."""


class NonResidue(PadicError, ValueError):
    """The requested square root does not exist in Q_p."""


class NegativeValuation(PadicError, ValueError):
    pass


class DivisionByZero(PadicError, ZeroDivisionError):
    pass


class ConventionMismatch(PadicError, ValueError):
    """The digit convention of the context does not suit the algorithm."""


class SchneiderDomain(PadicError, ValueError):
    """Schneider's algorithm only accepts p-adic integers."""


class Terminated(PadicError):
    """A step was requested on an expansion state that already finished."""


class IndexBeyondFinite(PadicError, IndexError):
    pass


class NotFinite(PadicError, ValueError):
    pass


class InconsistentPeriod(PadicError, ValueError):
    """No fixed point of the period map reproduces the stored quotients."""


class UnsupportedAlgorithm(PadicError, ValueError):
    pass


class UnsupportedInput(PadicError, ValueError):
    pass


class DegenerateZ(PadicError, ValueError):
    pass
