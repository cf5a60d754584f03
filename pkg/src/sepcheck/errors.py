"""Exception hierarchy for sepcheck."""


class SepcheckError(Exception):
    """Base class for all sepcheck errors."""


class InputError(SepcheckError, ValueError):
    """Invalid user-supplied data (maps to CLI exit code 2)."""


class DimensionMismatch(InputError):
    pass


class NotHermitian(InputError):
    pass


class NotNormalized(InputError):
    pass


class NotDensityMatrix(InputError):
    pass


class ParameterOutOfRange(InputError):
    pass


class NumericalError(SepcheckError, ArithmeticError):
    """Numerical failure (maps to CLI exit code 3)."""


class NonRealExpectation(NumericalError):
    pass


class NonMonotone(NumericalError):
    pass


class NoSignChange(NumericalError):
    pass
