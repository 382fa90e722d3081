"""Exception hierarchy.

Two families matter to callers: :class:`ValidationError` means the input was
rejected (bad map, mismatched tables, precondition failure) and
:class:`NumericalError` means the computation itself failed and may succeed
with more precision or a larger cap.  The CLI maps them to exit codes 2 and 3.
"""


class SpecrigError(Exception):
    exit_code = 1


class ValidationError(SpecrigError, ValueError):
    exit_code = 2


class NumericalError(SpecrigError, ArithmeticError):
    exit_code = 3


class DegenerateMap(ValidationError):
    pass


class DegenerateParameter(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class SingularCurve(ValidationError):
    pass


class NotPeriodic(ValidationError):
    pass


class InsufficientMarkers(ValidationError):
    pass


class NearParabolic(ValidationError):
    pass


class NonConvergence(NumericalError):
    pass


class NonFinite(NumericalError):
    pass


class DegreeCapExceeded(NumericalError):
    pass


class DerivativeVanishes(NumericalError):
    pass


class DerivativeTooSmall(NumericalError):
    pass
