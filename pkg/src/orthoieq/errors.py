"""Exception hierarchy. Everything raised on purpose derives from OrthoieqError."""


class OrthoieqError(Exception):
    pass


class ConfigurationError(OrthoieqError):
    """Bad configuration value (precision below minimum, invalid parameter range, ...)."""


class ModeError(OrthoieqError):
    """Illegal scalar-mode operation: float-to-exact conversion or mixed precisions."""


class WeightSyntaxError(OrthoieqError):
    """Malformed weight expression text. Carries the 1-based offset of the offending token."""

    def __init__(self, message, position):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class UnknownIdentifierError(WeightSyntaxError):
    pass


class IntegrabilityError(OrthoieqError):
    """The weight does not have a finite integral over its interval."""


class NormalizationError(OrthoieqError):
    """The weight integral is numerically indistinguishable from zero."""


class QuadratureError(OrthoieqError):
    """Adaptive integration failed to reach the target accuracy."""

    def __init__(self, message, worst_index=None):
        super().__init__(message)
        self.worst_index = worst_index


class ConstantFunctionError(OrthoieqError):
    """A functional argument was detected to be constant on the interval."""


class SingularHankelError(OrthoieqError):
    """det B_n is zero (or below the validity threshold), so no degree-n solution exists."""


class SingularSystemError(OrthoieqError):
    """A variant linear system has no unique solution."""


class DegenerateDegreeError(OrthoieqError):
    """The solved leading coefficient vanished, so the result is not of the requested degree."""


class InsufficientMomentsError(OrthoieqError):
    """The moment sequence is too short for the requested contraction."""


class InconsistentPatternError(OrthoieqError):
    """A sparsity pattern assumed a coefficient nonzero but the solve returned zero for it."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DegreeMismatchError(OrthoieqError):
    pass


class NotProportionalError(OrthoieqError):
    """Two polynomials are not related by a single scale factor."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index
