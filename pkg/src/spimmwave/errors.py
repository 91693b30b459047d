"""Exception types shared across the package."""


class SpimmwaveError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(SpimmwaveError, ValueError):
    """An argument is outside its documented domain."""


class DimensionError(SpimmwaveError, ValueError):
    """Array arguments do not conform (non-square, mismatched, too large)."""


class NotPositiveDefiniteError(SpimmwaveError, ArithmeticError):
    """A matrix required to be Hermitian positive definite is not."""


class NoRootError(SpimmwaveError, ArithmeticError):
    """A bracketed root search found no sign change."""


class SpecValidationError(SpimmwaveError, ValueError):
    """An experiment spec file is invalid; message carries the field path."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
