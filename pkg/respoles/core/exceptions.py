from typing import Any, Dict


class RespolesError(Exception):
    """Base class for every typed failure raised by the library.

    ``exit_code`` is what the command line front end returns when the error
    escapes a command: 2 for invalid input, 3 for numerical failures.
    """

    exit_code: int = 3

    def __init__(self, detail: str, **context: Any):
        super().__init__(detail)
        self.detail = detail
        self.context: Dict[str, Any] = context

    @property
    def name(self) -> str:
        return type(self).__name__.removesuffix("Error")

    def __str__(self) -> str:
        if not self.context:
            return self.detail
        extra = ", ".join(f"{key}={value!r}" for key, value in self.context.items())
        return f"{self.detail} ({extra})"


class InvalidParameterError(RespolesError):
    exit_code = 2


class BranchDomainError(RespolesError):
    pass


class NoConvergenceError(RespolesError):
    pass


class ExponentOverflowError(RespolesError):
    """An exponential would leave the float64 range."""

    def __init__(self, detail: str, exponent: float, **context: Any):
        super().__init__(detail, exponent=exponent, **context)
        self.exponent = exponent

    @property
    def name(self) -> str:
        return "Overflow"


class OnAxisError(RespolesError):
    pass


class QuadratureError(RespolesError):
    @property
    def name(self) -> str:
        return "QuadratureFailure"


class ZeroOnBoundaryError(RespolesError):
    pass


class NonIntegerWindingError(RespolesError):
    pass


class DerivativeVanishesError(RespolesError):
    pass


class SubdivisionLimitError(RespolesError):
    pass


class BetaZeroError(RespolesError):
    pass


class StepMismatchError(RespolesError):
    pass


class InstabilityError(RespolesError):
    pass


class WindowEmptyError(RespolesError):
    pass


class SignalUnderflowError(RespolesError):
    pass


def require(condition: bool, detail: str, **context: Any) -> None:
    """Raise ``InvalidParameterError`` unless ``condition`` holds."""
    if not condition:
        raise InvalidParameterError(detail, **context)
