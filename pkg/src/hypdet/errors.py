"""Error types shared across the package.

Every error carries a stable machine-readable ``code`` so the CLI can map
failures to exit codes and structured reports without parsing messages.
"""

from __future__ import annotations


class HypdetError(Exception):
    """Base class. ``code`` is a stable identifier, ``message`` is free text."""

    code = "ERROR"

    def __init__(self, message: str = ""):
        self.message = message
        super().__init__(message)

    def __str__(self) -> str:
        return f"{self.code}: {self.message}" if self.message else self.code


class UnknownConstantError(HypdetError):
    code = "UNKNOWN_CONSTANT"


class FreeSymbolError(HypdetError):
    code = "FREE_SYMBOL"


class RewriteCycleError(HypdetError):
    code = "REWRITE_CYCLE"


class UnknownSymbolError(HypdetError):
    code = "UNKNOWN_SYMBOL"


class DomainError(HypdetError):
    code = "DOMAIN"


class PoleError(HypdetError):
    code = "POLE"


class NonConvergedError(HypdetError):
    code = "NONCONVERGED"


class UnderflowError_(HypdetError):
    code = "UNDERFLOW"


class OverflowError_(HypdetError):
    code = "OVERFLOW"


class NearZeroError(HypdetError):
    code = "NEAR_ZERO"


class OutOfRangeError(HypdetError):
    code = "OUT_OF_RANGE"


class GridTooCoarseError(HypdetError):
    code = "GRID_TOO_COARSE"


class IncompleteWindowError(HypdetError):
    code = "INCOMPLETE_WINDOW"


class NotHyperbolicError(HypdetError):
    code = "NOT_HYPERBOLIC"


class InvalidSignatureError(HypdetError):
    code = "INVALID_SIGNATURE"


class DivergenceNotCancelledError(HypdetError):
    code = "DIVERGENCE_NOT_CANCELLED"


class InvalidDiscriminantError(HypdetError):
    code = "INVALID_DISCRIMINANT"


class NonPositiveArgError(HypdetError):
    code = "NONPOSITIVE_ARG"


class UnstableExtrapolationError(HypdetError):
    code = "UNSTABLE"


class CoefficientMismatchError(HypdetError):
    code = "COEFFICIENT_MISMATCH"


class MismatchError(HypdetError):
    code = "MISMATCH"


class FormsDisagreeError(HypdetError):
    code = "FORMS_DISAGREE"


class VolumeMismatchError(HypdetError):
    code = "VOLUME_MISMATCH"
