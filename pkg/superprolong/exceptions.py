"""Exception hierarchy for superprolong."""

from __future__ import annotations

from typing import Any


class SuperProlongError(Exception):
    """Generic workbench error."""

    pass


class ScalarError(SuperProlongError):
    """Invalid scalar or parse failure."""

    pass


class PoleError(ScalarError):
    """Rational function evaluated at a pole (or division by zero)."""

    pass


class LinearAlgebraError(SuperProlongError):
    """Singular or inconsistent linear system."""

    pass


class AlgebraError(SuperProlongError):
    """Malformed superalgebra data."""

    pass


class FormError(AlgebraError):
    """Invariant form is missing or not unique."""

    pass


class GradingError(SuperProlongError):
    """Invalid grading request."""

    pass


class NotFundamentalError(GradingError):
    """Negative part is not generated by its degree -1 part."""

    pass


class RootSystemError(SuperProlongError):
    """Invalid root-system operation."""

    pass


class ClassificationError(SuperProlongError):
    """Two classifications of parabolics disagree."""

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class ProlongationError(SuperProlongError):
    """Prolongation precondition failed."""

    pass


class WitnessError(SuperProlongError):
    """Invalid infinite-type witness request."""

    pass


class CohomologyError(SuperProlongError):
    """Cochain complex inconsistency."""

    pass


class FieldModelError(SuperProlongError):
    """Unknown coordinates or model mismatch for supervector fields."""

    pass


class ClosureError(SuperProlongError):
    """A span is not closed under the bracket."""

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class CorrespondenceError(SuperProlongError):
    """Structure constants do not match under a correspondence."""

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class ReductionError(SuperProlongError):
    """Representation-theoretic check failed."""

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class UsageError(SuperProlongError):
    """Invalid command-line options."""

    pass
