"""Exception hierarchy.

Every error carries the process exit code the command line maps it to:
2 for invalid input, 3 for histories that cannot be evaluated as asked,
4 when two computations that must agree do not.
"""


class QHistoryError(Exception):
    exit_code = 1
    kind = "error"


class ValidationError(QHistoryError, ValueError):
    exit_code = 2
    kind = "validation_error"


class EvaluationError(QHistoryError):
    exit_code = 3
    kind = "evaluation_error"


class InternalConsistencyError(QHistoryError):
    exit_code = 4
    kind = "internal_consistency_error"


# input validation

class ZeroVector(ValidationError):
    pass


class NormOutOfTolerance(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class DimensionOutOfRange(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class NotUnitary(ValidationError):
    pass


class UnknownEvent(ValidationError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class HistorySyntaxError(ValidationError):
    """Malformed history expression; ``position`` is a 0-based offset."""

    def __init__(self, message, position, text=""):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position
        self.text = text


class UnknownToken(HistorySyntaxError):
    pass


class SchemaError(ValidationError):
    """Structurally invalid scenario document. ``field`` is a dotted path."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class ScenarioValidationError(SchemaError):
    pass


class ScenarioFileNotFound(ValidationError, FileNotFoundError):
    pass


# evaluation

class ForbiddenHistory(EvaluationError):
    kind = "forbidden_history"


class AlternativeEndpoint(EvaluationError):
    kind = "alternative_endpoint"


class NonOrthogonalAlternatives(EvaluationError):
    kind = "non_orthogonal_alternatives"


class NestedSequenceInSlot(EvaluationError):
    kind = "nested_sequence_in_slot"


class NoAlternatives(EvaluationError):
    kind = "no_alternatives"
