"""Exception hierarchy shared by the engine, the HTTP service, and the CLI."""


class CompareVizError(Exception):
    """Base class for all engine errors.

    Every error carries a short machine-readable ``code`` plus optional
    ``details`` so the HTTP service and CLI can surface a uniform envelope.
    """

    code = "internal_error"

    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class DatasetError(CompareVizError):
    """Malformed tabular input (bad row, empty file, duplicate columns...)."""

    code = "dataset_error"


class SchemaError(CompareVizError):
    """An operation referenced an attribute that does not exist or has the wrong kind."""

    code = "schema_error"


class NotAComparisonError(CompareVizError):
    """The utterance has no detectable comparison structure."""

    code = "not_a_comparison"


class UnsupportedComparisonError(CompareVizError):
    """Recognizably a comparison, but outside the supported shapes
    (cross-attribute comparisons, more than two reference groups)."""

    code = "unsupported_comparison"


class AmbiguityError(CompareVizError):
    """A phrase matched two or more schema attributes or cell values equally well."""

    code = "ambiguous_reference"

    def __init__(self, message: str, candidates: list | None = None):
        super().__init__(message, {"candidates": candidates or []})
        self.candidates = candidates or []


class ResolutionError(CompareVizError):
    """An implicit reference could not be mapped onto the schema."""

    code = "unresolvable_reference"


class EmptyResultError(CompareVizError):
    """A resolved filter selected no rows, so the chart would be empty."""

    code = "empty_result"
