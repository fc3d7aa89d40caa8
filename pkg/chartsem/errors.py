"""
Error types for chartsem.

Library code raises these; the pipeline runner turns them into
(success, message) results and the CLI into exit codes.
"""

from typing import Iterable, List, Optional


class ChartsemError(Exception):
    """Base class for every chartsem failure that is not plain I/O."""


class ValidationError(ChartsemError):
    """A record violates a type invariant."""

    def __init__(self, message: str, record_ids: Optional[Iterable[str]] = None):
        self.record_ids: List[str] = list(record_ids or [])
        if self.record_ids:
            message = f"{message} (records: {', '.join(self.record_ids)})"
        super().__init__(message)


class CorpusFormatError(ChartsemError):
    """A corpus file line could not be parsed."""

    def __init__(self, path: str, line_no: int, reason: str):
        self.path = path
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {reason}")


class DuplicateIdError(ChartsemError):
    """The same id appeared twice where ids must be unique."""

    def __init__(self, kind: str, record_id: str):
        self.record_id = record_id
        super().__init__(f"duplicate {kind} id: {record_id}")


class InsufficientDataError(ChartsemError):
    """Not enough data points / pairs for the requested computation."""


class DependencyError(ChartsemError):
    """A required upstream artifact (e.g. the visual insight) is missing."""


class DimensionMismatchError(ChartsemError):
    """Vectors of different dimensions were combined."""


class ServiceError(ChartsemError):
    """An external HTTP endpoint failed (network, status or payload)."""


class ConfigError(ChartsemError):
    """The configuration file or flags are invalid."""


class MissingArtifactError(ChartsemError):
    """A stage input file does not exist yet."""

    def __init__(self, path: str, hint: str = ""):
        self.path = path
        message = f"missing file: {path}"
        if hint:
            message += f" ({hint})"
        super().__init__(message)
