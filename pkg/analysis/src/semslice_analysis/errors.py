"""Failure modes for artifact consumption."""

from __future__ import annotations


class AnalysisError(Exception):
    """Base class for every error raised by this package."""


class MissingArtifact(AnalysisError):
    """A required artifact file does not exist."""

    def __init__(self, path):
        self.path = str(path)
        super().__init__(f"missing artifact: {self.path}")


class SchemaMismatch(AnalysisError):
    """An artifact file exists but does not match the documented layout."""

    def __init__(self, path, detail: str):
        self.path = str(path)
        self.detail = detail
        super().__init__(f"{self.path}: {detail}")


class EmptySeries(AnalysisError):
    """A series file carries a header but no data rows."""

    def __init__(self, path):
        self.path = str(path)
        super().__init__(f"no data rows in {self.path}")
