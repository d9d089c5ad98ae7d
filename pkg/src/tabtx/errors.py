"""Exception types raised across the package."""

from __future__ import annotations


class TabTXError(Exception):
    """Base class for every error raised by tabtx."""


class ConfigError(TabTXError):
    pass


# -- ingest / table structure -------------------------------------------------


class IngestError(TabTXError):
    """A corpus record violates the document schema or its invariants."""


class MalformedRecord(IngestError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class DuplicateId(IngestError):
    def __init__(self, doc_id: str, line: int | None = None):
        self.doc_id = doc_id
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"duplicate document id {doc_id!r}{where}")


class SpanOverlap(IngestError):
    def __init__(self, coord: tuple[int, int], doc_id: str | None = None):
        self.coord = tuple(coord)
        self.doc_id = doc_id
        prefix = f"document {doc_id!r}: " if doc_id is not None else ""
        super().__init__(f"{prefix}cell spans overlap at {self.coord}")


class HighlightOutOfBounds(IngestError):
    def __init__(self, doc_id: str, coord: tuple[int, int]):
        self.doc_id = doc_id
        self.coord = tuple(coord)
        super().__init__(f"document {doc_id!r}: highlighted cell {self.coord} outside the table")


class EmptyResult(TabTXError):
    """No highlighted data cell survived preprocessing."""


# -- analysis / generation ------------------------------------------------------


class NumericParseFailure(TabTXError, ValueError):
    pass


class TemplateError(TabTXError):
    pass


class EmptyTitle(TabTXError, ValueError):
    pass


class EmptyCorpus(TabTXError):
    pass


class BackendError(TabTXError):
    """Failure while talking to a text-generation backend."""

    retryable = False


class BackendTimeout(BackendError):
    retryable = True


class RateLimited(BackendError):
    retryable = True


class Transport(BackendError):
    retryable = True


class EmptyCompletion(BackendError):
    pass
