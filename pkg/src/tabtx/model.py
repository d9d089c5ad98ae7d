"""Core table and summary types.

Everything here is an immutable value object. Coordinates are 0-based
``(row, col)`` pairs both in memory and in the corpus file format.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Optional

Coord = tuple[int, int]


@dataclass(frozen=True)
class RawCell:
    """One source cell; ``(row, col)`` is the top-left anchor of its span."""

    row: int
    col: int
    rowspan: int = 1
    colspan: int = 1
    value: str = ""
    is_header: bool = False

    def __post_init__(self):
        if self.row < 0 or self.col < 0:
            raise ValueError(f"negative cell coordinate ({self.row}, {self.col})")
        if self.rowspan < 1 or self.colspan < 1:
            raise ValueError(
                f"span must be >= 1, got rowspan={self.rowspan} colspan={self.colspan}"
            )

    def covered(self):
        for r in range(self.row, self.row + self.rowspan):
            for c in range(self.col, self.col + self.colspan):
                yield (r, c)

    def to_dict(self) -> dict[str, Any]:
        return {
            "row": self.row,
            "col": self.col,
            "rowspan": self.rowspan,
            "colspan": self.colspan,
            "value": self.value,
            "is_header": self.is_header,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "RawCell":
        return cls(d["row"], d["col"], d["rowspan"], d["colspan"], d["value"], d["is_header"])


@dataclass(frozen=True)
class TableMetadata:
    document_title: str = ""
    table_title: str = ""
    publication_date: str = ""
    publishing_org: str = ""
    source_url: str = ""

    def to_dict(self) -> dict[str, str]:
        return {
            "document_title": self.document_title,
            "table_title": self.table_title,
            "publication_date": self.publication_date,
            "publishing_org": self.publishing_org,
            "source_url": self.source_url,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TableMetadata":
        return cls(**{k: d[k] for k in METADATA_KEYS})


METADATA_KEYS = (
    "document_title",
    "table_title",
    "publication_date",
    "publishing_org",
    "source_url",
)


@dataclass(frozen=True)
class TableDocument:
    id: str
    metadata: TableMetadata
    cells: tuple[RawCell, ...]
    highlighted_cells: tuple[Coord, ...]
    reference_summary: Optional[str] = None

    def __post_init__(self):
        # normalise list inputs so equality and hashing behave
        object.__setattr__(self, "cells", tuple(self.cells))
        object.__setattr__(
            self, "highlighted_cells", tuple((int(r), int(c)) for r, c in self.highlighted_cells)
        )

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "id": self.id,
            "metadata": self.metadata.to_dict(),
            "cells": [c.to_dict() for c in self.cells],
            "highlighted_cells": [list(rc) for rc in self.highlighted_cells],
        }
        if self.reference_summary is not None:
            d["reference_summary"] = self.reference_summary
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TableDocument":
        return cls(
            id=d["id"],
            metadata=TableMetadata.from_dict(d["metadata"]),
            cells=tuple(RawCell.from_dict(c) for c in d["cells"]),
            highlighted_cells=tuple(tuple(rc) for rc in d["highlighted_cells"]),
            reference_summary=d.get("reference_summary"),
        )


@dataclass(frozen=True)
class GridEntry:
    value: str
    is_header: bool
    origin: Coord
    is_padding: bool = False


PADDING_VALUE = ""


@dataclass(frozen=True)
class NormalizedGrid:
    n_rows: int
    n_cols: int
    entries: tuple[tuple[GridEntry, ...], ...]

    def __getitem__(self, rc: Coord) -> GridEntry:
        r, c = rc
        return self.entries[r][c]

    def __contains__(self, rc) -> bool:
        r, c = rc
        return 0 <= r < self.n_rows and 0 <= c < self.n_cols

    def coords(self):
        for r in range(self.n_rows):
            for c in range(self.n_cols):
                yield (r, c)

    def values(self) -> list[list[str]]:
        return [[e.value for e in row] for row in self.entries]


@dataclass(frozen=True)
class ContextHeader:
    """A header cell sharing a row or column with a highlighted cell."""

    coordinate: Coord
    value: str

    def to_dict(self) -> dict[str, Any]:
        return {"coordinate": list(self.coordinate), "value": self.value}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ContextHeader":
        return cls(tuple(d["coordinate"]), d["value"])


@dataclass(frozen=True)
class KeyValueRecord:
    key_chain: tuple[str, ...]
    value: str
    coordinate: Coord
    highlighted: bool = False
    context: tuple[ContextHeader, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "key_chain": list(self.key_chain),
            "value": self.value,
            "coordinate": list(self.coordinate),
            "highlighted": self.highlighted,
            "context": [h.to_dict() for h in self.context],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "KeyValueRecord":
        return cls(
            key_chain=tuple(d["key_chain"]),
            value=d["value"],
            coordinate=tuple(d["coordinate"]),
            highlighted=d["highlighted"],
            context=tuple(ContextHeader.from_dict(h) for h in d.get("context", ())),
        )

    def render(self) -> str:
        keys = " > ".join(self.key_chain) if self.key_chain else "(no header)"
        return f"{keys} -> {self.value}"


class CellType(str, enum.Enum):
    MONETARY = "Monetary"
    PERCENTAGE = "Percentage"
    PLAIN_NUMERIC = "PlainNumeric"
    CATEGORICAL = "Categorical"
    TEXTUAL = "Textual"

    @property
    def is_numeric(self) -> bool:
        return self in NUMERIC_TYPES


NUMERIC_TYPES = frozenset({CellType.MONETARY, CellType.PERCENTAGE, CellType.PLAIN_NUMERIC})


class AnalysisMethod(str, enum.Enum):
    ENUMERATION = "Enumeration"
    MAGNITUDE_COMPARISON = "MagnitudeComparison"
    TREND_ANALYSIS = "TrendAnalysis"


@dataclass(frozen=True)
class ThemePart:
    citation_expression: str
    title_phrase: str
    rendered: str

    def to_dict(self) -> dict[str, str]:
        return {
            "citation_expression": self.citation_expression,
            "title_phrase": self.title_phrase,
            "rendered": self.rendered,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ThemePart":
        return cls(d["citation_expression"], d["title_phrase"], d["rendered"])


EMPTY_THEME = ThemePart("", "", "")


@dataclass(frozen=True)
class TXSummary:
    theme: ThemePart
    explanation: str
    full_text: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "theme": self.theme.to_dict(),
            "explanation": self.explanation,
            "full_text": self.full_text,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TXSummary":
        return cls(ThemePart.from_dict(d["theme"]), d["explanation"], d["full_text"])


@dataclass(frozen=True)
class ScoreTriple:
    rouge1: float
    rougeL: float
    bleu: float

    @property
    def average(self) -> float:
        return (self.rouge1 + self.rougeL + self.bleu) / 3

    def to_dict(self) -> dict[str, float]:
        return {"rouge1": self.rouge1, "rougeL": self.rougeL, "bleu": self.bleu}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ScoreTriple":
        return cls(float(d["rouge1"]), float(d["rougeL"]), float(d["bleu"]))


@dataclass(frozen=True)
class Corpus:
    documents: tuple[TableDocument, ...] = field(default_factory=tuple)
    source_path: str = ""

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def by_id(self) -> dict[str, TableDocument]:
        return {d.id: d for d in self.documents}
