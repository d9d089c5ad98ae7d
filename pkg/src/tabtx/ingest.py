"""Reading and writing line-delimited corpus and result files."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Iterable

from .errors import (
    DuplicateId,
    HighlightOutOfBounds,
    IngestError,
    MalformedRecord,
    SpanOverlap,
)
from .model import METADATA_KEYS, Corpus, TableDocument
from .preprocess import expand_merged_cells

logger = logging.getLogger(__name__)

_TOP_KEYS = {"id", "metadata", "cells", "highlighted_cells"}
_OPTIONAL_KEYS = {"reference_summary"}
_CELL_KEYS = ("row", "col", "rowspan", "colspan", "value", "is_header")


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _check_keys(obj: Any, required, optional, what: str) -> list[str]:
    if not isinstance(obj, dict):
        return [f"{what} must be an object"]
    problems = []
    missing = set(required) - obj.keys()
    extra = obj.keys() - set(required) - set(optional)
    if missing:
        problems.append(f"{what} missing keys {sorted(missing)}")
    if extra:
        problems.append(f"{what} has unknown keys {sorted(extra)}")
    return problems


def _schema_problem(obj: Any) -> str | None:
    """Describe the first schema violation in ``obj``, or return None."""
    problems = _check_keys(obj, _TOP_KEYS, _OPTIONAL_KEYS, "record")
    if problems:
        return problems[0]
    if not isinstance(obj["id"], str) or not obj["id"]:
        return "id must be a non-empty string"
    problems = _check_keys(obj["metadata"], METADATA_KEYS, (), "metadata")
    if problems:
        return problems[0]
    for k in METADATA_KEYS:
        if not isinstance(obj["metadata"][k], str):
            return f"metadata.{k} must be a string"
    if not isinstance(obj["cells"], list):
        return "cells must be a list"
    for i, cell in enumerate(obj["cells"]):
        problems = _check_keys(cell, _CELL_KEYS, (), f"cells[{i}]")
        if problems:
            return problems[0]
        for k in ("row", "col", "rowspan", "colspan"):
            if not _is_int(cell[k]):
                return f"cells[{i}].{k} must be an integer"
        if cell["row"] < 0 or cell["col"] < 0:
            return f"cells[{i}] has a negative coordinate"
        if cell["rowspan"] < 1 or cell["colspan"] < 1:
            return f"cells[{i}] span must be >= 1"
        if not isinstance(cell["value"], str):
            return f"cells[{i}].value must be a string"
        if not isinstance(cell["is_header"], bool):
            return f"cells[{i}].is_header must be a boolean"
    hl = obj["highlighted_cells"]
    if not isinstance(hl, list) or not hl:
        return "highlighted_cells must be a non-empty list"
    for i, rc in enumerate(hl):
        if not (isinstance(rc, list) and len(rc) == 2 and all(_is_int(x) for x in rc)):
            return f"highlighted_cells[{i}] must be a [row, col] integer pair"
    ref = obj.get("reference_summary")
    if ref is not None and not isinstance(ref, str):
        return "reference_summary must be a string"
    return None


def validate_document(doc: TableDocument) -> None:
    """Check the structural invariants that the schema alone cannot express.

    Raises:
        SpanOverlap, HighlightOutOfBounds
    """
    try:
        grid = expand_merged_cells(doc.cells)
    except SpanOverlap as exc:
        raise SpanOverlap(exc.coord, doc.id) from None
    for rc in doc.highlighted_cells:
        if rc not in grid:
            raise HighlightOutOfBounds(doc.id, rc)


def parse_record(line: str, lineno: int = 1) -> TableDocument:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(lineno, f"invalid JSON: {exc.msg}") from None
    problem = _schema_problem(obj)
    if problem:
        raise MalformedRecord(lineno, problem)
    doc = TableDocument.from_dict(obj)
    validate_document(doc)
    return doc


def load_corpus(path, strict: bool = True) -> Corpus:
    """Load a line-delimited corpus, validating every record.

    Blank lines are ignored. With ``strict=False`` invalid records are
    logged and dropped instead of raising.
    """
    path = Path(path)
    docs = []
    seen: dict[str, int] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                doc = parse_record(line, lineno)
                if doc.id in seen:
                    raise DuplicateId(doc.id, lineno)
            except IngestError as exc:
                if strict:
                    raise
                logger.warning("skipping invalid record at %s:%d: %s", path, lineno, exc)
                continue
            seen[doc.id] = lineno
            docs.append(doc)
    return Corpus(tuple(docs), str(path))


def dump_json_line(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=False) + "\n"


def write_lines(objs: Iterable[Any], path) -> None:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8") as fh:
            for obj in objs:
                fh.write(dump_json_line(obj))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def write_corpus(corpus: Corpus | Iterable[TableDocument], path) -> None:
    write_lines((d.to_dict() for d in corpus), path)


def write_results(records, path) -> None:
    """Write one line per GenerationRecord (see ``GenerationRecord.to_dict``)."""
    write_lines((r.to_dict() for r in records), path)


def read_lines(path) -> list[dict[str, Any]]:
    path = Path(path)
    out = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise MalformedRecord(lineno, f"invalid JSON: {exc.msg}") from None
    return out
