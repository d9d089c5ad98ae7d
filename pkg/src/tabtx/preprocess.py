"""Table normalisation ahead of prompting.

The steps, in pipeline order:

1. :func:`expand_merged_cells` replicates each merged cell across its
   rowspan/colspan range so every coordinate knows its value.
2. :func:`infer_headers` falls back to "first row and first column are
   headers" when the source carries no header flags at all.
3. :func:`to_key_value_records` flattens every data cell into a
   ``header chain -> value`` record.
4. :func:`filter_related` keeps only the highlighted records and attaches
   the header cells sharing their row or column.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Iterable, Sequence

from .errors import EmptyResult, SpanOverlap
from .model import (
    PADDING_VALUE,
    ContextHeader,
    Coord,
    GridEntry,
    KeyValueRecord,
    NormalizedGrid,
    RawCell,
    TableDocument,
)


def expand_merged_cells(cells: Iterable[RawCell]) -> NormalizedGrid:
    """Build a dense grid, stamping each cell's value over its whole span.

    Coordinates no cell covers become padding entries.

    Raises:
        SpanOverlap: two spans claim the same coordinate.
    """
    cells = list(cells)
    if not cells:
        return NormalizedGrid(0, 0, ())
    n_rows = max(c.row + c.rowspan for c in cells)
    n_cols = max(c.col + c.colspan for c in cells)

    slots: list[list[GridEntry | None]] = [[None] * n_cols for _ in range(n_rows)]
    for cell in cells:
        entry = GridEntry(cell.value, cell.is_header, (cell.row, cell.col))
        for r in range(cell.row, cell.row + cell.rowspan):
            row = slots[r]
            for c in range(cell.col, cell.col + cell.colspan):
                if row[c] is not None:
                    raise SpanOverlap((r, c))
                row[c] = entry

    entries = tuple(
        tuple(
            e if e is not None else GridEntry(PADDING_VALUE, False, (r, c), is_padding=True)
            for c, e in enumerate(row)
        )
        for r, row in enumerate(slots)
    )
    return NormalizedGrid(n_rows, n_cols, entries)


def infer_headers(grid: NormalizedGrid) -> NormalizedGrid:
    """Mark the first row and column as headers when no header flag exists.

    Merged cells anchored in row 0 or column 0 are marked over their whole
    span so a replicated cell never ends up half header, half data.
    """
    flat = [e for row in grid.entries for e in row]
    if any(e.is_header for e in flat):
        return grid
    entries = tuple(
        tuple(
            replace(e, is_header=True)
            if not e.is_padding and (e.origin[0] == 0 or e.origin[1] == 0)
            else e
            for e in row
        )
        for row in grid.entries
    )
    return NormalizedGrid(grid.n_rows, grid.n_cols, entries)


def _header_chain(entries: Sequence[GridEntry]) -> list[str]:
    seen = set()
    chain = []
    for e in entries:
        if not e.is_header or e.is_padding or not e.value.strip():
            continue
        if e.origin in seen:
            continue
        seen.add(e.origin)
        chain.append(e.value)
    return chain


def key_chain_for(grid: NormalizedGrid, r: int, c: int) -> tuple[str, ...]:
    """Headers left of ``(r, c)`` in its row, then headers above it in its column."""
    row_headers = _header_chain(grid.entries[r][:c])
    col_headers = _header_chain(grid.entries[i][c] for i in range(r))
    return tuple(row_headers + col_headers)


def to_key_value_records(
    grid: NormalizedGrid, highlights: Iterable[Coord] = ()
) -> list[KeyValueRecord]:
    """Flatten every non-empty data cell of ``grid`` into a record, row-major."""
    marked = {tuple(h) for h in highlights}
    records = []
    for r in range(grid.n_rows):
        for c in range(grid.n_cols):
            e = grid.entries[r][c]
            if e.is_header or e.is_padding or not e.value.strip():
                continue
            records.append(
                KeyValueRecord(
                    key_chain=key_chain_for(grid, r, c),
                    value=e.value,
                    coordinate=(r, c),
                    highlighted=(r, c) in marked,
                )
            )
    return records


def related_headers(grid: NormalizedGrid, r: int, c: int) -> tuple[ContextHeader, ...]:
    """Every header sharing row ``r`` or column ``c``, one per merged origin.

    Row headers come first (left to right), then column headers (top down).
    """
    seen = set()
    out = []
    candidates = [grid.entries[r][j] for j in range(grid.n_cols)]
    candidates += [grid.entries[i][c] for i in range(grid.n_rows)]
    for e in candidates:
        if e.is_header and not e.is_padding and e.origin not in seen:
            seen.add(e.origin)
            out.append(ContextHeader(e.origin, e.value))
    return tuple(out)


def filter_related(
    records: Sequence[KeyValueRecord], grid: NormalizedGrid, highlights: Iterable[Coord]
) -> list[KeyValueRecord]:
    """Keep the highlighted records, each carrying its related header cells.

    Raises:
        EmptyResult: no highlighted coordinate holds a data record.
    """
    marked = {tuple(h) for h in highlights}
    kept = [
        replace(rec, highlighted=True, context=related_headers(grid, *rec.coordinate))
        for rec in records
        if rec.coordinate in marked
    ]
    if not kept:
        raise EmptyResult(f"none of the highlighted cells {sorted(marked)} is a data cell")
    return kept


def prepare_document(doc: TableDocument) -> tuple[NormalizedGrid, list[KeyValueRecord]]:
    """Run the full preprocessing chain for one document."""
    grid = infer_headers(expand_merged_cells(doc.cells))
    records = to_key_value_records(grid, doc.highlighted_cells)
    try:
        return grid, filter_related(records, grid, doc.highlighted_cells)
    except EmptyResult as exc:
        raise EmptyResult(f"document {doc.id!r}: {exc}") from None
