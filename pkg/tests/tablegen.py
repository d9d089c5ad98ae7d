"""Random table layouts and typed-cell sets for property tests."""

from __future__ import annotations

import itertools
import random

from tabtx.analysis import type_cell
from tabtx.model import CellType, KeyValueRecord, RawCell, TableDocument, TableMetadata

WORDS = ["Seoul", "Busan", "2019", "2020", "Total", "rate", "12.5%", "1,204", "pass", "", "won"]


def random_layout(rng: random.Random, max_rows=8, max_cols=8, hole_rate=0.1, header_rate=0.3):
    """Non-overlapping spans on an at most max_rows x max_cols board, in shuffled order."""
    n_rows, n_cols = rng.randint(1, max_rows), rng.randint(1, max_cols)
    taken = set()
    cells = []
    for r in range(n_rows):
        for c in range(n_cols):
            if (r, c) in taken or rng.random() < hole_rate:
                continue
            max_rs = 1
            while r + max_rs < n_rows and (r + max_rs, c) not in taken and max_rs < 3:
                max_rs += 1
            rs = rng.randint(1, max_rs)
            cs = 1
            while (c + cs < n_cols and cs < 3
                   and all((rr, c + cs) not in taken for rr in range(r, r + rs))):
                cs += 1
            cs = rng.randint(1, cs)
            for rr in range(r, r + rs):
                for cc in range(c, c + cs):
                    taken.add((rr, cc))
            cells.append(RawCell(r, c, rs, cs, rng.choice(WORDS), rng.random() < header_rate))
    if not cells:
        cells.append(RawCell(0, 0, 1, 1, "x", False))
    rng.shuffle(cells)
    return cells


def overlapping_layout(rng: random.Random, **kw):
    """A valid layout plus one extra cell that lands on an already covered coordinate."""
    cells = random_layout(rng, **kw)
    victim = rng.choice(cells)
    r = rng.randint(victim.row, victim.row + victim.rowspan - 1)
    c = rng.randint(victim.col, victim.col + victim.colspan - 1)
    r0, c0 = rng.randint(0, r), rng.randint(0, c)
    extra = RawCell(r0, c0, r - r0 + 1, c - c0 + 1, "dup", False)
    return cells + [extra]


def covered(cells):
    return {rc for cell in cells for rc in cell.covered()}


def random_document(rng: random.Random, doc_id="doc", **kw) -> TableDocument:
    cells = random_layout(rng, **kw)
    cov = sorted(covered(cells))
    k = rng.randint(1, min(3, len(cov)))
    highlights = tuple(rng.sample(cov, k))
    meta = TableMetadata("doc", "random table", "2024-01-01", "org", "https://example.org")
    return TableDocument(doc_id, meta, tuple(cells), highlights, rng.choice([None, "a ref."]))


SAMPLE = {
    CellType.MONETARY: "1,000 KRW",
    CellType.PERCENTAGE: "12.5%",
    CellType.PLAIN_NUMERIC: "2,437",
    CellType.CATEGORICAL: "Seoul",
    CellType.TEXTUAL: "This is a long explanatory sentence.",
}


def synthetic_cells(types, temporal):
    cells = []
    for i, t in enumerate(types):
        axis = str(2015 + i) if temporal else f"Region {i}"
        rec = KeyValueRecord(("Item", axis), SAMPLE[t], (1, i + 1), True)
        cells.append(type_cell(rec))
    return cells


def all_multisets(max_size=3):
    for size in range(1, max_size + 1):
        yield from itertools.combinations_with_replacement(list(CellType), size)
