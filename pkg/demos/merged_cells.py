"""
Merged cells, headers and related cells
=======================================

A two-level header where "2020" spans two columns, flattened into
header-chain records for the highlighted cells.
"""

from tabtx.model import RawCell
from tabtx.preprocess import expand_merged_cells, filter_related, infer_headers, to_key_value_records

# "2020" is anchored at column 2 and spans columns 2 and 3
cells = [
    RawCell(0, 0, 2, 1, "Region", True),
    RawCell(0, 1, 1, 1, "2019", True),
    RawCell(0, 2, 1, 2, "2020", True),
    RawCell(1, 1, 1, 1, "Total", True),
    RawCell(1, 2, 1, 1, "First half", True),
    RawCell(1, 3, 1, 1, "Second half", True),
    RawCell(2, 0, 1, 1, "Seoul", True),
    RawCell(2, 1, 1, 1, "46,100"),
    RawCell(2, 2, 1, 1, "23,110"),
    RawCell(2, 3, 1, 1, "21,947"),
]

grid = infer_headers(expand_merged_cells(cells))
for row in grid.values():
    print(" | ".join(f"{v:>11}" for v in row))

# the replicated entries share one origin, so "2020" shows up once per chain
print()
highlights = [(2, 2), (2, 3)]
records = to_key_value_records(grid, highlights)
for rec in filter_related(records, grid, highlights):
    print(rec.render())
    print("   related:", ", ".join(f"{h.value}@{h.coordinate}" for h in rec.context))
