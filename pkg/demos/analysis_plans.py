"""
Cell types and analysis methods
===============================

How highlighted values are typed and which analysis the step-one prompt
is asked to carry out.
"""

from tabtx.analysis import classify_cell_type, describe_plan, parse_numeric, plan_for_records
from tabtx.model import KeyValueRecord

for value in ["12.5%", "61.301 trillion KRW", "61조 3,010억 원", "2,437", "12명", "Seoul",
              "Applications rose for the third year."]:
    cell_type = classify_cell_type(value)
    print(f"{value!r:42} {cell_type.value:13} {parse_numeric(value, cell_type)}")

# two monetary cells under consecutive year headers: a trend
print()
trend = plan_for_records([
    KeyValueRecord(("Net fiscal cost", "2019"), "51.866 trillion KRW", (1, 1), True),
    KeyValueRecord(("Net fiscal cost", "2020"), "61.301 trillion KRW", (1, 2), True),
])
print(describe_plan(trend, "en"))
print(describe_plan(trend, "ko"))

# same type, no time axis: sorted by size
print()
ranking = plan_for_records([
    KeyValueRecord(("Approval rate", office), rate, (i + 1, 1), True)
    for i, (office, rate) in enumerate([("Busan", "8.1%"), ("Seoul", "12.5%"), ("Incheon", "6.0%")])
])
print(describe_plan(ranking, "en"))

# mixed types fall back to listing the values
print()
print(describe_plan(plan_for_records([
    KeyValueRecord(("Program",), "Youth housing", (1, 0), True),
    KeyValueRecord(("Budget",), "$3.5 million", (1, 1), True),
]), "en"))
