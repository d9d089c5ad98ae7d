"""Typing highlighted values and choosing how to describe them.

Before any text is generated each highlighted value is classified
(monetary, percentage, plain number, category, free text), numbers are
normalised into a single magnitude with Korean and English scale words
folded in, and the set of cells is assigned an analysis method:

* ``TrendAnalysis`` when all cells share one numeric type and a temporal
  header orders them totally,
* ``MagnitudeComparison`` when all cells share one numeric type otherwise,
* ``Enumeration`` for everything else (including single cells).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal, ROUND_HALF_UP
from typing import Iterable, Optional, Sequence

from .errors import NumericParseFailure
from .model import (
    NUMERIC_TYPES,
    AnalysisMethod,
    CellType,
    KeyValueRecord,
    NormalizedGrid,
)
from .preprocess import related_headers

# -- surface markers ------------------------------------------------------------

PERCENT_MARKERS = ("%", "％", "퍼센트", "percent")

_CURRENCY_PREFIX = re.compile(r"^(US\$|₩|\$|KRW|USD)\s*")
_CURRENCY_SUFFIX = {
    "원": "KRW",
    "krw": "KRW",
    "won": "KRW",
    "₩": "KRW",
    "달러": "USD",
    "usd": "USD",
    "dollar": "USD",
    "dollars": "USD",
    "$": "USD",
}
_PREFIX_UNITS = {"US$": "USD", "₩": "KRW", "$": "USD", "KRW": "KRW", "USD": "USD"}

_HEDGE = re.compile(r"^(?:약|총|about|approx\.?|approximately|~)\s*", re.IGNORECASE)
_SIGN = r"[-+−△▲▽▼]"
_NEGATIVE_SIGNS = {"-", "−", "△", "▽", "▼"}
_NUMBER = r"(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?|\.\d+"
_SCALE = r"[십백천]?[만억조]|[십백천]|thousand|million|billion|trillion"
_GROUP = re.compile(
    rf"\s*(?P<num>{_NUMBER})\s*(?P<scale>(?:{_SCALE})(?![A-Za-z]))?", re.IGNORECASE
)
_SIGN_RE = re.compile(rf"^({_SIGN})\s*")

_SMALL = {"십": 10, "백": 100, "천": 1000}
_BIG = {"만": 10**4, "억": 10**8, "조": 10**12}
_ENGLISH = {"thousand": 10**3, "million": 10**6, "billion": 10**9, "trillion": 10**12}

_SENTENCE_END = (".", "!", "?", "。")
CATEGORICAL_MAX_LEN = 20


def _scale_factor(word: Optional[str]) -> int:
    if not word:
        return 1
    w = word.lower()
    if w in _ENGLISH:
        return _ENGLISH[w]
    factor = 1
    for ch in word:
        factor *= _SMALL.get(ch, 1) * _BIG.get(ch, 1)
    return factor


@dataclass(frozen=True)
class _Scan:
    magnitude: Decimal
    prefix_unit: Optional[str]
    residual: str


def _scan_number(value: str) -> Optional[_Scan]:
    """Read a leading number (with scale words) from ``value``.

    Consecutive groups with strictly decreasing scale are summed, so
    ``"1억 2천만"`` reads as 120,000,000.
    """
    text = _HEDGE.sub("", value.strip())
    negative = False
    m = _SIGN_RE.match(text)
    if m:
        negative = m.group(1) in _NEGATIVE_SIGNS
        text = text[m.end():]
    prefix_unit = None
    m = _CURRENCY_PREFIX.match(text)
    if m:
        prefix_unit = _PREFIX_UNITS[m.group(1)]
        text = text[m.end():]
        m = _SIGN_RE.match(text)
        if m:
            negative = negative or m.group(1) in _NEGATIVE_SIGNS
            text = text[m.end():]

    total = Decimal(0)
    pos = 0
    last_scale = None
    found = False
    while True:
        m = _GROUP.match(text, pos)
        if not m:
            break
        scale = _scale_factor(m.group("scale"))
        if last_scale is not None and (last_scale == 1 or scale >= last_scale):
            break
        total += Decimal(m.group("num").replace(",", "")) * scale
        last_scale = scale
        pos = m.end()
        found = True
    if not found:
        return None
    return _Scan(-total if negative else total, prefix_unit, text[pos:].strip())


def _canonical_unit(scan: _Scan) -> Optional[str]:
    residual = scan.residual
    low = residual.lower()
    if low.startswith("%p") or low.startswith("％p"):
        return "%p"
    if any(m in low for m in PERCENT_MARKERS):
        return "%"
    if scan.prefix_unit:
        return scan.prefix_unit
    for token, unit in _CURRENCY_SUFFIX.items():
        if low.startswith(token):
            return unit
    return residual or None


def _has_percent(value: str) -> bool:
    low = value.lower()
    return any(m in low for m in PERCENT_MARKERS)


def _has_currency(scan: _Scan) -> bool:
    if scan.prefix_unit:
        return True
    low = scan.residual.lower()
    return any(low.startswith(token) for token in _CURRENCY_SUFFIX)


_UNIT_TOKEN = re.compile(r"^[^\d\s.!?,]{1,6}$")


def classify_cell_type(value: str) -> CellType:
    """Assign exactly one type; rules are tried in order, first match wins.

    1. percent marker next to a number -> Percentage
    2. currency marker next to a number -> Monetary
    3. a number, optionally followed by one short counter word -> PlainNumeric
    4. short text (<= 20 chars) not ending a sentence -> Categorical
    5. anything else -> Textual
    """
    scan = _scan_number(value)
    if scan is not None:
        if _has_percent(scan.residual):
            return CellType.PERCENTAGE
        if _has_currency(scan):
            return CellType.MONETARY
        if not scan.residual or _UNIT_TOKEN.match(scan.residual):
            return CellType.PLAIN_NUMERIC
    text = value.strip()
    if len(text) <= CATEGORICAL_MAX_LEN and not text.endswith(_SENTENCE_END):
        return CellType.CATEGORICAL
    return CellType.TEXTUAL


def parse_numeric(value: str, cell_type: CellType) -> Optional[tuple[Decimal, Optional[str]]]:
    """Return ``(magnitude, unit)`` for numeric cell types, None otherwise.

    Thousands separators are dropped and scale words (만/억/조, the
    small multipliers 십/백/천, thousand..trillion) are folded into the
    magnitude. ``unit`` is the canonical currency code, ``"%"``/``"%p"``,
    a counter word, or None.

    >>> parse_numeric("9.435 trillion KRW", CellType.MONETARY)
    (Decimal('9435000000000.000'), 'KRW')
    """
    if cell_type not in NUMERIC_TYPES:
        return None
    scan = _scan_number(value)
    if scan is None:
        raise NumericParseFailure(f"no number in {value!r}")
    return scan.magnitude, _canonical_unit(scan)


# -- typed cells and plans -----------------------------------------------------


@dataclass(frozen=True)
class TypedCell:
    record: KeyValueRecord
    cell_type: CellType
    numeric_value: Optional[Decimal] = None
    unit: Optional[str] = None

    def __post_init__(self):
        if (self.numeric_value is not None) != (self.cell_type in NUMERIC_TYPES):
            raise ValueError("numeric_value must be set exactly for numeric cell types")


def type_cell(record: KeyValueRecord) -> TypedCell:
    cell_type = classify_cell_type(record.value)
    parsed = parse_numeric(record.value, cell_type)
    if parsed is None:
        return TypedCell(record, cell_type)
    return TypedCell(record, cell_type, parsed[0], parsed[1])


@dataclass(frozen=True)
class AnalysisPlan:
    method: AnalysisMethod
    ordered_cells: tuple[TypedCell, ...]
    axis: Optional[str] = None
    periods: tuple[str, ...] = field(default=())

    def deltas(self) -> list[tuple[str, str, Decimal]]:
        """Consecutive changes along the time axis (trend plans only)."""
        if self.method is not AnalysisMethod.TREND_ANALYSIS:
            return []
        out = []
        cells = self.ordered_cells
        for i in range(1, len(cells)):
            out.append(
                (self.periods[i - 1], self.periods[i],
                 cells[i].numeric_value - cells[i - 1].numeric_value)
            )
        return out


def decide_method(types: Sequence[CellType], has_temporal_axis: bool) -> AnalysisMethod:
    """The decision procedure on cell types alone."""
    if len(types) < 2:
        return AnalysisMethod.ENUMERATION
    kinds = set(types)
    if len(kinds) == 1 and next(iter(kinds)) in NUMERIC_TYPES:
        if has_temporal_axis:
            return AnalysisMethod.TREND_ANALYSIS
        return AnalysisMethod.MAGNITUDE_COMPARISON
    return AnalysisMethod.ENUMERATION


# -- temporal headers -----------------------------------------------------------

_YEAR = r"(?:19|20|21)\d{2}"
_YEAR_ONLY = re.compile(rf"^(?:FY\s?|회계연도\s*)?({_YEAR})\s*(?:년도?|year|yr)?\.?$", re.I)
_YEAR_MONTH = re.compile(rf"^({_YEAR})\s*(?:[-./]|년)\s*(\d{{1,2}})\s*월?\.?$")
_QUARTER = re.compile(
    rf"(?:({_YEAR})\s*년?\s*)?(?:Q([1-4])|([1-4])\s*(?:분기|Q\b)|([1-4])(?:st|nd|rd|th)\s+quarter)",
    re.I,
)
_HALF = re.compile(
    rf"(?:({_YEAR})\s*년?\s*)?(상반기|하반기|first half|second half|H1|H2)\b", re.I
)
_FIRST_HALF = {"상반기", "first half", "h1"}


def parse_temporal(header: str) -> Optional[tuple[Optional[int], Optional[int]]]:
    """Parse a header into ``(year, month-of-period)``; None if not temporal.

    Quarters map to their first month, halves to month 1 or 7.
    """
    text = header.strip()
    m = _YEAR_MONTH.match(text)
    if m and 1 <= int(m.group(2)) <= 12:
        return int(m.group(1)), int(m.group(2))
    m = _YEAR_ONLY.match(text)
    if m:
        return int(m.group(1)), None
    m = _QUARTER.search(text)
    if m:
        q = int(m.group(2) or m.group(3) or m.group(4))
        return (int(m.group(1)) if m.group(1) else None), 3 * q - 2
    m = _HALF.search(text)
    if m:
        month = 1 if m.group(2).lower() in _FIRST_HALF else 7
        return (int(m.group(1)) if m.group(1) else None), month
    return None


def _temporal_key(headers: Iterable[str]) -> Optional[tuple[tuple[int, int], str]]:
    year = month = None
    labels = []
    for h in headers:
        parsed = parse_temporal(h)
        if parsed is None:
            continue
        y, mo = parsed
        used = False
        if y is not None and year is None:
            year, used = y, True
        if mo is not None and month is None:
            month, used = mo, True
        if used:
            labels.append(h.strip())
    if year is None and month is None:
        return None
    return (year or 0, month or 0), " ".join(labels)


def _cell_headers(cell: TypedCell, grid: Optional[NormalizedGrid]) -> list[str]:
    headers = list(cell.record.key_chain)
    context = cell.record.context
    if not context and grid is not None and cell.record.coordinate in grid:
        context = related_headers(grid, *cell.record.coordinate)
    headers += [h.value for h in context if h.value not in headers]
    return headers


def _common_headers(cells: Sequence[TypedCell]) -> list[str]:
    first = cells[0].record.key_chain
    return [h for h in first if all(h in c.record.key_chain for c in cells[1:])]


def select_analysis_method(
    cells: Sequence[TypedCell], grid: Optional[NormalizedGrid] = None
) -> AnalysisPlan:
    """Pick the analysis method and order the cells accordingly.

    ``grid`` is consulted for related headers when the records carry no
    attached context.
    """
    if not cells:
        raise ValueError("select_analysis_method needs at least one cell")
    table_order = sorted(cells, key=lambda c: c.record.coordinate)

    keys = [_temporal_key(_cell_headers(c, grid)) for c in table_order]
    temporal = all(k is not None for k in keys) and len({k[0] for k in keys}) == len(keys)

    units = {c.unit for c in table_order}
    method = decide_method([c.cell_type for c in table_order], temporal)
    if method is not AnalysisMethod.ENUMERATION and len(units) > 1:
        # same type, incompatible units (e.g. KRW vs USD)
        method = AnalysisMethod.ENUMERATION

    if method is AnalysisMethod.TREND_ANALYSIS:
        order = sorted(range(len(table_order)), key=lambda i: keys[i][0])
        ordered = tuple(table_order[i] for i in order)
        periods = tuple(keys[i][1] for i in order)
        return AnalysisPlan(method, ordered, " -> ".join(periods), periods)
    if method is AnalysisMethod.MAGNITUDE_COMPARISON:
        ordered = tuple(sorted(table_order, key=lambda c: -c.numeric_value))
        axis = " / ".join(_common_headers(ordered)) or None
        return AnalysisPlan(method, ordered, axis)
    return AnalysisPlan(method, tuple(table_order), None)


def plan_for_records(records: Sequence[KeyValueRecord], grid=None) -> AnalysisPlan:
    return select_analysis_method([type_cell(r) for r in records], grid)


# -- unit-consistent number rendering ------------------------------------------

_EN_SCALES = ((10**12, "trillion"), (10**9, "billion"), (10**6, "million"))
_KO_GROUPS = ((10**12, "조"), (10**8, "억"), (10**4, "만"))


def _trim(d: Decimal, places: int = 3) -> str:
    q = d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)
    text = f"{q:,f}"
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


def _format_korean(value: Decimal) -> str:
    sign = "-" if value < 0 else ""
    value = abs(value)
    whole = int(value)
    frac = value - whole
    parts = []
    for size, word in _KO_GROUPS:
        if whole >= size:
            parts.append(f"{whole // size:,}{word}")
            whole %= size
    if whole or frac or not parts:
        parts.append(_trim(Decimal(whole) + frac))
    return sign + " ".join(parts)


def format_quantity(value: Decimal, unit: Optional[str], locale: str = "en") -> str:
    """Render a normalised magnitude with the locale's scale conventions.

    >>> format_quantity(Decimal("61301000000000"), "KRW", "en")
    '61.301 trillion KRW'
    >>> format_quantity(Decimal("61301000000000"), "KRW", "ko")
    '61조 3,010억 원'
    """
    if unit in ("%", "%p"):
        return f"{_trim(value)}{unit}"
    if locale == "ko":
        number = _format_korean(value)
        suffix = {"KRW": " 원", "USD": " 달러"}.get(unit, unit or "")
        return number + suffix
    number = None
    for size, word in _EN_SCALES:
        if abs(value) >= size:
            number = f"{_trim(value / size)} {word}"
            break
    if number is None:
        number = _trim(value)
    if unit == "USD":
        return f"${number}" if not number.startswith("-") else f"-${number[1:]}"
    return f"{number} {unit}" if unit else number


def format_delta(delta: Decimal, unit: Optional[str], locale: str = "en") -> str:
    if unit == "%":
        unit = "%p"
    sign = "+" if delta > 0 else ""
    return sign + format_quantity(delta, unit, locale)


def describe_plan(plan: AnalysisPlan, locale: str = "en") -> str:
    """Text block describing a plan, embedded in the recognition prompt."""
    lines = [f"Method: {plan.method.value}"]
    if plan.axis:
        lines.append(f"Axis: {plan.axis}")
    lines.append("Highlighted values:")
    for i, cell in enumerate(plan.ordered_cells, start=1):
        keys = " > ".join(cell.record.key_chain) or "(no header)"
        line = f"{i}. {keys} = {cell.record.value} [{cell.cell_type.value}"
        if cell.numeric_value is not None:
            line += f"; normalized {format_quantity(cell.numeric_value, cell.unit, locale)}"
        lines.append(line + "]")
    deltas = plan.deltas()
    if deltas:
        unit = plan.ordered_cells[0].unit
        lines.append("Changes:")
        for start, end, d in deltas:
            lines.append(f"{start} -> {end}: {format_delta(d, unit, locale)}")
    return "\n".join(lines)
