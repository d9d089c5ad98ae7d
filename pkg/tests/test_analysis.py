from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tabtx.analysis import (
    AnalysisPlan,
    classify_cell_type,
    decide_method,
    describe_plan,
    format_delta,
    format_quantity,
    parse_numeric,
    parse_temporal,
    plan_for_records,
    select_analysis_method,
)
from tabtx.errors import NumericParseFailure
from tabtx.model import AnalysisMethod, CellType, KeyValueRecord
from tabtx.preprocess import prepare_document
from oracles import expected_method
from tablegen import all_multisets, synthetic_cells

T = CellType


@pytest.mark.parametrize("value, expected", [
    ("12.5%", T.PERCENTAGE),
    ("61.301 trillion KRW", T.MONETARY),
    ("2,437", T.PLAIN_NUMERIC),
    ("Seoul", T.CATEGORICAL),
    ("3.2%p", T.PERCENTAGE),
    ("45 퍼센트", T.PERCENTAGE),
    ("₩5,000", T.MONETARY),
    ("$3.5 million", T.MONETARY),
    ("61조 3,010억 원", T.MONETARY),
    ("1,200천원", T.MONETARY),
    ("12명", T.PLAIN_NUMERIC),
    ("pass", T.CATEGORICAL),
    ("", T.CATEGORICAL),
    ("The number of applicants rose again this year.", T.TEXTUAL),
    ("a label that is definitely longer than twenty characters", T.TEXTUAL),
])
def test_classify(value, expected):
    assert classify_cell_type(value) is expected


@settings(max_examples=200, deadline=None)
@given(n=st.integers(0, 10**9), dec=st.integers(0, 99),
       marker=st.sampled_from(["%", " %", "%p", " 퍼센트"]))
def test_percent_never_plain(n, dec, marker):
    v = f"{n:,}.{dec}{marker}"
    assert classify_cell_type(v) is T.PERCENTAGE


@settings(max_examples=200, deadline=None)
@given(n=st.integers(0, 10**9), form=st.sampled_from(["{} KRW", "{}원", "₩{}", "${}", "{} USD", "US${}"]))
def test_currency_never_plain(n, form):
    assert classify_cell_type(form.format(f"{n:,}")) is T.MONETARY


def test_parse_examples():
    assert parse_numeric("2,437", T.PLAIN_NUMERIC) == (Decimal(2437), None)
    value, unit = parse_numeric("9.435 trillion KRW", T.MONETARY)
    assert value == Decimal("9.435") * 10**12 and unit == "KRW"
    with pytest.raises(NumericParseFailure):
        parse_numeric("abc", T.PLAIN_NUMERIC)
    assert parse_numeric("Seoul", T.CATEGORICAL) is None
    assert parse_numeric("long text.", T.TEXTUAL) is None


@pytest.mark.parametrize("value, cell_type, number, unit", [
    ("61조 3,010억 원", T.MONETARY, 61_301_000_000_000, "KRW"),
    ("1억 2천만 원", T.MONETARY, 120_000_000, "KRW"),
    ("△3.2%p", T.PERCENTAGE, Decimal("-3.2"), "%p"),
    ("-1,163", T.PLAIN_NUMERIC, -1163, None),
    ("약 3조", T.PLAIN_NUMERIC, 3 * 10**12, None),
    ("3.5 million dollars", T.MONETARY, 3_500_000, "USD"),
    ("12명", T.PLAIN_NUMERIC, 12, "명"),
    ("1,200천원", T.MONETARY, 1_200_000, "KRW"),
])
def test_parse_units(value, cell_type, number, unit):
    assert parse_numeric(value, cell_type) == (Decimal(number), unit)


@settings(max_examples=300, deadline=None)
@given(k=st.integers(1, 10**9), places=st.integers(0, 3), sep=st.sampled_from(["", " "]))
def test_jo_folding_matches_digit_expansion(k, places, sep):
    n = Decimal(k).scaleb(-places)
    expanded = f"{int(n * 10**12):,}"
    assert parse_numeric(f"{n}{sep}조", T.PLAIN_NUMERIC)[0] == parse_numeric(expanded, T.PLAIN_NUMERIC)[0]
    assert parse_numeric(f"{n} trillion", T.PLAIN_NUMERIC)[0] == Decimal(expanded.replace(",", ""))


@pytest.mark.parametrize("header, expected", [
    ("2020", (2020, None)),
    ("2020년", (2020, None)),
    ("2020년 3월", (2020, 3)),
    ("Seoul", None),
    ("Births", None),
])
def test_parse_temporal(header, expected):
    assert parse_temporal(header) == expected


def test_quarters_and_halves_order():
    assert parse_temporal("2021 Q1") < parse_temporal("2021 Q3")
    assert parse_temporal("상반기") < parse_temporal("하반기")
    assert parse_temporal("First half") < parse_temporal("Second half")


# -- decision procedure ------------------------------------------------------------

def test_decision_table_exhaustive():
    checked = 0
    for types in all_multisets():
        for temporal in (True, False):
            want = expected_method([t.value for t in types], temporal)
            assert decide_method(types, temporal).value == want
            plan = select_analysis_method(synthetic_cells(types, temporal))
            assert plan.method.value == want, (types, temporal)
            checked += 1
    assert checked == 2 * (5 + 15 + 35)


def test_single_cell_is_enumeration():
    assert select_analysis_method(synthetic_cells([T.PLAIN_NUMERIC], True)).method is AnalysisMethod.ENUMERATION


def test_magnitude_orders_descending_stably():
    recs = [KeyValueRecord(("Item", f"R{i}"), v, (1, i), True) for i, v in enumerate(["5", "9", "5", "7"])]
    plan = plan_for_records(recs)
    assert plan.method is AnalysisMethod.MAGNITUDE_COMPARISON
    assert [c.record.coordinate for c in plan.ordered_cells] == [(1, 1), (1, 3), (1, 0), (1, 2)]
    assert plan.axis == "Item"


def test_trend_orders_by_time():
    recs = [KeyValueRecord(("x", y), v, (1, i), True) for i, (y, v) in enumerate([("2021", "3"), ("2019", "1")])]
    plan = plan_for_records(recs)
    assert plan.method is AnalysisMethod.TREND_ANALYSIS
    assert plan.periods == ("2019", "2021")
    assert plan.deltas() == [("2019", "2021", Decimal(2))]


def test_mixed_units_fall_back_to_enumeration():
    recs = [KeyValueRecord(("x", "2019"), "5 KRW", (1, 1), True),
            KeyValueRecord(("x", "2020"), "$5", (1, 2), True)]
    assert plan_for_records(recs).method is AnalysisMethod.ENUMERATION


def test_mixed_categorical_monetary():
    assert select_analysis_method(synthetic_cells([T.CATEGORICAL, T.MONETARY], False)).method \
        is AnalysisMethod.ENUMERATION


def test_fiscal_fixture_is_trend(fixture_docs):
    grid, records = prepare_document(fixture_docs["fiscal-cost"])
    plan = plan_for_records(records, grid)
    assert plan.method is AnalysisMethod.TREND_ANALYSIS
    assert [c.cell_type for c in plan.ordered_cells] == [T.MONETARY, T.MONETARY]
    assert plan.deltas()[0][2] == Decimal("9.435") * 10**12


def test_refugee_fixture_is_magnitude(fixture_docs):
    grid, records = prepare_document(fixture_docs["refugee-by-nationality"])
    assert plan_for_records(records, grid).method is AnalysisMethod.MAGNITUDE_COMPARISON


def test_temporal_axis_from_grid_when_no_context(fixture_docs):
    grid, records = prepare_document(fixture_docs["fiscal-cost"])
    bare = [KeyValueRecord((), r.value, r.coordinate, True) for r in records]
    assert plan_for_records(bare, grid).method is AnalysisMethod.TREND_ANALYSIS


def test_typed_cell_invariant():
    from tabtx.analysis import TypedCell
    rec = KeyValueRecord((), "5", (0, 0))
    with pytest.raises(ValueError):
        TypedCell(rec, T.PLAIN_NUMERIC)
    with pytest.raises(ValueError):
        TypedCell(rec, T.CATEGORICAL, Decimal(5))


def test_empty_cells_rejected():
    with pytest.raises(ValueError):
        select_analysis_method([])


@pytest.mark.parametrize("value, unit, locale, text", [
    (Decimal("61301000000000"), "KRW", "ko", "61조 3,010억 원"),
    (Decimal("61301000000000"), "KRW", "en", "61.301 trillion KRW"),
    (Decimal("2437"), None, "en", "2,437"),
    (Decimal("12.5"), "%", "en", "12.5%"),
])
def test_format_quantity(value, unit, locale, text):
    assert format_quantity(value, unit, locale) == text


def test_format_delta_percentage_points():
    assert format_delta(Decimal("-1.5"), "%", "en") == "-1.5%p"


def test_describe_plan_mentions_method(fixture_docs):
    grid, records = prepare_document(fixture_docs["fiscal-ko"])
    text = describe_plan(plan_for_records(records, grid), "ko")
    assert "TrendAnalysis" in text
    assert "+9조 4,350억 원" in text
    assert isinstance(plan_for_records(records, grid), AnalysisPlan)
