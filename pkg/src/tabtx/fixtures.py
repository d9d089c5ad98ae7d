"""Synthetic fixture corpus and scripted mock responses.

The refugee, fiscal-cost, exam-result and merged-year tables rebuild
published worked examples: the quoted sentence fragments and cell values
(2,437 / 147; 9.435 and 61.301 trillion KRW; exam number 10021 / pass;
a "2020" header merged across two columns) are the known parts. Every
other cell value, title and reference sentence is synthetic and marked
``# synthetic`` where it appears.

Run ``python -m tabtx.fixtures OUT_DIR`` to regenerate the bundled files.
"""

from __future__ import annotations

import json
import sys
from importlib import resources
from pathlib import Path

from .ingest import write_corpus
from .model import RawCell, TableDocument, TableMetadata

REFUGEE_SENTENCE = (
    "According to the refugee status by nationality, the total number of refugee "
    "applications is 2,437, and among them, only 147 have been approved, "
    "indicating a very low approval rate."
)
REFUGEE_THEME = "According to the refugee status by nationality,"
FISCAL_EXPLANATION = (
    "the net fiscal cost increased by 9.435 trillion KRW from the previous year, "
    "reaching a total of 61.301 trillion KRW."
)
FISCAL_THEME = "According to the net fiscal cost by year,"  # synthetic: the theme is not shown

WORKED_EXAMPLES = ("refugee-by-nationality", "fiscal-cost", "exam-results", "merged-year-header")


def _h(row, col, value, rowspan=1, colspan=1):
    return RawCell(row, col, rowspan, colspan, value, True)


def _d(row, col, value, rowspan=1, colspan=1):
    return RawCell(row, col, rowspan, colspan, value, False)


def _meta(title, doc_title="", org="Statistics Office", date="2021-06-30", url=""):
    # synthetic metadata except for the table titles taken from the worked examples
    return TableMetadata(doc_title or title, title, date, org, url or "https://example.org/tables")


def fixture_documents() -> list[TableDocument]:
    docs = []

    docs.append(TableDocument(
        id="refugee-by-nationality",
        metadata=_meta("refugee status by nationality", "Annual refugee statistics"),
        cells=(
            _h(0, 0, "Nationality"), _h(0, 1, "Applications"), _h(0, 2, "Approvals"),
            _h(1, 0, "Total"), _d(1, 1, "2,437"), _d(1, 2, "147"),
            _h(2, 0, "Country A"), _d(2, 1, "1,012"), _d(2, 2, "61"),  # synthetic
            _h(3, 0, "Country B"), _d(3, 1, "884"), _d(3, 2, "52"),  # synthetic
        ),
        highlighted_cells=((1, 1), (1, 2)),
        # synthetic reference
        reference_summary=(
            "According to the refugee status by nationality, only 147 of the 2,437 "
            "refugee applications were approved."
        ),
    ))

    docs.append(TableDocument(
        id="fiscal-cost",
        metadata=_meta("net fiscal cost by year", "Fiscal outlook report", "Ministry of Finance"),
        cells=(
            _h(0, 0, "Item"), _h(0, 1, "2019"), _h(0, 2, "2020"),
            _h(1, 0, "Net fiscal cost"),
            _d(1, 1, "51.866 trillion KRW"),  # synthetic: 61.301 - 9.435
            _d(1, 2, "61.301 trillion KRW"),
        ),
        highlighted_cells=((1, 1), (1, 2)),
        reference_summary=(  # synthetic
            "According to the net fiscal cost by year, the net fiscal cost rose by "
            "9.435 trillion KRW to 61.301 trillion KRW in 2020."
        ),
    ))

    docs.append(TableDocument(
        id="exam-results",
        metadata=_meta("written exam results", "Civil service exam notice", "Personnel Agency"),
        cells=(
            _h(0, 0, "Exam number"), _h(0, 1, "Result"),
            _d(1, 0, "10021"), _d(1, 1, "pass"),
            _d(2, 0, "10022"), _d(2, 1, "fail"),  # synthetic
        ),
        highlighted_cells=((1, 0), (1, 1)),
        reference_summary=(  # synthetic
            "According to the written exam results, the candidate with exam number 10021 passed."
        ),
    ))

    # "2020" spans the third and fourth columns (0-based 2 and 3)
    docs.append(TableDocument(
        id="merged-year-header",
        metadata=_meta("births by region and half-year", "Population trends"),
        cells=(
            _h(0, 0, "Region", rowspan=2), _h(0, 1, "Indicator", rowspan=2),
            _h(0, 2, "2020", colspan=2),
            _h(1, 2, "First half"), _h(1, 3, "Second half"),
            _h(2, 0, "Seoul"), _h(2, 1, "Births"),
            _d(2, 2, "23,110"), _d(2, 3, "21,947"),  # synthetic
            _h(3, 0, "Busan"), _h(3, 1, "Births"),
            _d(3, 2, "7,520"), _d(3, 3, "7,106"),  # synthetic
        ),
        highlighted_cells=((2, 2), (2, 3)),
        reference_summary=(  # synthetic
            "According to the births by region and half-year, births in Seoul fell from "
            "23,110 in the first half of 2020 to 21,947 in the second half."
        ),
    ))

    docs.append(TableDocument(
        id="refugee-ko",
        metadata=_meta("국적별 난민 현황", "난민 통계 연보", "출입국관리사무소"),
        cells=(
            _h(0, 0, "국적"), _h(0, 1, "신청"), _h(0, 2, "인정"),
            _h(1, 0, "합계"), _d(1, 1, "2,437건"), _d(1, 2, "147건"),
            _h(2, 0, "A국"), _d(2, 1, "1,012건"), _d(2, 2, "61건"),  # synthetic
        ),
        highlighted_cells=((1, 1), (1, 2)),
        reference_summary="국적별 난민 현황에 따르면 난민 신청 2,437건 중 147건만 인정되었다.",
    ))

    docs.append(TableDocument(
        id="fiscal-ko",
        metadata=_meta("연도별 순재정비용", "재정 전망 보고서", "기획재정부"),
        cells=(
            _h(0, 0, "구분"), _h(0, 1, "2019년"), _h(0, 2, "2020년"),
            _h(1, 0, "순재정비용"), _d(1, 1, "51조 8,660억 원"), _d(1, 2, "61조 3,010억 원"),
        ),
        highlighted_cells=((1, 1), (1, 2)),
        reference_summary=(
            "연도별 순재정비용에 따르면 순재정비용은 전년 대비 9조 4,350억 원 늘어 "
            "61조 3,010억 원에 이르렀다."
        ),
    ))

    # edge case: a lone unflagged cell becomes a header, leaving nothing to summarise
    docs.append(TableDocument(
        id="one-by-one",
        metadata=_meta("single value table"),
        cells=(_d(0, 0, "42"),),
        highlighted_cells=((0, 0),),
    ))

    docs.append(TableDocument(
        id="all-headers",
        metadata=_meta("header only table"),
        cells=(_h(0, 0, "A"), _h(0, 1, "B"), _h(1, 0, "C"), _h(1, 1, "D")),
        highlighted_cells=((1, 1),),
    ))

    # two header levels on both axes
    docs.append(TableDocument(
        id="deep-headers",
        metadata=_meta("employment by region, status and sex", "Labour survey"),
        cells=(
            _h(0, 0, "Category", rowspan=2, colspan=2),
            _h(0, 2, "2019", colspan=2), _h(0, 4, "2020", colspan=2),
            _h(1, 2, "Male"), _h(1, 3, "Female"), _h(1, 4, "Male"), _h(1, 5, "Female"),
            _h(2, 0, "Seoul", rowspan=2), _h(2, 1, "Employed"),
            _d(2, 2, "2,810"), _d(2, 3, "2,290"), _d(2, 4, "2,745"), _d(2, 5, "2,301"),
            _h(3, 1, "Unemployed"),
            _d(3, 2, "121"), _d(3, 3, "98"), _d(3, 4, "143"), _d(3, 5, "102"),
        ),
        highlighted_cells=((2, 2), (2, 4)),
        reference_summary=(
            "According to the employment by region, status and sex, employed men in Seoul "
            "decreased from 2,810 in 2019 to 2,745 in 2020."
        ),
    ))

    # ragged: the last row is one cell longer, so column 2 is padded elsewhere
    docs.append(TableDocument(
        id="ragged-rates",
        metadata=_meta("refugee approval rate by office"),
        cells=(
            _h(0, 0, "Office"), _h(0, 1, "Approval rate"),
            _h(1, 0, "Seoul"), _d(1, 1, "12.5%"),
            _h(2, 0, "Busan"), _d(2, 1, "8.1%"),
            _h(3, 0, "Incheon"), _d(3, 1, "6.0%"), _d(3, 2, "provisional"),
        ),
        highlighted_cells=((1, 1), (2, 1), (3, 1)),
        reference_summary=(
            "According to the refugee approval rate by office, Seoul had the highest rate "
            "at 12.5%, followed by Busan at 8.1% and Incheon at 6.0%."
        ),
    ))

    docs.append(TableDocument(
        id="mixed-program",
        metadata=_meta("youth programs and budgets", "Budget briefing", "Ministry of Youth"),
        cells=(
            _h(0, 0, "Program"), _h(0, 1, "Budget"),
            _d(1, 0, "Youth housing"), _d(1, 1, "$3.5 million"),
            _d(2, 0, "Job training"), _d(2, 1, "$1.2 million"),
        ),
        highlighted_cells=((1, 0), (1, 1)),
        reference_summary=(
            "According to the youth programs and budgets, the youth housing program "
            "receives $3.5 million."
        ),
    ))

    # no header flags anywhere: the first row and column are inferred as headers
    docs.append(TableDocument(
        id="inferred-headers",
        metadata=_meta("population of major cities"),
        cells=(
            _d(0, 0, "City"), _d(0, 1, "Population"),
            _d(1, 0, "Seoul"), _d(1, 1, "9,411,000"),
            _d(2, 0, "Busan"), _d(2, 1, "3,349,000"),
        ),
        highlighted_cells=((1, 1), (2, 1)),
        reference_summary=(
            "According to the population of major cities, Seoul has 9,411,000 residents, "
            "far more than Busan with 3,349,000."
        ),
    ))
    return docs


def mock_responses() -> dict[str, dict[str, str]]:
    """Scripted step-one and step-two answers keyed by document id."""
    return {
        "refugee-by-nationality": {
            "recognition": (
                "- Applications (Total) = 2,437: plain count of refugee applications\n"
                "- Approvals (Total) = 147: plain count of approved applications\n"
                "- Comparison: 147 of 2,437 applications were approved, a very low approval rate"
            ),
            "generation": REFUGEE_SENTENCE,
        },
        "fiscal-cost": {
            "recognition": (
                "- Net fiscal cost 2019 = 51.866 trillion KRW (monetary)\n"
                "- Net fiscal cost 2020 = 61.301 trillion KRW (monetary)\n"
                "- Trend: +9.435 trillion KRW from 2019 to 2020"
            ),
            "generation": f"{FISCAL_THEME} {FISCAL_EXPLANATION}",
        },
        "exam-results": {
            "recognition": (
                "- Exam number = 10021 (identifier)\n"
                "- Result = pass (category)\n"
                "- The exam with exam number 10021 has passed"
            ),
            "generation": (
                "According to the written exam results, the exam with exam number 10021 "
                "was passed."
            ),
        },
        "merged-year-header": {
            "recognition": (
                "- Seoul births, 2020 first half = 23,110\n"
                "- Seoul births, 2020 second half = 21,947\n"
                "- Trend: -1,163 between the halves"
            ),
            "generation": (
                "According to the births by region and half-year, births in Seoul decreased "
                "by 1,163 from 23,110 in the first half of 2020 to 21,947 in the second half."
            ),
        },
        "refugee-ko": {
            "recognition": "- 신청 합계 2,437건\n- 인정 합계 147건\n- 인정 비율이 매우 낮음",
            "generation": (
                "국적별 난민 현황에 따르면 전체 난민 신청 건수는 2,437건이며 "
                "이 중 147건만 인정되어 인정률이 매우 낮다."
            ),
        },
        "fiscal-ko": {
            "recognition": "- 2019년 51조 8,660억 원\n- 2020년 61조 3,010억 원\n- 증가폭 9조 4,350억 원",
            "generation": (
                "연도별 순재정비용에 따르면 순재정비용은 전년보다 9조 4,350억 원 증가하여 "
                "총 61조 3,010억 원에 이르렀다."
            ),
        },
        "deep-headers": {
            "recognition": "- Seoul employed male 2019 = 2,810\n- 2020 = 2,745\n- change -65",
            "generation": (
                "According to the employment by region, status and sex, the number of employed "
                "men in Seoul fell by 65 from 2,810 in 2019 to 2,745 in 2020."
            ),
        },
        "ragged-rates": {
            "recognition": "- Seoul 12.5%\n- Busan 8.1%\n- Incheon 6.0%\n- ranking Seoul > Busan > Incheon",
            "generation": (
                "According to the refugee approval rate by office, Seoul recorded the highest "
                "approval rate at 12.5%, ahead of Busan at 8.1% and Incheon at 6.0%."
            ),
        },
        "mixed-program": {
            "recognition": "- Program: Youth housing (category)\n- Budget: $3.5 million (monetary)",
            "generation": (
                "According to the youth programs and budgets, the youth housing program is "
                "funded with $3.5 million."
            ),
        },
        "inferred-headers": {
            "recognition": "- Seoul population 9,411,000\n- Busan population 3,349,000",
            "generation": (
                "According to the population of major cities, Seoul has 9,411,000 residents, "
                "about 2.8 times the 3,349,000 of Busan."
            ),
        },
    }


CORPUS_FILE = "fixtures.jsonl"
RESPONSES_FILE = "mock_responses.json"


def generate_fixture_corpus(path) -> list[TableDocument]:
    """Write the fixture corpus to ``path`` and return its documents."""
    docs = fixture_documents()
    write_corpus(docs, path)
    return docs


def write_fixture_files(directory) -> tuple[Path, Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    corpus = directory / CORPUS_FILE
    responses = directory / RESPONSES_FILE
    generate_fixture_corpus(corpus)
    responses.write_text(
        json.dumps(mock_responses(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    return corpus, responses


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("tabtx") / "data" / name))


if __name__ == "__main__":
    for p in write_fixture_files(sys.argv[1] if len(sys.argv) > 1 else bundled_path("")):
        print(p)
