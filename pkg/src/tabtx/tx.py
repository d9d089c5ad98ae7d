"""Theme-Explanation sentence structure: compose, parse, validate.

A summary sentence opens with a *theme part*, an adverbial phrase that
cites the table title ("According to <title>," / "<title>에 따르면"),
followed by an *explanation part* carrying the actual analysis.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from typing import Optional

from .errors import EmptyTitle
from .model import EMPTY_THEME, ThemePart, TXSummary


@dataclass(frozen=True)
class LocaleRules:
    name: str
    markers: tuple[str, ...]
    # "prefix": marker precedes the title (English); "suffix": follows it (Korean)
    position: str
    delimiter: str


LOCALES = {
    "en": LocaleRules("en", ("According to", "Based on"), "prefix", ","),
    "ko": LocaleRules("ko", ("에 따르면", "에 의하면"), "suffix", ""),
}

_HANGUL = re.compile(r"[가-힣ᄀ-ᇿ㄰-㆏]")


def has_hangul(text: str) -> bool:
    return bool(_HANGUL.search(text or ""))


def resolve_locale(locale: Optional[str], *texts: str) -> str:
    """``"auto"``/None picks Korean when any of ``texts`` contains Hangul."""
    if locale in (None, "auto"):
        return "ko" if any(has_hangul(t) for t in texts) else "en"
    if locale not in LOCALES:
        raise ValueError(f"unknown locale {locale!r}; expected one of {sorted(LOCALES)}")
    return locale


def compose_theme_part(table_title: str, locale: str = "en") -> ThemePart:
    title = (table_title or "").strip()
    if not title:
        raise EmptyTitle("table title is empty; the theme part cannot be composed")
    rules = LOCALES[resolve_locale(locale, title)]
    marker = rules.markers[0]
    if rules.position == "prefix":
        rendered = f"{marker} {title}{rules.delimiter}"
    else:
        rendered = f"{title}{marker}{rules.delimiter}"
    return ThemePart(marker, title, rendered)


def compose_summary(table_title: str, explanation: str, locale: str = "en") -> str:
    return f"{compose_theme_part(table_title, locale).rendered} {explanation.strip()}"


def _find_marker(text: str, rules: LocaleRules) -> Optional[tuple[int, int]]:
    best = None
    for marker in rules.markers:
        m = re.search(re.escape(marker), text, re.IGNORECASE)
        if m and (best is None or m.start() < best[0]):
            best = (m.start(), m.end())
    return best


def parse_tx_summary(text: str, table_title: str = "", locale: Optional[str] = "en") -> TXSummary:
    """Split ``text`` into theme and explanation at the earliest citation marker.

    Never raises. Without a marker the theme is empty and the whole text
    becomes the explanation; validation then reports the failure. When
    the text opens with exactly the composed theme for ``table_title``,
    that split is used even if the title itself contains a comma.
    """
    full = (text or "").strip()
    title = (table_title or "").strip()
    rules = LOCALES[resolve_locale(locale, full, title)]

    if title:
        composed = compose_theme_part(title, rules.name)
        if full.startswith(composed.rendered):
            return _split(full, len(composed.rendered), composed.citation_expression, title)

    found = _find_marker(full, rules)
    if found is None:
        return TXSummary(EMPTY_THEME, full, full)
    start, end = found
    marker = full[start:end]

    if rules.position == "prefix":
        # a title containing the delimiter must not end the theme early
        search_from = end
        hit = re.compile(re.escape(title), re.IGNORECASE).search(full, end) if title else None
        if hit:
            search_from = hit.end()
        comma = full.find(rules.delimiter, search_from)
        if comma >= 0:
            cut = comma + len(rules.delimiter)
            return _split(full, cut, marker, full[end:comma].strip())
        if hit:
            return _split(full, search_from, marker, full[end:search_from].strip())
        return _split(full, end, marker, "")

    # suffix marker: the theme is everything up to it, plus a trailing comma
    cut = end
    if full[cut:cut + 1] == ",":
        cut += 1
    return _split(full, cut, marker, full[:start].strip())


def _split(full: str, cut: int, marker: str, title_phrase: str) -> TXSummary:
    theme = ThemePart(marker, title_phrase, full[:cut])
    return TXSummary(theme, full[cut:].strip(), full)


# -- validation -----------------------------------------------------------------

# Particles that may trail a Korean noun phrase: topic, subject, object,
# genitive, and the common adverbial ones.
KOREAN_PARTICLES = (
    "에서는", "에서", "으로는", "으로", "로는", "에는", "에게",
    "은", "는", "이", "가", "을", "를", "의", "에", "로", "과", "와", "도",
)

CHECKS = (
    "has_citation_expression",
    "theme_contains_title_phrase",
    "theme_is_prefix",
    "explanation_nonempty",
    "single_sentence",
)

# a terminator is sentence punctuation not sitting between two digits ("61.301")
_TERMINATOR = re.compile(r"[.!?。](?!\d)")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class TXValidationReport:
    valid: bool
    checks: tuple[CheckResult, ...]

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks
            ],
        }


def normalize_phrase(text: str, strip_particles: bool = False) -> str:
    text = unicodedata.normalize("NFC", text).casefold()
    text = re.sub(r"\s+", " ", text).strip().strip(",.").strip()
    if strip_particles and has_hangul(text):
        for p in KOREAN_PARTICLES:
            if text.endswith(p) and len(text) > len(p):
                text = text[: -len(p)].rstrip()
                break
    return text


def count_terminators(text: str) -> int:
    return len(_TERMINATOR.findall(text))


def validate_tx(
    summary: TXSummary, table_title: str, locale: Optional[str] = None
) -> TXValidationReport:
    rules = LOCALES[resolve_locale(locale, summary.full_text, table_title)]
    theme = summary.theme
    checks = []

    has_marker = bool(theme.rendered.strip()) and bool(theme.citation_expression)
    checks.append(CheckResult(
        "has_citation_expression", has_marker,
        theme.citation_expression if has_marker else "no citation expression found",
    ))

    title_norm = normalize_phrase(table_title, strip_particles=True)
    theme_norm = normalize_phrase(theme.rendered)
    contains = bool(title_norm) and title_norm in theme_norm
    checks.append(CheckResult(
        "theme_contains_title_phrase", contains,
        "" if contains else f"theme {theme.rendered!r} does not cite title {table_title!r}",
    ))

    rendered = theme.rendered
    marker_cf = theme.citation_expression.casefold()
    if not has_marker:
        prefix_ok = False
    elif rules.position == "prefix":
        prefix_ok = summary.full_text.startswith(rendered) and rendered.casefold().startswith(marker_cf)
    else:
        prefix_ok = summary.full_text.startswith(rendered) and rendered.rstrip(",").casefold().endswith(marker_cf)
    checks.append(CheckResult(
        "theme_is_prefix", prefix_ok,
        "" if prefix_ok else "theme is not the sentence-initial phrase",
    ))

    expl_ok = bool(summary.explanation.strip())
    checks.append(CheckResult("explanation_nonempty", expl_ok, "" if expl_ok else "empty explanation"))

    n = count_terminators(summary.full_text)
    checks.append(CheckResult("single_sentence", n == 1, f"{n} sentence terminator(s)"))

    checks = tuple(checks)
    return TXValidationReport(all(c.passed for c in checks), checks)
