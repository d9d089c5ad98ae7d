"""Two-step prompt construction.

Step one (recognition) asks the model to type and organise the
highlighted data; step two (generation) asks, under a news-reporter
persona, for a single theme-explanation sentence. Templates are plain
text files named ``<step>.<locale>.txt`` with ``{placeholder}`` fields.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .analysis import AnalysisPlan, describe_plan
from .errors import ConfigError, TemplateError
from .model import KeyValueRecord, TableMetadata
from .tx import LOCALES, compose_theme_part

KNOWN_PLACEHOLDERS = frozenset({
    "table_title", "records", "analysis_plan", "step1_output", "glossary",
    "document_title", "publication_date", "publishing_org", "source_url",
    "context", "method", "persona", "theme_instruction", "theme_part",
    "failed_checks", "previous_output",
})
STEPS = ("recognition", "generation", "persona", "theme_instruction", "correction")

_PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    locale: str
    body: str

    def __post_init__(self):
        unknown = set(self.placeholders()) - KNOWN_PLACEHOLDERS
        if unknown:
            raise TemplateError(f"template {self.name!r} uses unknown placeholders {sorted(unknown)}")

    def placeholders(self) -> list[str]:
        return _PLACEHOLDER.findall(self.body)

    def render(self, context: Mapping[str, str]) -> str:
        """Substitute placeholders in a single pass (values are not re-expanded)."""
        if not self.body.strip():
            raise TemplateError(f"template {self.name!r} is empty")
        missing = [p for p in self.placeholders() if p not in context]
        if missing:
            raise TemplateError(f"template {self.name!r}: unresolved placeholders {missing}")
        return _PLACEHOLDER.sub(lambda m: str(context[m.group(1)]), self.body)


@dataclass(frozen=True)
class TemplateSet:
    locale: str
    recognition: PromptTemplate
    generation: PromptTemplate
    persona: PromptTemplate
    theme_instruction: PromptTemplate
    correction: PromptTemplate


def _read_template(step: str, locale: str, directory: Optional[Path]) -> str:
    filename = f"{step}.{locale}.txt"
    if directory is not None and (directory / filename).is_file():
        return (directory / filename).read_text(encoding="utf-8")
    bundled = resources.files("tabtx") / "templates" / filename
    if not bundled.is_file():
        raise ConfigError(f"no template {filename!r} for locale {locale!r}")
    return bundled.read_text(encoding="utf-8")


def load_templates(locale: str = "en", directory=None) -> TemplateSet:
    """Load the template set for ``locale``; files in ``directory`` win over bundled ones."""
    if locale not in LOCALES:
        raise ConfigError(f"unknown locale {locale!r}")
    directory = Path(directory) if directory else None
    parts = {
        step: PromptTemplate(step, locale, _read_template(step, locale, directory))
        for step in STEPS
    }
    return TemplateSet(locale=locale, **parts)


def load_glossary(path) -> dict[str, str]:
    """Read a JSON object mapping administrative terms to plain explanations."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read glossary {path}: {exc}") from None
    if not isinstance(data, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in data.items()
    ):
        raise ConfigError(f"glossary {path} must map strings to strings")
    return data


_GLOSSARY_HEADING = {"en": "Glossary of terms:", "ko": "용어 설명:"}


def render_glossary(glossary: Optional[Mapping[str, str]], locale: str) -> str:
    if not glossary:
        return ""
    lines = [f"- {term}: {gloss}" for term, gloss in sorted(glossary.items())]
    return "\n" + _GLOSSARY_HEADING[locale] + "\n" + "\n".join(lines) + "\n"


def render_records(records: Sequence[KeyValueRecord]) -> str:
    return "\n".join(f"- {r.render()}" for r in records)


def render_context(records: Sequence[KeyValueRecord]) -> str:
    lines = []
    for r in records:
        heads = ", ".join(h.value for h in r.context) or "-"
        lines.append(f"- {r.value} {list(r.coordinate)}: {heads}")
    return "\n".join(lines)


def _metadata_fields(metadata: TableMetadata) -> dict[str, str]:
    return metadata.to_dict()


def build_recognition_prompt(
    records: Sequence[KeyValueRecord],
    plan: AnalysisPlan,
    metadata: TableMetadata,
    templates: TemplateSet,
    glossary: Optional[Mapping[str, str]] = None,
) -> str:
    """Step-one prompt: records, their related headers, and the typed plan."""
    if not records:
        raise ValueError("recognition prompt needs at least one record")
    context = {
        **_metadata_fields(metadata),
        "records": render_records(records),
        "context": render_context(records),
        "analysis_plan": describe_plan(plan, templates.locale),
        "method": plan.method.value,
        "glossary": render_glossary(glossary, templates.locale),
    }
    return templates.recognition.render(context)


def build_generation_prompt(
    step1_output: str,
    metadata: TableMetadata,
    templates: TemplateSet,
    persona: bool = True,
    theme_instruction: bool = True,
) -> str:
    """Step-two prompt. Disabling ``persona`` or ``theme_instruction`` drops
    exactly that block and leaves every other byte unchanged."""
    if not step1_output.strip():
        raise ValueError("generation prompt needs the step-one output")
    theme = compose_theme_part(metadata.table_title, templates.locale).rendered
    fields = {**_metadata_fields(metadata), "theme_part": theme}
    context = {
        **fields,
        "step1_output": step1_output.strip(),
        "persona": templates.persona.render(fields) if persona else "",
        "theme_instruction": templates.theme_instruction.render(fields) if theme_instruction else "",
    }
    return templates.generation.render(context)


def build_correction(
    prompt: str,
    previous_output: str,
    failed_checks: Sequence[str],
    metadata: TableMetadata,
    templates: TemplateSet,
) -> str:
    """Append the corrective instruction used when a summary fails validation."""
    theme = compose_theme_part(metadata.table_title, templates.locale).rendered
    suffix = templates.correction.render({
        **_metadata_fields(metadata),
        "theme_part": theme,
        "failed_checks": ", ".join(failed_checks),
        "previous_output": previous_output.strip(),
    })
    return prompt.rstrip("\n") + suffix
