"""End-to-end generation: preprocess, analyse, prompt twice, validate."""

from __future__ import annotations

import functools
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

from .analysis import AnalysisPlan, plan_for_records
from .backends import Backend, BackendRequest, GenerationParams, complete_with_retries
from .errors import BackendError, EmptyResult, EmptyTitle
from .evaluation import maybe_score
from .model import ScoreTriple, TableDocument
from .preprocess import prepare_document
from .prompts import (
    TemplateSet,
    build_correction,
    build_generation_prompt,
    build_recognition_prompt,
    load_templates,
)
from .tx import TXValidationReport, parse_tx_summary, resolve_locale, validate_tx

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PipelineConfig:
    locale: str = "auto"
    persona: bool = True
    theme_instruction: bool = True
    max_regeneration: int = 1
    params: GenerationParams = field(default_factory=GenerationParams)
    retry_backoff: float = 0.5
    template_dir: Optional[str] = None
    glossary: Mapping[str, str] = field(default_factory=dict)
    tokenize_mode: str = "auto"

    def __post_init__(self):
        if self.max_regeneration < 0:
            raise ValueError("max_regeneration must be non-negative")

    def templates(self, locale: str) -> TemplateSet:
        return _cached_templates(locale, self.template_dir)


@functools.lru_cache(maxsize=None)
def _cached_templates(locale: str, template_dir: Optional[str]) -> TemplateSet:
    return load_templates(locale, template_dir)


@dataclass(frozen=True)
class GenerationRecord:
    document_id: str
    step1_output: str
    final_summary: str
    tx_valid: bool
    failure_reason: Optional[str] = None
    locale: str = "en"
    method: Optional[str] = None
    theme: str = ""
    explanation: str = ""
    validation: Optional[TXValidationReport] = None
    recognition_prompt: str = ""
    generation_prompts: tuple[str, ...] = ()
    scores: Optional[ScoreTriple] = None

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "id": self.document_id,
            "summary": self.final_summary,
            "tx_valid": self.tx_valid,
            "failure_reason": self.failure_reason,
            "locale": self.locale,
            "method": self.method,
            "theme": self.theme,
            "explanation": self.explanation,
            "checks": self.validation.to_dict()["checks"] if self.validation else [],
            "step1_output": self.step1_output,
            "regenerations": max(len(self.generation_prompts) - 1, 0),
        }
        if self.scores is not None:
            d["scores"] = self.scores.to_dict()
        return d

    def prompt_log(self) -> list[dict[str, Any]]:
        entries = []
        if self.recognition_prompt:
            entries.append({"id": self.document_id, "step": "recognition", "attempt": 0,
                            "prompt": self.recognition_prompt})
        for i, p in enumerate(self.generation_prompts):
            entries.append({"id": self.document_id, "step": "generation", "attempt": i, "prompt": p})
        return entries


_QUOTES = {'"': '"', "“": "”", "'": "'", "「": "」"}


def clean_summary(text: str) -> str:
    """Strip whitespace and one pair of wrapping quotes from a model answer."""
    text = text.strip()
    if len(text) >= 2 and _QUOTES.get(text[0]) == text[-1]:
        text = text[1:-1].strip()
    return text


def run_pipeline(
    doc: TableDocument, backend: Backend, config: PipelineConfig = PipelineConfig()
) -> GenerationRecord:
    """Generate and validate a theme-explanation summary for one document.

    Raises:
        EmptyResult: no highlighted data cell survives preprocessing.
        BackendError: the backend keeps failing after its retries.
    """
    meta = doc.metadata
    locale = resolve_locale(config.locale, meta.table_title)
    templates = config.templates(locale)

    grid, records = prepare_document(doc)
    plan: AnalysisPlan = plan_for_records(records, grid)

    def ask(prompt: str, step: str, attempt: int = 0) -> str:
        request = BackendRequest(prompt, config.params, doc.id, step, attempt)
        return complete_with_retries(backend, request, config.retry_backoff).text

    recognition = build_recognition_prompt(records, plan, meta, templates, config.glossary)
    step1 = ask(recognition, "recognition").strip()

    base = build_generation_prompt(
        step1, meta, templates, persona=config.persona, theme_instruction=config.theme_instruction
    )
    prompts = [base]
    attempt = 0
    while True:
        summary = clean_summary(ask(prompts[-1], "generation", attempt))
        parsed = parse_tx_summary(summary, meta.table_title, locale)
        report = validate_tx(parsed, meta.table_title, locale)
        if report.valid or attempt >= config.max_regeneration:
            break
        attempt += 1
        logger.info("%s: summary failed %s, regenerating", doc.id, report.failed())
        prompts.append(build_correction(base, summary, report.failed(), meta, templates))

    failure = None if report.valid else "tx validation failed: " + ", ".join(report.failed())
    return GenerationRecord(
        document_id=doc.id,
        step1_output=step1,
        final_summary=summary,
        tx_valid=report.valid,
        failure_reason=failure,
        locale=locale,
        method=plan.method.value,
        theme=parsed.theme.rendered,
        explanation=parsed.explanation,
        validation=report,
        recognition_prompt=recognition,
        generation_prompts=tuple(prompts),
        scores=maybe_score(summary, doc.reference_summary, config.tokenize_mode),
    )


def failed_record(doc: TableDocument, reason: str, config: PipelineConfig) -> GenerationRecord:
    locale = resolve_locale(config.locale, doc.metadata.table_title)
    return GenerationRecord(
        document_id=doc.id,
        step1_output="",
        final_summary="",
        tx_valid=False,
        failure_reason=reason,
        locale=locale,
        scores=maybe_score("", doc.reference_summary, config.tokenize_mode),
    )


def _run_one(doc: TableDocument, backend: Backend, config: PipelineConfig) -> GenerationRecord:
    try:
        return run_pipeline(doc, backend, config)
    except (EmptyResult, EmptyTitle) as exc:
        logger.warning("%s", exc)
        return failed_record(doc, f"{type(exc).__name__}: {exc}", config)


@dataclass
class CorpusRun:
    records: list[GenerationRecord]
    backend_error: Optional[tuple[str, BackendError]] = None

    @property
    def ok(self) -> bool:
        return self.backend_error is None


def run_corpus(
    documents: Sequence[TableDocument],
    backend: Backend,
    config: PipelineConfig = PipelineConfig(),
    parallelism: int = 1,
) -> CorpusRun:
    """Run every document, at most ``parallelism`` at a time.

    Records come back in corpus order whatever the completion order.
    Documents whose tables yield nothing to summarise get a failure
    record. The first backend error stops scheduling; the records that
    did finish are still returned.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    documents = list(documents)
    results: list[Optional[GenerationRecord]] = [None] * len(documents)
    failures: list[tuple[int, BackendError]] = []
    stop = threading.Event()

    def work(i: int) -> None:
        if stop.is_set():
            return
        try:
            results[i] = _run_one(documents[i], backend, config)
        except BackendError as exc:
            stop.set()
            failures.append((i, exc))

    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        for fut in [pool.submit(work, i) for i in range(len(documents))]:
            fut.result()
    backend_error = None
    if failures:
        i, exc = min(failures, key=lambda f: f[0])
        backend_error = (documents[i].id, exc)
    return CorpusRun([r for r in results if r is not None], backend_error)
