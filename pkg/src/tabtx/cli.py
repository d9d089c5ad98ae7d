"""Command-line entry point: ``tabtx <subcommand> [options]``.

Exit codes: 0 success, 1 validation/data error, 2 backend error,
3 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

from .analysis import describe_plan, plan_for_records
from .backends import DEFAULT_API_KEY_ENV, GenerationParams, HTTPBackend, MockBackend
from .errors import BackendError, ConfigError, EmptyCorpus, EmptyResult, IngestError, TabTXError
from .evaluation import EvalReport, evaluate_pairs
from .ingest import dump_json_line, load_corpus, read_lines, write_lines, write_results
from .pipeline import PipelineConfig, run_corpus
from .preprocess import prepare_document
from .prompts import load_glossary
from .tx import parse_tx_summary, resolve_locale, validate_tx

logger = logging.getLogger("tabtx")

EXIT_OK, EXIT_DATA, EXIT_BACKEND, EXIT_CONFIG = 0, 1, 2, 3

CONFIG_KEYS = {
    "backend", "locale", "persona", "theme_instruction", "max_regeneration",
    "parallelism", "glossary", "template_dir", "tokenize", "generation", "skip_invalid",
}
BACKEND_KEYS = {"kind", "endpoint", "model", "api_key_env", "responses", "fallback", "system_prompt"}
GENERATION_KEYS = {"temperature", "max_tokens", "stop", "timeout", "retries", "backoff"}
# expected type (or allowed values) of each scalar top-level key
_SCALARS: dict[str, Any] = {
    "locale": ("auto", "en", "ko"),
    "tokenize": ("auto", "word", "char"),
    "persona": bool,
    "theme_instruction": bool,
    "skip_invalid": bool,
    "max_regeneration": int,
    "parallelism": int,
}


@dataclass
class RunConfig:
    corpus: Optional[str] = None
    out: Optional[str] = None
    backend: dict[str, Any] = field(default_factory=lambda: {"kind": "mock", "fallback": "echo"})
    locale: str = "auto"
    persona: bool = True
    theme_instruction: bool = True
    max_regeneration: int = 1
    tokenize: str = "auto"
    parallelism: int = 1
    skip_invalid: bool = False
    glossary: Optional[str] = None
    template_dir: Optional[str] = None
    generation: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")

    def pipeline_config(self) -> PipelineConfig:
        gen = dict(self.generation)
        try:
            params = GenerationParams(
                temperature=float(gen.get("temperature", 0.0)),
                max_tokens=int(gen.get("max_tokens", 512)),
                stop_sequences=tuple(gen.get("stop", ())),
                timeout=float(gen.get("timeout", 60.0)),
                retries=int(gen.get("retries", 2)),
            )
            return PipelineConfig(
                locale=self.locale,
                persona=self.persona,
                theme_instruction=self.theme_instruction,
                max_regeneration=self.max_regeneration,
                params=params,
                retry_backoff=float(gen.get("backoff", 0.5)),
                template_dir=self.template_dir,
                glossary=load_glossary(self.glossary) if self.glossary else {},
                tokenize_mode=self.tokenize,
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid generation settings: {exc}") from None

    def make_backend(self):
        backend_cfg = self.backend
        kind = backend_cfg.get("kind", "mock")
        if kind == "mock":
            responses = backend_cfg.get("responses")
            fallback = backend_cfg.get("fallback", "echo")
            if responses:
                try:
                    return MockBackend.from_file(responses, fallback)
                except (OSError, json.JSONDecodeError) as exc:
                    raise ConfigError(f"cannot read mock responses {responses}: {exc}") from None
            return MockBackend({}, fallback)
        if kind == "http":
            if not backend_cfg.get("endpoint") or not backend_cfg.get("model"):
                raise ConfigError("http backend needs 'endpoint' and 'model'")
            return HTTPBackend(
                backend_cfg["endpoint"], backend_cfg["model"],
                backend_cfg.get("api_key_env", DEFAULT_API_KEY_ENV), backend_cfg.get("system_prompt"),
            )
        raise ConfigError(f"unknown backend kind {kind!r}")


def _resolve(base: Path, key: str, value):
    if value is None:
        return None
    if not isinstance(value, str):
        raise ConfigError(f"config key {key!r} must be a path string")
    p = Path(value)
    return str(p if p.is_absolute() else base / p)


def read_config_file(path) -> dict[str, Any]:
    """Load a JSON config file; relative paths inside resolve against its folder."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    for key, want in _SCALARS.items():
        if key not in data:
            continue
        value = data[key]
        if isinstance(want, tuple):
            ok = value in want
        else:
            ok = isinstance(value, want) and (want is bool or not isinstance(value, bool))
        if not ok:
            raise ConfigError(f"config key {key!r} has invalid value {value!r}")
    backend = data.get("backend", {})
    if not isinstance(backend, dict) or set(backend) - BACKEND_KEYS:
        raise ConfigError(f"backend section accepts only {sorted(BACKEND_KEYS)}")
    generation = data.get("generation", {})
    if not isinstance(generation, dict) or set(generation) - GENERATION_KEYS:
        raise ConfigError(f"generation section accepts only {sorted(GENERATION_KEYS)}")
    base = path.parent
    if "responses" in backend:
        backend["responses"] = _resolve(base, "responses", backend["responses"])
    for key in ("glossary", "template_dir"):
        if key in data:
            data[key] = _resolve(base, key, data[key])
    return data


def build_run_config(args: argparse.Namespace) -> RunConfig:
    cfg: dict[str, Any] = read_config_file(args.config) if args.config else {}
    backend = {"kind": "mock", "fallback": "echo", **cfg.pop("backend", {})}
    generation = cfg.pop("generation", {})

    if getattr(args, "backend", None):
        backend["kind"] = args.backend
    for attr in ("responses", "endpoint", "model"):
        if getattr(args, attr, None):
            backend[attr] = getattr(args, attr)
    if getattr(args, "retries", None) is not None:
        generation["retries"] = args.retries
    if getattr(args, "backoff", None) is not None:
        generation["backoff"] = args.backoff

    overrides = {
        "locale": args.locale,
        "parallelism": args.parallelism,
        "tokenize": getattr(args, "tokenize", None),
        "max_regeneration": getattr(args, "max_regeneration", None),
        "glossary": getattr(args, "glossary", None),
    }
    persona = getattr(args, "persona", None)
    if persona is not None:
        overrides["persona"] = persona == "on"
    if getattr(args, "no_theme_instruction", False):
        overrides["theme_instruction"] = False
    if args.skip_invalid:
        overrides["skip_invalid"] = True
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(corpus=args.corpus, out=args.out, backend=backend, generation=generation, **cfg)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


# -- output helpers ---------------------------------------------------------------


def _emit(lines: Sequence[str], out: Optional[str]) -> None:
    text = "".join(lines)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _require(value, flag: str):
    if not value:
        raise ConfigError(f"{flag} is required")
    return value


def _load(cfg: RunConfig):
    return load_corpus(_require(cfg.corpus, "--corpus"), strict=not cfg.skip_invalid)


def report_lines(report: EvalReport, fmt: str) -> list[str]:
    if fmt == "json":
        lines = [
            dump_json_line({"id": doc_id, **s.to_dict(), "average": s.average})
            for doc_id, s in report.per_document
        ]
        lines.append(dump_json_line({"summary": report.summary()}))
        return lines
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "rouge1", "rougeL", "bleu", "average"])
    for doc_id, s in report.per_document:
        writer.writerow([doc_id, repr(s.rouge1), repr(s.rougeL), repr(s.bleu), repr(s.average)])
    m = report.corpus_means
    writer.writerow(["__corpus__", repr(m.rouge1), repr(m.rougeL), repr(m.bleu), repr(report.overall_average)])
    return [buf.getvalue()]


def evaluate_results(results: list[dict], corpus, tokenize: str = "auto") -> EvalReport:
    """Score result rows (``{"id", "summary"}``) against corpus references."""
    refs = corpus.by_id()
    pairs = []
    for row in results:
        doc_id = row.get("id")
        if doc_id not in refs:
            raise IngestError(f"result for unknown document {doc_id!r}")
        ref = refs[doc_id].reference_summary
        if ref is None:
            continue
        pairs.append((doc_id, row.get("summary") or "", ref))
    if not pairs:
        raise EmptyCorpus("no result has a reference summary to score against")
    return evaluate_pairs(pairs, tokenize)


# -- subcommands ----------------------------------------------------------------


def cmd_preprocess(cfg: RunConfig, args) -> int:
    lines = []
    for doc in _load(cfg):
        try:
            _, records = prepare_document(doc)
            lines.append(dump_json_line({"id": doc.id, "records": [r.to_dict() for r in records]}))
        except EmptyResult as exc:
            logger.warning("%s", exc)
            lines.append(dump_json_line({"id": doc.id, "records": [], "error": str(exc)}))
    _emit(lines, cfg.out)
    return EXIT_OK


def cmd_analyze(cfg: RunConfig, args) -> int:
    lines = []
    for doc in _load(cfg):
        locale = resolve_locale(cfg.locale, doc.metadata.table_title)
        try:
            grid, records = prepare_document(doc)
        except EmptyResult as exc:
            lines.append(dump_json_line({"id": doc.id, "error": str(exc)}))
            continue
        plan = plan_for_records(records, grid)
        lines.append(dump_json_line({
            "id": doc.id,
            "method": plan.method.value,
            "axis": plan.axis,
            "cells": [
                {
                    "coordinate": list(c.record.coordinate),
                    "value": c.record.value,
                    "key_chain": list(c.record.key_chain),
                    "cell_type": c.cell_type.value,
                    "numeric_value": None if c.numeric_value is None else str(c.numeric_value),
                    "unit": c.unit,
                }
                for c in plan.ordered_cells
            ],
            "description": describe_plan(plan, locale),
        }))
    _emit(lines, cfg.out)
    return EXIT_OK


def _generate(cfg: RunConfig, results_path: Path, prompt_log: Path) -> int:
    corpus = _load(cfg)
    run = run_corpus(corpus.documents, cfg.make_backend(), cfg.pipeline_config(), cfg.parallelism)
    write_results(run.records, results_path)
    write_lines((e for r in run.records for e in r.prompt_log()), prompt_log)
    if not run.ok:
        doc_id, exc = run.backend_error
        logger.error("backend failure on %s: %s (%d results written)", doc_id, exc, len(run.records))
        return EXIT_BACKEND
    invalid = [r.document_id for r in run.records if not r.tx_valid]
    logger.info("%d summaries, %d failed validation", len(run.records), len(invalid))
    return EXIT_OK


def default_prompt_log(results_path: Path) -> Path:
    return results_path.with_name(results_path.stem + ".prompts.jsonl")


def cmd_generate(cfg: RunConfig, args) -> int:
    out = Path(_require(cfg.out, "--out"))
    log = Path(args.prompt_log) if args.prompt_log else default_prompt_log(out)
    return _generate(cfg, out, log)


def cmd_validate(cfg: RunConfig, args) -> int:
    corpus = _load(cfg)
    titles = {d.id: d.metadata.table_title for d in corpus}
    lines = []
    for row in read_lines(_require(args.results, "--results")):
        doc_id = row.get("id")
        if doc_id not in titles:
            raise IngestError(f"result for unknown document {doc_id!r}")
        title = titles[doc_id]
        locale = resolve_locale(cfg.locale, title)
        parsed = parse_tx_summary(row.get("summary") or "", title, locale)
        report = validate_tx(parsed, title, locale)
        lines.append(dump_json_line({"id": doc_id, "theme": parsed.theme.rendered, **report.to_dict()}))
    _emit(lines, cfg.out)
    return EXIT_OK


def cmd_evaluate(cfg: RunConfig, args) -> int:
    corpus = _load(cfg)
    results = read_lines(_require(args.results, "--results"))
    report = evaluate_results(results, corpus, cfg.tokenize)
    _emit(report_lines(report, args.format), cfg.out)
    return EXIT_OK


def cmd_pipeline(cfg: RunConfig, args) -> int:
    out = Path(_require(cfg.out, "--out"))
    out.mkdir(parents=True, exist_ok=True)
    results_path = out / "results.jsonl"
    status = _generate(cfg, results_path, out / "prompts.jsonl")
    if status != EXIT_OK:
        return status
    corpus = _load(cfg)
    report = evaluate_results(read_lines(results_path), corpus, cfg.tokenize)
    ext = "csv" if args.format == "csv" else "jsonl"
    (out / f"report.{ext}").write_text("".join(report_lines(report, args.format)), encoding="utf-8")
    r = report.rounded
    logger.info("ROUGE-1 %.2f  ROUGE-L %.2f  BLEU %.2f  average %.2f",
                r["rouge1"], r["rougeL"], r["bleu"], r["average"])
    return EXIT_OK


COMMANDS = {
    "preprocess": cmd_preprocess,
    "analyze": cmd_analyze,
    "generate": cmd_generate,
    "validate": cmd_validate,
    "evaluate": cmd_evaluate,
    "pipeline": cmd_pipeline,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--corpus", help="line-delimited corpus file")
    common.add_argument("--out", help="output file (directory for 'pipeline')")
    common.add_argument("--locale", choices=["auto", "en", "ko"])
    common.add_argument("--parallelism", type=int, help="documents processed concurrently")
    common.add_argument("--skip-invalid", action="store_true",
                        help="log and drop invalid corpus records instead of failing")
    common.add_argument("-v", "--verbose", action="store_true")

    gen = argparse.ArgumentParser(add_help=False)
    gen.add_argument("--backend", choices=["mock", "http"])
    gen.add_argument("--responses", help="mock backend response map (JSON)")
    gen.add_argument("--endpoint", help="chat-completion URL for the http backend")
    gen.add_argument("--model", help="model name for the http backend")
    gen.add_argument("--persona", choices=["on", "off"])
    gen.add_argument("--no-theme-instruction", action="store_true",
                     help="omit the theme-part instruction from the generation prompt")
    gen.add_argument("--max-regeneration", type=int)
    gen.add_argument("--retries", type=int)
    gen.add_argument("--backoff", type=float, help="base retry backoff in seconds")
    gen.add_argument("--glossary", help="JSON term -> explanation map added to step one")

    scoring = argparse.ArgumentParser(add_help=False)
    scoring.add_argument("--tokenize", choices=["auto", "word", "char"])
    scoring.add_argument("--format", choices=["json", "csv"], default="json")

    parser = _Parser(prog="tabtx", description="Theme-explanation table summarization.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("preprocess", parents=[common], help="dump highlighted key-value records")
    sub.add_parser("analyze", parents=[common], help="print the analysis plan per document")
    p = sub.add_parser("generate", parents=[common, gen], help="generate summaries")
    p.add_argument("--prompt-log", help="where to log prompts (default: <out stem>.prompts.jsonl)")
    p = sub.add_parser("validate", parents=[common], help="check theme-explanation structure")
    p.add_argument("--results", help="results file with 'id' and 'summary' per line")
    p = sub.add_parser("evaluate", parents=[common, scoring], help="score results against references")
    p.add_argument("--results", help="results file with 'id' and 'summary' per line")
    sub.add_parser("pipeline", parents=[common, gen, scoring], help="generate, then evaluate")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = build_run_config(args)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        logger.error("config error: %s", exc)
        return EXIT_CONFIG
    except BackendError as exc:
        logger.error("backend error: %s", exc)
        return EXIT_BACKEND
    except (TabTXError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
