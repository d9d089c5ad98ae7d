"""Theme-explanation structured summaries of highlighted table cells."""

from .analysis import (
    AnalysisPlan,
    TypedCell,
    classify_cell_type,
    parse_numeric,
    select_analysis_method,
)
from .backends import BackendRequest, BackendResponse, GenerationParams, HTTPBackend, MockBackend
from .evaluation import EvalReport, aggregate, bleu, rouge1, rougeL, tokenize
from .ingest import load_corpus, write_corpus, write_results
from .model import (
    AnalysisMethod,
    CellType,
    Corpus,
    GridEntry,
    KeyValueRecord,
    NormalizedGrid,
    RawCell,
    ScoreTriple,
    TableDocument,
    TableMetadata,
    ThemePart,
    TXSummary,
)
from .pipeline import GenerationRecord, PipelineConfig, run_corpus, run_pipeline
from .preprocess import expand_merged_cells, filter_related, infer_headers, to_key_value_records
from .prompts import build_generation_prompt, build_recognition_prompt, load_templates
from .tx import compose_theme_part, parse_tx_summary, validate_tx

__all__ = [
    "aggregate",
    "AnalysisMethod",
    "AnalysisPlan",
    "BackendRequest",
    "BackendResponse",
    "bleu",
    "build_generation_prompt",
    "build_recognition_prompt",
    "CellType",
    "classify_cell_type",
    "compose_theme_part",
    "Corpus",
    "EvalReport",
    "expand_merged_cells",
    "filter_related",
    "GenerationParams",
    "GenerationRecord",
    "GridEntry",
    "HTTPBackend",
    "infer_headers",
    "KeyValueRecord",
    "load_corpus",
    "load_templates",
    "MockBackend",
    "NormalizedGrid",
    "parse_numeric",
    "parse_tx_summary",
    "PipelineConfig",
    "RawCell",
    "rouge1",
    "rougeL",
    "run_corpus",
    "run_pipeline",
    "ScoreTriple",
    "select_analysis_method",
    "TableDocument",
    "TableMetadata",
    "ThemePart",
    "to_key_value_records",
    "tokenize",
    "TXSummary",
    "TypedCell",
    "validate_tx",
    "write_corpus",
    "write_results",
]

__version__ = "0.1.0"
