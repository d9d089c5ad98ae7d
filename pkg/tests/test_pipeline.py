import threading
import time

import pytest

from tabtx.backends import BackendResponse, GenerationParams, MockBackend
from tabtx.errors import EmptyResult, Transport
from tabtx.fixtures import FISCAL_EXPLANATION, WORKED_EXAMPLES, REFUGEE_THEME, fixture_documents
from tabtx.pipeline import PipelineConfig, clean_summary, run_corpus, run_pipeline

FAST = PipelineConfig(retry_backoff=0, params=GenerationParams(retries=0))


def test_refugee_sentence(fixture_docs, responses):
    rec = run_pipeline(fixture_docs["refugee-by-nationality"], MockBackend(responses), FAST)
    assert rec.tx_valid
    assert rec.theme == REFUGEE_THEME
    assert rec.method == "MagnitudeComparison"
    assert rec.failure_reason is None
    assert len(rec.generation_prompts) == 1
    assert rec.scores is not None


def test_fiscal_explanation(fixture_docs, responses):
    rec = run_pipeline(fixture_docs["fiscal-cost"], MockBackend(responses), FAST)
    assert rec.tx_valid and rec.explanation == FISCAL_EXPLANATION
    assert rec.method == "TrendAnalysis"


@pytest.mark.parametrize("doc_id", WORKED_EXAMPLES)
def test_worked_example_fixtures_valid(fixture_docs, responses, doc_id):
    assert run_pipeline(fixture_docs[doc_id], MockBackend(responses), FAST).tx_valid


def test_forced_failure_retries_once(fixture_docs):
    doc = fixture_docs["refugee-by-nationality"]
    backend = MockBackend({doc.id: {"recognition": "notes", "generation": "Values rose sharply."}})
    rec = run_pipeline(doc, backend, FAST)
    assert not rec.tx_valid
    assert "has_citation_expression" in rec.failure_reason
    assert len(rec.generation_prompts) == 2
    assert "Values rose sharply." in rec.generation_prompts[1]
    assert rec.to_dict()["regenerations"] == 1


def test_regeneration_can_recover(fixture_docs):
    doc = fixture_docs["refugee-by-nationality"]
    backend = MockBackend({doc.id: {"recognition": "n", "generation": ["No theme here.", f"{REFUGEE_THEME} x rose."]}})
    rec = run_pipeline(doc, backend, FAST)
    assert rec.tx_valid and len(rec.generation_prompts) == 2


def test_no_regeneration_when_disabled(fixture_docs):
    doc = fixture_docs["refugee-by-nationality"]
    backend = MockBackend({doc.id: {"recognition": "n", "generation": "nope."}})
    cfg = PipelineConfig(max_regeneration=0, retry_backoff=0)
    assert len(run_pipeline(doc, backend, cfg).generation_prompts) == 1


def test_empty_result_propagates(fixture_docs):
    with pytest.raises(EmptyResult):
        run_pipeline(fixture_docs["all-headers"], MockBackend(), FAST)


def test_clean_summary():
    assert clean_summary('  "According to t, x."\n') == "According to t, x."
    assert clean_summary("“quoted”") == "quoted"
    assert clean_summary('"unbalanced') == '"unbalanced'


def test_echo_corpus_count_and_order():
    docs = fixture_documents()
    run = run_corpus(docs, MockBackend(), FAST, parallelism=4)
    assert run.ok
    assert [r.document_id for r in run.records] == [d.id for d in docs]
    failed = {r.document_id for r in run.records if r.failure_reason and r.failure_reason.startswith("EmptyResult")}
    assert failed == {"one-by-one", "all-headers"}


class SlowFirst:
    """Finishes documents in reverse order to exercise result ordering."""

    def __init__(self, inner, ids):
        self.inner = inner
        self.delay = {d: 0.02 * (len(ids) - i) for i, d in enumerate(ids)}

    def complete(self, request):
        time.sleep(self.delay.get(request.document_id, 0))
        return self.inner.complete(request)


def test_parallel_matches_sequential(responses):
    docs = fixture_documents()
    seq = run_corpus(docs, MockBackend(responses), FAST, parallelism=1)
    par = run_corpus(docs, SlowFirst(MockBackend(responses), [d.id for d in docs]), FAST, parallelism=4)
    assert [r.to_dict() for r in seq.records] == [r.to_dict() for r in par.records]


class FailOn:
    def __init__(self, inner, bad_id):
        self.inner, self.bad_id = inner, bad_id
        self.lock = threading.Lock()

    def complete(self, request):
        if request.document_id == self.bad_id:
            raise Transport("connection refused")
        return self.inner.complete(request)


def test_backend_error_stops_and_keeps_finished(responses):
    docs = fixture_documents()
    run = run_corpus(docs, FailOn(MockBackend(responses), docs[2].id), FAST, parallelism=1)
    assert not run.ok
    assert run.backend_error[0] == docs[2].id
    assert [r.document_id for r in run.records] == [d.id for d in docs[:2]]


def test_parallelism_validated():
    with pytest.raises(ValueError):
        run_corpus([], MockBackend(), FAST, parallelism=0)


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(max_regeneration=-1)


def test_prompt_log_entries(fixture_docs, responses):
    rec = run_pipeline(fixture_docs["exam-results"], MockBackend(responses), FAST)
    log = rec.prompt_log()
    assert [e["step"] for e in log] == ["recognition", "generation"]
    assert all(e["id"] == "exam-results" for e in log)


def test_backend_response_type():
    assert BackendResponse("x").latency == 0.0
