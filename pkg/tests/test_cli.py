import csv
import json

import pytest

from tabtx.cli import main
from tabtx.evaluation import score_pair
from tabtx.fixtures import fixture_documents
from tabtx.ingest import read_lines, write_corpus, write_lines
from oracles import bleu_oracle, rouge1_oracle, rougeL_oracle
from httpstub import unused_url


def run(*argv):
    return main([str(a) for a in argv])


def test_preprocess_ok(tmp_path, corpus_path):
    out = tmp_path / "pre.jsonl"
    assert run("preprocess", "--corpus", corpus_path, "--out", out) == 0
    rows = read_lines(out)
    assert len(rows) == len(fixture_documents())
    refugee = rows[0]
    assert refugee["id"] == "refugee-by-nationality"
    assert [r["value"] for r in refugee["records"]] == ["2,437", "147"]


def _with_overlap(tmp_path, corpus_path):
    lines = corpus_path.read_text(encoding="utf-8").splitlines(keepends=True)
    bad = json.loads(lines[0])
    bad["id"] = "broken-table"
    bad["cells"].append({"row": 0, "col": 0, "rowspan": 1, "colspan": 2, "value": "x", "is_header": True})
    p = tmp_path / "bad.jsonl"
    p.write_text(lines[0] + json.dumps(bad) + "\n" + "".join(lines[1:]), encoding="utf-8")
    return p


def test_preprocess_overlap_strict(tmp_path, corpus_path, caplog):
    bad = _with_overlap(tmp_path, corpus_path)
    assert run("preprocess", "--corpus", bad, "--out", tmp_path / "o.jsonl") == 1
    assert "broken-table" in caplog.text


def test_preprocess_skip_invalid(tmp_path, corpus_path, caplog):
    bad = _with_overlap(tmp_path, corpus_path)
    out = tmp_path / "o.jsonl"
    assert run("preprocess", "--corpus", bad, "--out", out, "--skip-invalid") == 0
    assert "broken-table" in caplog.text
    assert len(read_lines(out)) == len(fixture_documents())


def test_analyze(tmp_path, corpus_path):
    out = tmp_path / "a.jsonl"
    assert run("analyze", "--corpus", corpus_path, "--out", out) == 0
    methods = {r["id"]: r.get("method") for r in read_lines(out)}
    assert methods["fiscal-cost"] == "TrendAnalysis"
    assert methods["refugee-by-nationality"] == "MagnitudeComparison"
    assert methods["exam-results"] == "Enumeration"


def test_generate_golden(tmp_path, corpus_path, responses_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.jsonl"
        assert run("generate", "--corpus", corpus_path, "--responses", responses_path, "--out", out) == 0
        outs.append((out.read_bytes(), (tmp_path / f"r{i}.prompts.jsonl").read_bytes()))
    assert outs[0] == outs[1]
    rows = read_lines(tmp_path / "r0.jsonl")
    assert {"id", "summary", "tx_valid", "scores"} <= set(rows[0])


def test_persona_off_in_prompt_log(tmp_path, corpus_path, responses_path):
    on, off = tmp_path / "on.jsonl", tmp_path / "off.jsonl"
    assert run("generate", "--corpus", corpus_path, "--responses", responses_path, "--out", on) == 0
    assert run("generate", "--corpus", corpus_path, "--responses", responses_path, "--out", off,
               "--persona", "off") == 0
    gen_on = [e["prompt"] for e in read_lines(tmp_path / "on.prompts.jsonl") if e["step"] == "generation"]
    gen_off = [e["prompt"] for e in read_lines(tmp_path / "off.prompts.jsonl") if e["step"] == "generation"]
    assert any("newspaper reporter" in p for p in gen_on)
    assert not any("newspaper reporter" in p or "기자" in p for p in gen_off)


def test_validate(tmp_path, corpus_path, responses_path):
    res = tmp_path / "r.jsonl"
    run("generate", "--corpus", corpus_path, "--responses", responses_path, "--out", res)
    out = tmp_path / "v.jsonl"
    assert run("validate", "--corpus", corpus_path, "--results", res, "--out", out) == 0
    by_id = {r["id"]: r["valid"] for r in read_lines(out)}
    assert by_id["refugee-by-nationality"] is True
    assert by_id["all-headers"] is False


def _identity_results(tmp_path):
    docs = [d for d in fixture_documents() if d.reference_summary]
    p = tmp_path / "same.jsonl"
    write_lines(({"id": d.id, "summary": d.reference_summary} for d in docs), p)
    return p


def test_evaluate_identical_is_perfect(tmp_path, corpus_path):
    out = tmp_path / "rep.jsonl"
    assert run("evaluate", "--corpus", corpus_path, "--results", _identity_results(tmp_path), "--out", out) == 0
    summary = read_lines(out)[-1]["summary"]
    assert summary["rouge1"] == summary["rougeL"] == summary["bleu"] == summary["average"] == 1.0


def test_evaluate_csv(tmp_path, corpus_path):
    out = tmp_path / "rep.csv"
    assert run("evaluate", "--corpus", corpus_path, "--results", _identity_results(tmp_path),
               "--out", out, "--format", "csv") == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["id", "rouge1", "rougeL", "bleu", "average"]
    assert rows[-1][0] == "__corpus__" and float(rows[-1][4]) == 1.0


def test_evaluate_matches_oracle(tmp_path, corpus_path):
    docs = {d.id: d for d in fixture_documents()}
    cands = {
        "refugee-by-nationality": "According to the refugee status by nationality, 147 were approved.",
        "fiscal-cost": "The net fiscal cost rose to 61.301 trillion KRW.",
    }
    res = tmp_path / "r.jsonl"
    write_lines(({"id": k, "summary": v} for k, v in cands.items()), res)
    out = tmp_path / "rep.jsonl"
    assert run("evaluate", "--corpus", corpus_path, "--results", res, "--out", out) == 0
    rows = read_lines(out)
    from tabtx.evaluation import tokenize
    for row in rows[:-1]:
        c = tokenize(cands[row["id"]])
        r = tokenize(docs[row["id"]].reference_summary)
        assert abs(row["rouge1"] - rouge1_oracle(c, r)) <= 1e-9
        assert abs(row["rougeL"] - rougeL_oracle(c, r)) <= 1e-9
        assert abs(row["bleu"] - bleu_oracle(c, r)) <= 1e-9
        assert row["rouge1"] == score_pair(cands[row["id"]], docs[row["id"]].reference_summary).rouge1


def test_evaluate_empty_results(tmp_path, corpus_path):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    assert run("evaluate", "--corpus", corpus_path, "--results", empty) == 1


def test_http_unreachable_flushes_partial(tmp_path, corpus_path, responses_path):
    out = tmp_path / "r.jsonl"
    code = run("generate", "--corpus", corpus_path, "--out", out, "--backend", "http",
               "--endpoint", unused_url(), "--model", "m", "--retries", "1", "--backoff", "0")
    assert code == 2
    assert out.exists()
    assert read_lines(out) == []


def test_http_partial_results_written(tmp_path):
    docs = fixture_documents()
    corpus = tmp_path / "c.jsonl"
    # documents with no data cell never reach the backend, so they finish first
    write_corpus([d for d in docs if d.id in ("one-by-one", "all-headers")] + docs[:1], corpus)
    out = tmp_path / "r.jsonl"
    code = run("generate", "--corpus", corpus, "--out", out, "--backend", "http",
               "--endpoint", unused_url(), "--model", "m", "--retries", "0")
    assert code == 2
    assert [r["id"] for r in read_lines(out)] == ["one-by-one", "all-headers"]


def test_pipeline_command(tmp_path, corpus_path, responses_path):
    out = tmp_path / "run"
    assert run("pipeline", "--corpus", corpus_path, "--responses", responses_path, "--out", out) == 0
    assert {p.name for p in out.iterdir()} == {"results.jsonl", "prompts.jsonl", "report.jsonl"}


def test_config_file(tmp_path, corpus_path, responses_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "backend": {"kind": "mock", "responses": str(responses_path)},
        "persona": False, "parallelism": 2, "locale": "auto",
    }))
    out = tmp_path / "r.jsonl"
    assert run("generate", "--config", cfg, "--corpus", corpus_path, "--out", out) == 0
    prompts = [e["prompt"] for e in read_lines(tmp_path / "r.prompts.jsonl") if e["step"] == "generation"]
    assert not any("newspaper reporter" in p for p in prompts)


@pytest.mark.parametrize("content", [
    '{"nonsense": 1}', "not json", '{"backend": {"kind": "carrier-pigeon"}}',
    '{"glossary": {"term": "inline maps are not accepted"}}',
    '{"persona": "yes"}', '{"tokenize": 5}', '{"locale": "fr"}', '{"parallelism": true}',
])
def test_bad_config_exit_3(tmp_path, corpus_path, content):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(content)
    assert run("generate", "--config", cfg, "--corpus", corpus_path, "--out", tmp_path / "r.jsonl") == 3


def test_argument_errors_exit_3(corpus_path):
    with pytest.raises(SystemExit) as err:
        run("generate", "--persona", "maybe")
    assert err.value.code == 3
    assert run("preprocess") == 3
    assert run("preprocess", "--corpus", corpus_path, "--parallelism", "0") == 3


def test_missing_corpus_is_data_error(tmp_path):
    assert run("preprocess", "--corpus", tmp_path / "nope.jsonl") == 1
