"""
The full pipeline on the bundled fixtures
=========================================

Runs both prompting steps against the scripted backend, then shows what
happens with the persona turned off and with a backend that ignores the
requested sentence shape.
"""

from tabtx.backends import MockBackend
from tabtx.fixtures import fixture_documents, mock_responses
from tabtx.pipeline import PipelineConfig, run_corpus, run_pipeline

docs = fixture_documents()
run = run_corpus(docs, MockBackend(mock_responses()), PipelineConfig(retry_backoff=0), parallelism=4)
for rec in run.records:
    status = "ok " if rec.tx_valid else "bad"
    print(f"{status} {rec.document_id:24} {rec.method or '-':20} {rec.final_summary[:70] or rec.failure_reason}")

refugee = docs[0]
with_persona = run_pipeline(refugee, MockBackend(mock_responses()))
without = run_pipeline(refugee, MockBackend(mock_responses()), PipelineConfig(persona=False))
print()
print("step-two prompt, persona on:")
print(with_persona.generation_prompts[0])
print()
print("removed when the persona is off:")
print(with_persona.generation_prompts[0].replace(without.generation_prompts[0], "").strip())

# a backend that never writes a theme part gets one corrective retry
stubborn = MockBackend({refugee.id: {"recognition": "notes", "generation": "Approvals were low."}})
rec = run_pipeline(refugee, stubborn, PipelineConfig(retry_backoff=0))
print()
print(rec.tx_valid, rec.failure_reason, "prompts sent:", len(rec.generation_prompts))
