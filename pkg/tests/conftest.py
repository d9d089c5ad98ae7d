import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tabtx.fixtures import bundled_path, fixture_documents, mock_responses  # noqa: E402


@pytest.fixture(scope="session")
def fixture_docs():
    return {d.id: d for d in fixture_documents()}


@pytest.fixture(scope="session")
def responses():
    return mock_responses()


@pytest.fixture(scope="session")
def corpus_path():
    return bundled_path("fixtures.jsonl")


@pytest.fixture(scope="session")
def responses_path():
    return bundled_path("mock_responses.json")
