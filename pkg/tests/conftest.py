import json
from pathlib import Path

import pytest

import orbistar

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def corpus_path(name):
    return CORPUS / f"{name}.json"


def corpus_document(name):
    with corpus_path(name).open(encoding="utf-8") as handle:
        return json.load(handle)


@pytest.fixture
def load_corpus():
    """Load a shipped corpus document by name."""

    def _load(name):
        return orbistar.load(corpus_path(name))

    return _load


@pytest.fixture
def bg_z2(load_corpus):
    return load_corpus("bg_z2")


@pytest.fixture
def bg_s3(load_corpus):
    return load_corpus("bg_s3")


@pytest.fixture
def c2_z2(load_corpus):
    return load_corpus("c2_z2")


@pytest.fixture
def c2_z3(load_corpus):
    return load_corpus("c2_z3")


@pytest.fixture
def p1p1(load_corpus):
    return load_corpus("p1p1_swap")


@pytest.fixture(scope="session")
def kummer():
    return orbistar.load(corpus_path("kummer"))


@pytest.fixture
def read_document():
    """Fresh parsed copy of a corpus document, safe to mutate."""
    return corpus_document
