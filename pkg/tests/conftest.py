from __future__ import annotations

from pathlib import Path

import pytest

from corefeval import Corpus, parse_corpus

FIXTURE_DIR = Path(__file__).parent / "fixtures"

#: Canonical fixtures: valid files in the serializer's own form.
CANONICAL_FIXTURES = (
    "basic.conllu",
    "zeros.conllu",
    "gapped.conllu",
    "nested.conllu",
    "singletons.conllu",
    "multidoc.conllu",
    "zeros_displaced.conllu",
)


def fixture_path(name: str) -> Path:
    return FIXTURE_DIR / name


def fixture_bytes(name: str) -> bytes:
    return fixture_path(name).read_bytes()


def load_fixture(name: str) -> Corpus:
    return parse_corpus(fixture_bytes(name))


@pytest.fixture
def basic() -> Corpus:
    return load_fixture("basic.conllu")


@pytest.fixture
def zeros() -> Corpus:
    return load_fixture("zeros.conllu")


@pytest.fixture
def nested() -> Corpus:
    return load_fixture("nested.conllu")
