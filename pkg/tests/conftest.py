import sys
from pathlib import Path

import pytest
from hypothesis import settings

from trienorm import CountingTrie, load_corpus, read_corpus_file
from trienorm.corpus import builtin_corpus_path

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"

_ACCEPTANCE: list[str] = []


def record_acceptance(line: str) -> None:
    print(line)
    _ACCEPTANCE.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture
def eight_corpus():
    return read_corpus_file(builtin_corpus_path("eight_words.txt"))


@pytest.fixture
def eight_trie(eight_corpus):
    t = CountingTrie("improved")
    t.train_many(eight_corpus.words)
    return t


@pytest.fixture
def compare20():
    return read_corpus_file(builtin_corpus_path("compare20.txt"))


@pytest.fixture
def bill_corpus():
    return load_corpus(["bill", "bills"], [0.75, 0.25])
