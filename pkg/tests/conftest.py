import glob
import importlib.resources
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from perskey.analyzer import AnalyzerConfig  # noqa: E402

DATA = os.path.join(os.path.dirname(__file__), "data")
CORPUS = sorted(glob.glob(os.path.join(DATA, "corpus", "*.html")))

# filled by test_acceptance, printed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def small_cfg():
    return AnalyzerConfig(min_token_len=2, stopwords=frozenset({"the", "and", "of", "a", "is"}))


@pytest.fixture(scope="session")
def table1_path():
    return str(importlib.resources.files("perskey") / "data" / "table1.csv")


@pytest.fixture(scope="session")
def table1_text(table1_path):
    with open(table1_path, encoding="utf-8") as fh:
        return fh.read()


@pytest.fixture(scope="session")
def corpus_paths():
    assert CORPUS, "corpus missing; run tests/data/make_corpus.py"
    return CORPUS


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
