import json
from pathlib import Path

import pytest

from pacsdiv import load_corpus

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_DIR = Path(__file__).parent / "golden"

# arguments the golden outputs were hand-computed for
GOLDEN_ARGS = [
    "--windows", "1990-95,1995-00,2000-05",
    "--cohorts", "1990-1997,1997-2004",
    "--horizon", "5",
]

ALL_COMMANDS = [
    "summary",
    "pacs-coverage",
    "pacs-counts",
    "diversity-dist",
    "groups",
    "flows",
    "citation-age",
    "diversity-citations",
    "citation-dist",
    "share",
    "validate",
]


def paper(doi, year, authors, pacs, refs=(), **extra):
    record = {
        "doi": doi,
        "title": f"Paper {doi}",
        "authors": list(authors),
        "date": f"{year}-06-15",
        "pacs": list(pacs),
        "refs": list(refs),
    }
    record.update(extra)
    return record


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record) + "\n")
    return path


@pytest.fixture(scope="session")
def fixture_path():
    return DATA_DIR / "golden_corpus.jsonl"


@pytest.fixture(scope="session")
def fixture_corpus(fixture_path):
    return load_corpus(fixture_path)


@pytest.fixture
def corpus_file(tmp_path):
    """Write records to a JSONL file in tmp_path and return the path."""

    def make(records, name="corpus.jsonl"):
        return write_jsonl(tmp_path / name, records)

    return make
