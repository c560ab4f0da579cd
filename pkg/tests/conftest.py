from __future__ import annotations

from pathlib import Path

import pytest

from unfoldtt.elab import elaborate_source

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "paper_corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"

# acceptance lines collected during the run, echoed in the terminal summary
ACCEPTANCE: list[str] = []


def corpus_text(name: str) -> str:
    return (CORPUS / name).read_text(encoding="utf-8")


def elab_corpus(name: str):
    return elaborate_source(corpus_text(name), f"paper_corpus/{name}")


@pytest.fixture
def in_root(monkeypatch):
    monkeypatch.chdir(ROOT)
    return ROOT


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
