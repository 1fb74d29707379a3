from __future__ import annotations

import os
from pathlib import Path

import pytest

from lerkit.conll import parse_corpus

TABLE_EXAMPLE_TEXT = (
    "Das O\n"
    "Bundesarbeitsgericht B-GRT\n"
    "ist O\n"
    "gemäß O\n"
    "§ B-GS\n"
    "9Abs. I-GS\n"
    "2Satz I-GS\n"
    "2ArbGG I-GS\n"
    "iVm. O\n"
    "\n"
)

LER_COURT_FILES = ("bag", "bfh", "bgh", "bpatg", "bsg", "bverfg", "bverwg")


@pytest.fixture
def table_example_text() -> str:
    return TABLE_EXAMPLE_TEXT


@pytest.fixture
def table_example_corpus():
    return parse_corpus(TABLE_EXAMPLE_TEXT, source_id="example")


def ler_data_dir() -> Path | None:
    """Directory holding the published per-court .conll files, if present."""
    candidates = []
    env = os.environ.get("LER_DATA_DIR")
    if env:
        candidates.append(Path(env))
    candidates.append(Path(__file__).resolve().parent.parent / "data" / "ler")
    for candidate in candidates:
        if candidate.is_dir() and any(candidate.glob("*.conll")):
            return candidate
    return None


def require_ler_dataset() -> Path:
    data_dir = ler_data_dir()
    if data_dir is None:
        pytest.skip(
            "published LER files not found (set LER_DATA_DIR or place the "
            "per-court .conll files under data/ler/); this environment has "
            "no network access beyond package mirrors"
        )
    return data_dir


# --- acceptance summary --------------------------------------------------

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "setup" and report.skipped:
        _acceptance[name] = "SKIPPED"
    elif report.when == "call":
        _acceptance[name] = report.outcome.upper()
        if report.skipped:
            _acceptance[name] = "SKIPPED"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{_acceptance[name]:<8} {name}")
