from pathlib import Path

import pytest

from hoprove.parser import load_spec

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture(scope="session")
def corpus():
    return CORPUS


@pytest.fixture(scope="session")
def system_t():
    return load_spec(CORPUS / "system_t.hrs")


@pytest.fixture(scope="session")
def brouwer():
    return load_spec(CORPUS / "brouwer.hrs")


@pytest.fixture(scope="session")
def arith():
    return load_spec(CORPUS / "arith.hrs")


@pytest.fixture(scope="session")
def nonterm():
    return load_spec(CORPUS / "nonterm.hrs")


ACCEPTANCE = {}


@pytest.fixture(scope="session")
def acceptance():
    """Criterion id -> (ok, detail); printed as one line each at the end of the run."""
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE, key=int):
        ok, detail = ACCEPTANCE[cid]
        terminalreporter.write_line(f"criterion {cid}: {'PASS' if ok else 'FAIL'}  {detail}")
