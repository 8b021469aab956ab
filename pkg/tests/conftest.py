import pathlib

import pytest

from acso.spacefile import load_space_file

CORPUS_DIR = pathlib.Path(__file__).resolve().parents[1] / "src" / "acso" / "corpus"
DATA_DIR = pathlib.Path(__file__).resolve().parent / "data"

# filled by the acceptance module; echoed after the run so the verdict
# lines survive output capture
acceptance_lines: list = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def corpus():
    """All bundled space files, keyed by file stem."""
    return {p.stem: load_space_file(p) for p in sorted(CORPUS_DIR.glob("*.json"))}


@pytest.fixture(scope="session")
def cp2(corpus):
    return corpus["cp2"].bundle


@pytest.fixture(scope="session")
def cp2bar(corpus):
    return corpus["cp2bar"].bundle


@pytest.fixture(scope="session")
def hp2(corpus):
    return corpus["hp2"].bundle


@pytest.fixture(scope="session")
def s1xwu(corpus):
    return corpus["s1xwu"].bundle
