from pathlib import Path

import pytest

from treecoder import load_dictionaries, parse_sexpr

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_paths() -> dict[str, str]:
    return {name: str(FIXTURES / f"{name}.txt") for name in ("actors", "agents", "verbs", "discard")}


@pytest.fixture(scope="session")
def store():
    return load_dictionaries(**fixture_paths())


@pytest.fixture(scope="session")
def section5_text() -> str:
    return (FIXTURES / "section5.mrg").read_text()


def tree(text, date=None):
    return parse_sexpr(text, "t", date)
