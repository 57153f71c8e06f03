import sys
from importlib import resources
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from onto2cdm.ontology import parse_ontology, validate  # noqa: E402

DATA = Path(__file__).parent / "data"

# filled in by test_acceptance; printed after the run
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def mini_tao_path():
    return Path(str(resources.files("onto2cdm") / "data" / "mini-tao.onto"))


@pytest.fixture
def mini_tao(mini_tao_path):
    onto, diags = parse_ontology(mini_tao_path.read_text(encoding="utf-8"))
    assert not [d for d in diags if d.is_error]
    assert not [d for d in validate(onto) if d.is_error]
    return onto


@pytest.fixture(scope="session")
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
