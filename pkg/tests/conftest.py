import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from logic_inference.rules import default_catalog  # noqa: E402
from logic_inference.synthesis import GenerationConfig, generate_problems  # noqa: E402


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def problems_200(catalog):
    return generate_problems(GenerationConfig(num_problems=200, seed=7), catalog)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
