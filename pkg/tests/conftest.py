import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import LINES  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--exhaustive", action="store_true",
                     help="widen the exhaustive d-separation check to two bidirected edges (several minutes)")


def pytest_terminal_summary(terminalreporter):
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES):
            terminalreporter.write_line(line)
