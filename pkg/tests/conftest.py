from __future__ import annotations

import re
import shutil
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from archlint.adl import parse_architecture
from archlint.scan import scan_tree

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def car_arch():
    return parse_architecture((DATA / "car" / "car.arch").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def car_code():
    return scan_tree([DATA / "car" / "src"])


@pytest.fixture(scope="session")
def desktop_arch():
    return parse_architecture(
        (DATA / "desktop" / "desktop.arch").read_text(encoding="utf-8")
    )


@pytest.fixture(scope="session")
def desktop_code():
    return scan_tree([DATA / "desktop" / "src"])


@pytest.fixture(scope="session")
def car_solo_code():
    return scan_tree([DATA / "car_solo"])


@pytest.fixture()
def copy_fixture(tmp_path):
    def _copy(name: str) -> Path:
        dest = tmp_path / name
        shutil.copytree(DATA / name, dest)
        return dest

    return _copy


# One summary line per acceptance criterion, printed after the run.

_CRITERION = re.compile(r"test_criterion_(\d+)_")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines: dict[int, str] = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" not in report.nodeid:
                continue
            name = report.nodeid.rsplit("::", 1)[-1]
            match = _CRITERION.match(name)
            if match is None:
                continue
            number = int(match.group(1))
            status = "PASS" if outcome == "passed" else "FAIL"
            lines[number] = f"ACCEPTANCE {number} {status} {name}"
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
