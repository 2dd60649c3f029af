import os

import pytest

ACCEPTANCE_LINES: list[str] = []


def pytest_addoption(parser):
    parser.addoption(
        "--large",
        action="store_true",
        default=False,
        help="run the order-12 tier (slow, memory-hungry)",
    )


@pytest.fixture(scope="session")
def large_tier(request) -> bool:
    return request.config.getoption("--large") or bool(
        os.environ.get("MATCHCONN_LARGE")
    )


@pytest.fixture
def verdict():
    """Record one acceptance line and assert it; the summary hook replays them."""

    def _verdict(num: int, name: str, ok: bool, detail: str = "") -> None:
        tag = "PASS" if ok else "FAIL"
        suffix = f": {detail}" if detail else ""
        ACCEPTANCE_LINES.append(f"criterion {num:2d} {tag} {name}{suffix}")
        assert ok, f"criterion {num} ({name}) failed{suffix}"

    return _verdict


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
