from __future__ import annotations

import pytest

from primesums.analysis import hits_upto


@pytest.fixture(scope="session")
def hits_1e5():
    return hits_upto(100_000)


@pytest.fixture(scope="session")
def hits_1e6():
    return hits_upto(1_000_000)


# acceptance lines: criterion -> list of (item, ok, detail)
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


@pytest.fixture
def accept():
    def record(criterion: int, item: str, ok: bool, detail: str = "") -> bool:
        ACCEPTANCE.setdefault(criterion, []).append((item, bool(ok), detail))
        return bool(ok)
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for c in sorted(ACCEPTANCE):
        items = ACCEPTANCE[c]
        bad = [f"{i}: {d}" for i, ok, d in items if not ok]
        verdict = "PASS" if not bad else "FAIL"
        tail = f"{len(items)} checks" if not bad else "; ".join(bad)
        tr.write_line(f"[{verdict}] criterion {c:2d}: {tail}")
