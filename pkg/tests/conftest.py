"""Shared pytest plumbing: one PASS/FAIL line per acceptance criterion.

Tests in test_acceptance.py carry a ``criterion`` marker; their outcomes are
collected here and printed as a dedicated terminal section, so the release
gate is readable at a glance even inside a long -v run.
"""

import pytest

_OUTCOMES: dict = {}
_DETAILS: dict = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(id): tie a test to one acceptance criterion"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    out = yield
    rep = out.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    cid = mark.args[0]
    if rep.when == "call":
        _OUTCOMES[cid] = rep.outcome
    elif rep.when == "setup" and rep.outcome != "passed":
        _OUTCOMES[cid] = rep.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_OUTCOMES, key=lambda c: int(c[1:])):
        word = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(
            _OUTCOMES[cid], _OUTCOMES[cid].upper()
        )
        line = f"{cid} {word}"
        if cid in _DETAILS:
            line += f" - {_DETAILS[cid]}"
        terminalreporter.write_line(line)


@pytest.fixture
def note():
    """Attach a short detail string to a criterion's summary line."""

    def _note(cid, text):
        _DETAILS[cid] = text

    return _note
