import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from carlson.coloring import Coloring, Rule  # noqa: E402
from carlson.core import Alphabet, make_word  # noqa: E402

AB = Alphabet("ab")


def as_dict(w):
    return dict(w.entries)


def from_dict(d):
    return make_word(sorted(d.items()))


@pytest.fixture
def ab():
    return AB


@pytest.fixture
def parity():
    return Coloring.from_rule(AB, Rule.make("size_mod"), 4)


@pytest.fixture
def const0():
    return Coloring.constant(AB, 4)


# One summary line per acceptance criterion, taken from the test's docstring.
_criteria: dict[str, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if not item.name.startswith("test_criterion_"):
        return
    title = (item.function.__doc__ or item.name).strip().splitlines()[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _criteria[item.name] = (title, "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda s: int(s.split("_")[2])):
        title, verdict = _criteria[name]
        terminalreporter.write_line(f"{verdict}  {title}")
