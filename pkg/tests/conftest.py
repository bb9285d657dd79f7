import re

import pytest

from emosent.corpus import split
from emosent.synth import synthetic_sentiment_corpus

# ------------------------------------------------------------------ fixtures


@pytest.fixture(scope="session")
def synth_corpus():
    """The 20k-post synthetic corpus used by the end-to-end checks."""
    return synthetic_sentiment_corpus(20_000, seed=7)


@pytest.fixture(scope="session")
def synth_split(synth_corpus):
    """15k train / 5k fixed test split of the synthetic corpus."""
    return split(synth_corpus, 0.25, seed=11)


# ------------------------------------------- acceptance criteria summary

_results: dict[str, tuple[bool, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.name.startswith("test_criterion_"):
        reason = ""
        if rep.failed and call.excinfo is not None:
            reason = str(call.excinfo.value).splitlines()[0][:100]
        _results[item.name] = (rep.passed, reason)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return

    def criterion_number(name: str) -> int:
        m = re.search(r"test_criterion_(\d+)", name)
        return int(m.group(1)) if m else 999

    terminalreporter.section("acceptance criteria")
    for name in sorted(_results, key=criterion_number):
        passed, reason = _results[name]
        line = f"{'PASS' if passed else 'FAIL'}  {name}"
        if reason:
            line += f"  [{reason}]"
        terminalreporter.write_line(line)
