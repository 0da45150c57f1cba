import numpy as np
import pytest

from svo.composer import Composer
from svo.embeddings import EmbeddingTable
from svo.ingest import DepPair, Role, Vocabulary
from svo.stats import PpmiModel, accumulate_counts

S, O = Role.SUBJECT, Role.OBJECT


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        item.config._criteria.setdefault(marker.args[0], []).append(report.outcome)


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "_criteria", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        outcomes = results[num]
        if "failed" in outcomes:
            status = "FAIL"
        elif all(o == "skipped" for o in outcomes):
            status = "SKIP"
        else:
            status = "PASS"
        skipped = outcomes.count("skipped")
        note = f", {skipped} skipped" if skipped and status != "SKIP" else ""
        terminalreporter.write_line(
            f"criterion {num:>2}: {status}  ({len(outcomes)} check(s){note})")


# -- the toy fixture used throughout -------------------------------------------
# subj: (dog,chase)x2 (cat,chase)x1 (dog,eat)x1
# obj:  (cat,chase)x2 (dog,eat)x1 (dog,chase)x1
# embeddings: cat=(0.6,0.8) dog=(1,0) chase=(0,1) eat=(0.6,-0.8) bone=(0,1)


def toy_pairs():
    return (
        [DepPair("dog", "chase", S)] * 2 + [DepPair("cat", "chase", S)]
        + [DepPair("dog", "eat", S)]
        + [DepPair("cat", "chase", O)] * 2 + [DepPair("dog", "eat", O)]
        + [DepPair("dog", "chase", O)]
    )


@pytest.fixture
def toy_table():
    return accumulate_counts(toy_pairs())


@pytest.fixture
def toy_vocab():
    return Vocabulary(("cat", "dog"), frozenset({"chase", "eat"}))


@pytest.fixture
def toy_embeddings():
    words = ["cat", "dog", "chase", "eat", "bone"]
    vecs = np.array([[0.6, 0.8], [1.0, 0.0], [0.0, 1.0], [0.6, -0.8], [0.0, 1.0]])
    return EmbeddingTable(words, vecs)


@pytest.fixture
def toy_composer(toy_table, toy_vocab, toy_embeddings):
    return Composer(toy_vocab, PpmiModel(toy_table), toy_embeddings)

