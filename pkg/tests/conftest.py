import numpy as np
import pytest

from wordle_amuse import synth


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for outcome in ("passed", "failed", "skipped"):
        for report in terminalreporter.stats.get(outcome, []):
            if getattr(report, "when", "call") != "call":
                continue
            if "test_acceptance.py" not in str(report.nodeid):
                continue
            name = report.nodeid.split("::")[-1]
            lines.append((name, outcome.upper()))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, outcome in sorted(lines):
            terminalreporter.write_line(f"{outcome:<8} {name}")


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    """A compact synthetic corpus for CLI and pipeline tests."""
    root = tmp_path_factory.mktemp("small_corpus")
    return synth.build_corpus(root, n_games=1200, n_words=300, dim=12, seed=11)


@pytest.fixture(scope="session")
def oov_corpus(tmp_path_factory):
    """Corpus whose distance embeddings drop a slice of the vocabulary."""
    root = tmp_path_factory.mktemp("oov_corpus")
    return synth.build_corpus(root, n_games=400, n_words=250, dim=12, seed=23,
                              glove_oov_fraction=0.15)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
