import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pairbounds.pair_graph import TrainingGraph  # noqa: E402

ACCEPTANCE_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, title): exit criterion from the acceptance list")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = ACCEPTANCE_RESULTS.get(report.nodeid)
    if marker is not None:
        marker["outcome"] = "PASS" if report.passed else "FAIL"


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            ACCEPTANCE_RESULTS[item.nodeid] = {"n": m.args[0], "title": m.args[1], "outcome": "NOT RUN"}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for res in sorted(ACCEPTANCE_RESULTS.values(), key=lambda r: r["n"]):
        terminalreporter.write_line(f"criterion {res['n']}: {res['outcome']}  {res['title']}")


def random_graph(rng, n, m):
    iu, ju = np.triu_indices(n, 1)
    pick = np.sort(rng.choice(iu.size, size=min(m, iu.size), replace=False))
    return TrainingGraph(n, tuple(zip(iu[pick].tolist(), ju[pick].tolist())))


def graph_corpus(count=1000, max_n=200, seed=1234):
    """Random simple graphs with 2 <= n <= max_n and up to 3n edges."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(2, max_n + 1))
        m = int(rng.integers(0, min(n * (n - 1) // 2, 3 * n) + 1))
        out.append(random_graph(rng, n, m))
    return out


@pytest.fixture(scope="session")
def corpus():
    return graph_corpus()
