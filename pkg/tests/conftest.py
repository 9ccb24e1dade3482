import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hyperemb import EpsoParams, Graph, is_connected

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_connected_graph(rng, n, p=0.3):
    """Random spanning tree plus Erdos-Renyi extras; always connected."""
    pairs = [(int(rng.integers(0, k)), k) for k in range(1, n)]
    iu, ju = np.triu_indices(n, 1)
    extra = rng.random(iu.size) < p
    pairs += list(zip(iu[extra].tolist(), ju[extra].tolist()))
    g = Graph.from_edges(n, pairs)
    assert is_connected(g)
    return g


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def pso_params():
    return EpsoParams(zeta=1.0, n_nodes=100, m=2.0, ell=0.0, beta=2.0 / 3.0, temperature=0.3)


# --- acceptance summary ---------------------------------------------------------

_ACCEPTANCE_LINES = {}


@pytest.fixture
def acceptance_line():
    """Record ``(criterion, passed, detail)``; printed at the end of the run."""
    def record(number, passed, detail):
        _ACCEPTANCE_LINES[number] = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(_ACCEPTANCE_LINES[k])
