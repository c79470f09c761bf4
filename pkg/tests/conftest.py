import numpy as np
import pytest

from gsqc.basis import build_basis
from gsqc.hamiltonian import assemble


def dense_spectrum(spec, prune=True):
    """Independent oracle: numpy eigvalsh on the densified Hamiltonian."""
    basis = build_basis(spec, prune=prune)
    H = assemble(spec, basis).toarray()
    return np.linalg.eigvalsh(H)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", help="run sparse solves that take minutes")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
