"""
Test configuration and fixtures for the harmonic chain test suite.
"""

import os
import sys

import pytest

# Add the package directory to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from harmonic_chain.config import WORKERS_ENV, reset_settings
from harmonic_chain.models import ChainParams, Regime


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Every test starts from the default single-worker settings."""
    monkeypatch.delenv(WORKERS_ENV, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def small_chain():
    """Short quantum chain at moderate temperature."""
    return ChainParams(n_atoms=12, alpha=0.05, eta=0.4)


@pytest.fixture
def ground_state():
    return Regime.quantum_zero_t()


@pytest.fixture
def classical_regime():
    return Regime.classical(0.01)


@pytest.fixture
def run_cli(capsys):
    """Run the command line entry point and return (exit code, stdout, stderr)."""
    from harmonic_chain.main import run

    def _run(*argv):
        code = run([str(arg) for arg in argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return _run


# Pytest configuration
def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "unit: mark test as unit test")
    config.addinivalue_line("markers", "cli: mark test as command line test")
    config.addinivalue_line("markers", "acceptance: mark test as an end-to-end physics check")
    config.addinivalue_line("markers", "performance: mark test as performance test")
    config.addinivalue_line("markers", "slow: mark test as slow running")


def pytest_collection_modifyitems(config, items):
    """Modify test collection to add markers based on test file names."""
    for item in items:
        if "test_cli" in item.nodeid:
            item.add_marker(pytest.mark.cli)
        elif "test_acceptance" in item.nodeid:
            item.add_marker(pytest.mark.acceptance)
            item.add_marker(pytest.mark.slow)
        elif "test_performance" in item.nodeid:
            item.add_marker(pytest.mark.performance)
            item.add_marker(pytest.mark.slow)
        else:
            item.add_marker(pytest.mark.unit)

        # Tests that build large chains are slow wherever they live
        if any(keyword in item.name.lower() for keyword in ["large", "memory", "monte_carlo"]):
            item.add_marker(pytest.mark.slow)
