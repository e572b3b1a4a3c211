from __future__ import annotations

import pytest

from famm.seed import load_seed_model, seed_model_bytes


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(name): named acceptance criterion; prints one pass/fail line"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and report.when == "call":
        name = marker.args[0] if marker.args else item.name
        status = "PASS" if report.passed else "FAIL"
        terminal = item.config.pluginmanager.get_plugin("terminalreporter")
        if terminal is not None:
            terminal.write_line(f"[acceptance] {status}: {name}")


@pytest.fixture(scope="session")
def seed_model():
    return load_seed_model()


@pytest.fixture
def seed_model_file(tmp_path):
    path = tmp_path / "model.json"
    path.write_bytes(seed_model_bytes())
    return path
