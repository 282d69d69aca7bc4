import pytest


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: long-running acceptance criterion (minutes at full size)"
    )
