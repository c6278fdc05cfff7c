import pytest
from hypothesis import settings

settings.register_profile("ci", deadline=None, print_blob=True)
settings.load_profile("ci")


def pytest_addoption(parser):
    parser.addoption("--run-dn1", action="store_true", default=False,
                     help="run the long DN1 search from A1-A4 plus A6-A8")


def pytest_configure(config):
    config.addinivalue_line("markers", "dn1: the long-running DN1 search")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-dn1"):
        return
    skip = pytest.mark.skip(reason="needs --run-dn1")
    for item in items:
        if "dn1" in item.keywords:
            item.add_marker(skip)
