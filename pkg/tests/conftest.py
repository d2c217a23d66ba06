from functools import lru_cache

import pytest
from hypothesis import settings

from lagspec.contfrac import make_context
from lagspec.cylinders import build_cylinders
from lagspec.graphs import build_product
from lagspec.spectra import spectra_pair

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@lru_cache(maxsize=None)
def cylinders(k, q):
    return build_cylinders(make_context(k), q)


@lru_cache(maxsize=None)
def product(k, q, compress=False):
    return build_product(cylinders(k, q), compress=compress)


@lru_cache(maxsize=None)
def pair(k, q):
    return spectra_pair(cylinders(k, q), product(k, q, True))


@pytest.fixture
def ctx2():
    return make_context(2)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
