import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

sys.path.insert(0, str(ROOT / "tools"))

from bihomega import samples
from bihomega.bimodule import regular_bimodule


@pytest.fixture(scope="session")
def e0():
    return samples.build_e0()


@pytest.fixture(scope="session")
def zero1():
    return samples.build_zero1()


@pytest.fixture(scope="session")
def e1():
    return samples.build_e1()


@pytest.fixture(scope="session")
def e1_regular(e1):
    return regular_bimodule(e1)


@pytest.fixture(scope="session")
def e1_ctx():
    return samples.e1_rbf_context()


@pytest.fixture(scope="session")
def c2_ctx():
    return samples.c2_rbf_context()


@pytest.fixture(scope="session")
def e0_ctx():
    return samples.e0_rbf_context()


@pytest.fixture(scope="session")
def zero1_ctx():
    return samples.zero1_rbf_context()


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)
