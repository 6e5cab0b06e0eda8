import pathlib

import pytest

from crn2dsd import CompileOptions, compile_crn, parse_crn

EXAMPLE_PATH = (pathlib.Path(__file__).resolve().parents[1]
                / "src" / "crn2dsd" / "data" / "gate_network.crn")


@pytest.fixture(scope="session")
def example_path() -> pathlib.Path:
    return EXAMPLE_PATH


@pytest.fixture(scope="session")
def example_crn():
    return parse_crn(EXAMPLE_PATH.read_text())


@pytest.fixture()
def example_system(example_crn):
    return compile_crn(example_crn, CompileOptions(
        initial={"A0": 20, "A1": 20, "B0": 20, "B1": 20, "Z": 20}))
