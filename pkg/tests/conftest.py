from pathlib import Path

import pytest

from axf import parse_program, parse_state

ROOT = Path(__file__).resolve().parent.parent
PATH_PROGRAM = ROOT / "samples" / "path.axp"
PATH_STATE = ROOT / "samples" / "path_state.st"
GOLDEN_TRANSFORMED = ROOT / "tests" / "golden" / "path_transformed.axp"


@pytest.fixture(scope="session")
def path_source() -> str:
    return PATH_PROGRAM.read_text(encoding="utf-8")


@pytest.fixture()
def path_program(path_source):
    return parse_program(path_source, str(PATH_PROGRAM))


@pytest.fixture()
def path_state(path_program):
    return parse_state(
        PATH_STATE.read_text(encoding="utf-8"), path_program, str(PATH_STATE)
    )
