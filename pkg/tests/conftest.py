import pytest

from littlesync import default_prelude, parse_little, program_source
from littlesync.canvas import index_canvas
from littlesync.evaluator import eval_program


@pytest.fixture(scope="session")
def prelude() -> str:
    return default_prelude()


@pytest.fixture(scope="session")
def wave():
    return parse_little(program_source("sineWaveOfBoxes"))


@pytest.fixture(scope="session")
def wave_canvas(wave):
    return index_canvas(eval_program(wave))


@pytest.fixture(scope="session")
def square():
    return parse_little(program_source("overconstrainedSquare"))
