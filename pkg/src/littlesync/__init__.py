"""littlesync: a tracing interpreter and live direct-manipulation
synchronizer for the little SVG language.

Programs evaluate to an SVG canvas whose numbers remember, as traces,
which source literals they came from.  Dragging a shape poses
value-trace equations; the solver and synthesizer turn those equations
into rewritten programs.
"""

from importlib import resources

from .errors import LittleError, LittleRuntimeError, LittleSyntaxError
from .parser import Program, parse_program
from .printer import unparse_program

__all__ = [
    "LittleError",
    "LittleRuntimeError",
    "LittleSyntaxError",
    "Program",
    "default_prelude",
    "parse_program",
    "parse_little",
    "program_names",
    "program_source",
    "unparse_program",
]

__version__ = "0.1.0"


def default_prelude() -> str:
    """Source text of the bundled prelude."""
    return resources.files(__package__).joinpath("prelude.little").read_text()


def parse_little(source: str, prelude: str | None = None) -> Program:
    """Parse user source with the bundled prelude (or a custom one)."""
    return parse_program(source, default_prelude() if prelude is None else prelude)


def program_names() -> list[str]:
    """Names of the bundled example programs."""
    root = resources.files(__package__).joinpath("programs")
    return sorted(p.name.removesuffix(".little") for p in root.iterdir() if p.name.endswith(".little"))


def program_source(name: str) -> str:
    """Source text of a bundled example program."""
    return resources.files(__package__).joinpath(f"programs/{name}.little").read_text()
