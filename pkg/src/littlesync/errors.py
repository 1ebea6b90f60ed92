"""Error types shared across the pipeline."""

from __future__ import annotations

from typing import Optional


class LittleError(Exception):
    """Base class for errors raised while processing a little program."""

    def __init__(self, message: str, pos: Optional[tuple[int, int]] = None):
        self.message = message
        self.pos = pos
        super().__init__(str(self))

    def __str__(self) -> str:
        if self.pos is not None:
            line, col = self.pos
            return f"{line}:{col}: {self.message}"
        return self.message


class LittleSyntaxError(LittleError):
    pass


class LittleRuntimeError(LittleError):
    pass
