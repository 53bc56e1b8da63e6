"""Error type shared by the code parsers."""

from __future__ import annotations

from typing import Optional


class DocParseError(ValueError):
    """Code could not be parsed into a single function definition."""

    def __init__(
        self,
        message: str,
        language: str,
        line: Optional[int] = None,
        col: Optional[int] = None,
    ):
        self.language = language
        self.line = line
        self.col = col
        where = f" at line {line}, col {col}" if line is not None else ""
        super().__init__(f"[{language}] {message}{where}")
