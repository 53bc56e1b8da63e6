"""Small scanning helpers shared by the Java/C#/JavaScript/Go scanners."""

from __future__ import annotations

import re

from ._mask import offset_to_linecol
from .errors import DocParseError

IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")

_PAIRS = {"(": ")", "[": "]", "{": "}"}


def skip_ws(text: str, i: int) -> int:
    while i < len(text) and text[i].isspace():
        i += 1
    return i


def skip_ws_back(text: str, i: int) -> int:
    """Index of the last non-space char at or before i, or -1."""
    while i >= 0 and text[i].isspace():
        i -= 1
    return i


def match_bracket(text: str, open_pos: int, language: str) -> int:
    """Index of the bracket matching text[open_pos]; raises on imbalance."""
    opener = text[open_pos]
    closer = _PAIRS[opener]
    depth = 0
    for i in range(open_pos, len(text)):
        ch = text[i]
        if ch == opener:
            depth += 1
        elif ch == closer:
            depth -= 1
            if depth == 0:
                return i
    line, col = offset_to_linecol(text, open_pos)
    raise DocParseError(f"unbalanced {opener!r}", language=language, line=line, col=col)


def split_top_level(text: str, sep: str = ",", angle_brackets: bool = False) -> list[str]:
    """Split on sep occurrences not nested in (), [], {} (optionally <>)."""
    parts: list[str] = []
    depth = 0
    angle = 0
    start = 0
    for i, ch in enumerate(text):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        elif angle_brackets and ch == "<":
            angle += 1
        elif angle_brackets and ch == ">" and angle > 0:
            angle -= 1
        elif ch == sep and depth == 0 and angle == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p for p in (part.strip() for part in parts) if p]


def ident_ending_at(text: str, end: int) -> str | None:
    """Identifier whose last character sits at index end, or None."""
    start = end
    while start >= 0 and re.match(r"[A-Za-z0-9_$]", text[start]):
        start -= 1
    candidate = text[start + 1 : end + 1]
    return candidate if IDENT_RE.fullmatch(candidate) else None
