"""Masking lexer for brace-family sources (Java, C#, JavaScript, Go).

Produces a same-length copy of the source in which comment text is blanked
and string/char literal contents are blanked while the quote delimiters are
kept. Newlines survive so offsets and line numbers stay meaningful. The
scanners in this package operate on the masked text, so brace matching,
keyword searches, and identifier extraction never trip over literals.
"""

from __future__ import annotations

_C_FAMILY = {"java", "csharp", "javascript"}


def mask_source(code: str, language: str) -> str:
    out = list(code)
    n = len(code)
    i = 0

    def blank(start: int, end: int, keep_delims: bool = False) -> None:
        lo = start + 1 if keep_delims else start
        hi = end - 1 if keep_delims else end
        for k in range(lo, min(hi, n)):
            if out[k] != "\n":
                out[k] = " "

    while i < n:
        ch = code[i]
        nxt = code[i + 1] if i + 1 < n else ""
        if ch == "/" and nxt == "/":
            end = code.find("\n", i)
            end = n if end == -1 else end
            blank(i, end)
            i = end
        elif ch == "/" and nxt == "*":
            end = code.find("*/", i + 2)
            end = n if end == -1 else end + 2
            blank(i, end)
            i = end
        elif ch == "@" and nxt == '"' and language == "csharp":
            # verbatim string: "" is an escaped quote
            j = i + 2
            while j < n:
                if code[j] == '"':
                    if j + 1 < n and code[j + 1] == '"':
                        j += 2
                        continue
                    break
                j += 1
            blank(i + 1, min(j + 1, n), keep_delims=True)
            i = j + 1
        elif ch in "\"'":
            j = i + 1
            while j < n:
                if code[j] == "\\":
                    j += 2
                    continue
                if code[j] == ch or code[j] == "\n":
                    break
                j += 1
            blank(i, min(j + 1, n), keep_delims=True)
            i = j + 1
        elif ch == "`" and language in ("javascript", "go"):
            # JS template literal / Go raw string; interpolations are blanked too
            j = i + 1
            while j < n:
                if language == "javascript" and code[j] == "\\":
                    j += 2
                    continue
                if code[j] == "`":
                    break
                j += 1
            blank(i, min(j + 1, n), keep_delims=True)
            i = j + 1
        else:
            i += 1
    return "".join(out)


def offset_to_linecol(text: str, offset: int) -> tuple[int, int]:
    """1-based (line, column) of a character offset."""
    offset = max(0, min(offset, len(text)))
    line = text.count("\n", 0, offset) + 1
    last_nl = text.rfind("\n", 0, offset)
    return line, offset - last_nl
