"""Signature scanner for Go functions and methods."""

from __future__ import annotations

import re

from ._mask import mask_source, offset_to_linecol
from ._scanutil import IDENT_RE, match_bracket, skip_ws, split_top_level
from .errors import DocParseError

GO_KEYWORDS = {
    "break", "case", "chan", "const", "continue", "default", "defer", "else",
    "fallthrough", "for", "func", "go", "goto", "if", "import", "interface",
    "map", "package", "range", "return", "select", "struct", "switch", "type",
    "var", "nil", "true", "false", "iota",
}

_FUNC_RE = re.compile(r"\bfunc\b")


def _error(masked: str, pos: int, message: str) -> DocParseError:
    line, col = offset_to_linecol(masked, pos)
    return DocParseError(message, language="go", line=line, col=col)


def _top_level_funcs(masked: str) -> list[int]:
    """Offsets of "func" keywords that begin a top-level declaration.

    Depth counts every bracket kind, so function types inside parameter
    lists don't register; a declaration's "func" follows nothing, a closing
    brace, or a semicolon - which excludes function-typed results like
    "func Make() func(int) int".
    """
    matches = {m.start() for m in _FUNC_RE.finditer(masked)}
    positions = []
    depth = 0
    prev_significant = ""
    for i, ch in enumerate(masked):
        if ch in "{([":
            depth += 1
        elif ch in "})]":
            depth -= 1
        if i in matches and depth == 0 and prev_significant in ("", "}", ";"):
            positions.append(i)
        if not ch.isspace():
            prev_significant = ch
    return positions


def _leading_ident(entry: str) -> str | None:
    """The entry's first identifier, unless it is part of a qualified type."""
    m = IDENT_RE.match(entry)
    if not m or m.group(0) in GO_KEYWORDS:
        return None
    if entry[m.end() :].startswith("."):
        return None  # qualified type like context.Context
    return m.group(0)


def _is_named_entry(entry: str) -> bool:
    """True for "name Type" / "name ...Type" shapes (name plus a type)."""
    name = _leading_ident(entry)
    if name is None:
        return False
    return bool(entry[len(name) :].strip())


def parse_go(code: str) -> tuple[str, list[str], bool]:
    """Return (function_name, params, has_return) for one Go func/method."""
    masked = mask_source(code, "go")
    funcs = _top_level_funcs(masked)
    if not funcs:
        raise _error(masked, 0, "no function definition found")
    if len(funcs) > 1:
        raise _error(masked, funcs[1], "multiple function definitions")

    i = skip_ws(masked, funcs[0] + 4)
    if i < len(masked) and masked[i] == "(":  # method receiver, excluded
        i = skip_ws(masked, match_bracket(masked, i, "go") + 1)

    m = IDENT_RE.match(masked, i)
    if not m or m.group(0) in GO_KEYWORDS:
        raise _error(masked, i, "function name not found")
    name = m.group(0)
    i = skip_ws(masked, m.end())

    if i < len(masked) and masked[i] == "[":  # type parameter list
        i = skip_ws(masked, match_bracket(masked, i, "go") + 1)

    if i >= len(masked) or masked[i] != "(":
        raise _error(masked, i, "parameter list not found")
    pclose = match_bracket(masked, i, "go")
    entries = split_top_level(masked[i + 1 : pclose])

    params: list[str] = []
    if any(_is_named_entry(e) for e in entries):
        # named list: every entry starts with a name, single-identifier
        # entries share the type of a later entry (e.g. "a, b string")
        for entry in entries:
            pname = _leading_ident(entry)
            if pname and pname != "_":
                params.append(pname)

    i = skip_ws(masked, pclose + 1)
    if i < len(masked) and masked[i] == "(":
        rclose = match_bracket(masked, i, "go")
        has_return = bool(masked[i + 1 : rclose].strip())
        i = skip_ws(masked, rclose + 1)
    elif i < len(masked) and masked[i] == "{":
        has_return = False
    else:
        bopen = masked.find("{", i)
        if bopen == -1:
            raise _error(masked, i, "missing function body")
        has_return = bool(masked[i:bopen].strip())
        i = bopen

    if i >= len(masked) or masked[i] != "{":
        raise _error(masked, i, "missing function body")
    match_bracket(masked, i, "go")  # raises if unbalanced
    return name, params, has_return


def go_identifiers(code: str) -> list[str]:
    masked = mask_source(code, "go")
    return [
        m.group(0)
        for m in IDENT_RE.finditer(masked)
        if m.group(0) not in GO_KEYWORDS
    ]
