"""Signature-and-statement scanners for Java, C#, and JavaScript.

These operate on masked source (see _mask): brace matching and keyword
searches cannot be fooled by literals or comments. The scanners recognise
one top-level function/method per snippet, which is the module's input
contract. Known limits, accepted for this extraction task: Java/C# lambda
bodies are scanned as part of the enclosing method, and JS method shorthand
inside object literals counts toward the outer function.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ._mask import mask_source, offset_to_linecol
from ._scanutil import (
    IDENT_RE,
    ident_ending_at,
    match_bracket,
    skip_ws,
    skip_ws_back,
    split_top_level,
)
from .errors import DocParseError

_MODIFIERS = {
    "java": {
        "public", "private", "protected", "static", "final", "abstract",
        "synchronized", "native", "strictfp", "default", "sealed", "transient",
        "volatile",
    },
    "csharp": {
        "public", "private", "protected", "internal", "static", "sealed",
        "abstract", "virtual", "override", "async", "extern", "unsafe",
        "partial", "readonly", "new",
    },
}

_PARAM_MODIFIERS_CSHARP = {"ref", "out", "in", "params", "this", "scoped", "readonly"}

_THROW_RE = re.compile(
    r"\bthrow\b\s*(?:new\s+)?([A-Za-z_$][\w$]*(?:\.[A-Za-z_$][\w$]*)*)"
)
_RETURN_RE = re.compile(r"\breturn\b")

_JS_STMT_KEYWORDS = {
    "if", "for", "while", "switch", "catch", "return", "do", "else", "try",
    "new", "typeof", "delete", "void", "in", "of", "throw", "case", "with",
}

KEYWORDS = {
    "java": {
        "abstract", "assert", "boolean", "break", "byte", "case", "catch",
        "char", "class", "const", "continue", "default", "do", "double",
        "else", "enum", "extends", "final", "finally", "float", "for", "goto",
        "if", "implements", "import", "instanceof", "int", "interface",
        "long", "native", "new", "package", "private", "protected", "public",
        "return", "short", "static", "strictfp", "super", "switch",
        "synchronized", "this", "throw", "throws", "transient", "try", "void",
        "volatile", "while", "var", "record", "sealed", "permits", "yield",
        "true", "false", "null",
    },
    "csharp": {
        "abstract", "as", "base", "bool", "break", "byte", "case", "catch",
        "char", "checked", "class", "const", "continue", "decimal", "default",
        "delegate", "do", "double", "else", "enum", "event", "explicit",
        "extern", "false", "finally", "fixed", "float", "for", "foreach",
        "goto", "if", "implicit", "in", "int", "interface", "internal", "is",
        "lock", "long", "namespace", "new", "null", "object", "operator",
        "out", "override", "params", "private", "protected", "public",
        "readonly", "ref", "return", "sbyte", "sealed", "short", "sizeof",
        "stackalloc", "static", "string", "struct", "switch", "this", "throw",
        "true", "try", "typeof", "uint", "ulong", "unchecked", "unsafe",
        "ushort", "using", "virtual", "void", "volatile", "while", "var",
        "async", "await", "nameof", "when", "where", "yield", "record",
        "init", "required", "get", "set",
    },
    "javascript": {
        "break", "case", "catch", "class", "const", "continue", "debugger",
        "default", "delete", "do", "else", "export", "extends", "finally",
        "for", "function", "if", "import", "in", "instanceof", "new",
        "return", "super", "switch", "this", "throw", "try", "typeof", "var",
        "void", "while", "with", "yield", "let", "static", "async", "await",
        "of", "get", "set", "true", "false", "null", "undefined",
    },
}


@dataclass
class ScanResult:
    name: str
    params: list[str]
    exceptions: list[str]
    has_return: bool


def _error(masked: str, pos: int, message: str, language: str) -> DocParseError:
    line, col = offset_to_linecol(masked, pos)
    return DocParseError(message, language=language, line=line, col=col)


def _strip_angle_groups(text: str) -> str:
    out: list[str] = []
    depth = 0
    for ch in text:
        if ch == "<":
            depth += 1
        elif ch == ">" and depth > 0:
            depth -= 1
        elif depth == 0:
            out.append(ch)
    return "".join(out)


def _has_return_with_expr(masked_body: str, newline_terminates: bool) -> bool:
    for m in _RETURN_RE.finditer(masked_body):
        j = m.end()
        while j < len(masked_body):
            ch = masked_body[j]
            if ch == "\n" and newline_terminates:
                break
            if not ch.isspace():
                break
            j += 1
        if j < len(masked_body) and masked_body[j] not in ";}" and not (
            masked_body[j] == "\n" and newline_terminates
        ):
            return True
    return False


def _throw_names(masked_body: str) -> list[str]:
    return [m.group(1) for m in _THROW_RE.finditer(masked_body)]


def _check_single_definition(masked: str, after: int, language: str) -> None:
    rest = masked[after:]
    if re.search(r"[A-Za-z_$][\w$]*\s*\([^()]*\)\s*(\{|=>)", rest):
        raise _error(masked, after, "multiple function definitions", language)


# ---------------------------------------------------------------- Java / C#


def _skip_decorations(masked: str, i: int, language: str) -> int:
    while True:
        i = skip_ws(masked, i)
        if language == "java" and i < len(masked) and masked[i] == "@":
            m = IDENT_RE.match(masked, i + 1)
            if not m:
                raise _error(masked, i, "stray '@'", language)
            i = skip_ws(masked, m.end())
            if i < len(masked) and masked[i] == "(":
                i = match_bracket(masked, i, language) + 1
        elif language == "csharp" and i < len(masked) and masked[i] == "[":
            i = match_bracket(masked, i, language) + 1
        else:
            return i


def _java_like_param_name(entry: str, language: str) -> str | None:
    if language == "csharp":
        entry = split_top_level(entry, "=", angle_brackets=True)[0]
    entry = entry.replace("...", " ")
    idents = [
        m.group(0)
        for m in IDENT_RE.finditer(_strip_angle_groups(entry))
        if m.group(0) not in KEYWORDS[language]
    ]
    if not idents:
        return None
    return idents[-1]


def scan_java_like(code: str, language: str) -> ScanResult:
    masked = mask_source(code, language)
    i = _skip_decorations(masked, 0, language)
    if i >= len(masked):
        raise _error(masked, 0, "no function definition found", language)

    popen = masked.find("(", i)
    if popen == -1:
        raise _error(masked, i, "no function definition found", language)
    pclose = match_bracket(masked, popen, language)

    j = skip_ws_back(masked, popen - 1)
    if j >= 0 and masked[j] == ">":
        depth = 0
        while j >= 0:
            if masked[j] == ">":
                depth += 1
            elif masked[j] == "<":
                depth -= 1
                if depth == 0:
                    break
            j -= 1
        j = skip_ws_back(masked, j - 1)
    name = ident_ending_at(masked, j) if j >= 0 else None
    if not name or name in KEYWORDS[language]:
        raise _error(masked, max(j, 0), "function name not found", language)
    name_start = j - len(name) + 1

    type_region = _strip_angle_groups(masked[i:name_start])
    type_tokens = [
        t for t in IDENT_RE.findall(type_region) if t not in _MODIFIERS[language]
    ]
    declared_type = type_tokens[0] if type_tokens else None
    non_void = declared_type is not None and declared_type.lower() != "void"

    # body: first '{' block, or C# expression body "=> expr;", or bare ';'
    k = pclose + 1
    body = ""
    body_end = len(masked)
    while k < len(masked):
        ch = masked[k]
        if ch == "{":
            close = match_bracket(masked, k, language)
            body = masked[k + 1 : close]
            body_end = close + 1
            break
        if ch == ";":
            body_end = k + 1
            break
        if language == "csharp" and ch == "=" and masked[k : k + 2] == "=>":
            semi = masked.find(";", k + 2)
            body_end = len(masked) if semi == -1 else semi + 1
            body = masked[k + 2 : body_end]
            break
        k += 1
    else:
        raise _error(masked, pclose, "missing function body", language)

    _check_single_definition(masked, body_end, language)

    params = []
    for entry in split_top_level(masked[popen + 1 : pclose], angle_brackets=True):
        pname = _java_like_param_name(entry, language)
        if pname:
            params.append(pname)

    has_return = non_void or _has_return_with_expr(body, newline_terminates=False)
    return ScanResult(name, params, _throw_names(body), has_return)


# ------------------------------------------------------------------ JavaScript


_JS_FUNC_DECL = re.compile(
    r"(?:export\s+(?:default\s+)?)?(?:async\s+)?function\s*\*?\s*"
    r"([A-Za-z_$][\w$]*)?\s*\("
)
_JS_ASSIGNED = re.compile(
    r"(?:export\s+)?(?:const|let|var)\s+([A-Za-z_$][\w$]*)\s*=\s*(?:async\s+)?"
    r"(?:(function)\s*\*?\s*(?:[A-Za-z_$][\w$]*)?\s*\(|(\()|([A-Za-z_$][\w$]*)\s*=>)"
)
_JS_METHOD = re.compile(r"(?:async\s+)?([A-Za-z_$][\w$]*)\s*\(")


def _js_binding_names(entry: str) -> list[str]:
    entry = entry.strip()
    if not entry:
        return []
    if entry.startswith("..."):
        return _js_binding_names(entry[3:])
    if entry[0] in "{[":
        try:
            close = match_bracket(entry, 0, "javascript")
        except DocParseError:
            return []
        names: list[str] = []
        for piece in split_top_level(entry[1:close]):
            piece = split_top_level(piece, "=")[0] if "=" in piece else piece
            if ":" in piece and piece.lstrip()[0] not in "{[":
                parts = split_top_level(piece, ":")
                piece = parts[-1] if len(parts) > 1 else piece
            names.extend(_js_binding_names(piece))
        return names
    before_default = split_top_level(entry, "=")[0]
    m = IDENT_RE.search(before_default)
    return [m.group(0)] if m else []


def _js_excluded_spans(body: str) -> list[tuple[int, int]]:
    """Brace-delimited bodies of nested functions and arrow functions."""
    spans: list[tuple[int, int]] = []
    for m in re.finditer(r"\bfunction\b", body):
        popen = body.find("(", m.end())
        if popen == -1:
            continue
        try:
            pclose = match_bracket(body, popen, "javascript")
            bopen = skip_ws(body, pclose + 1)
            if bopen < len(body) and body[bopen] == "{":
                spans.append((bopen, match_bracket(body, bopen, "javascript") + 1))
        except DocParseError:
            continue
    for m in re.finditer(r"=>", body):
        j = skip_ws(body, m.end())
        if j < len(body) and body[j] == "{":
            try:
                spans.append((j, match_bracket(body, j, "javascript") + 1))
            except DocParseError:
                continue
    spans.sort()
    merged: list[tuple[int, int]] = []
    for s, e in spans:
        if merged and s < merged[-1][1]:
            merged[-1] = (merged[-1][0], max(e, merged[-1][1]))
        else:
            merged.append((s, e))
    return merged


def _strip_excluded(body: str) -> str:
    out = []
    last = 0
    for s, e in _js_excluded_spans(body):
        out.append(body[last:s])
        out.append(re.sub(r"[^\n]", " ", body[s:e]))
        last = e
    out.append(body[last:])
    return "".join(out)


def scan_javascript(code: str) -> ScanResult:
    masked = mask_source(code, "javascript")
    i = skip_ws(masked, 0)

    name = ""
    popen = -1
    single_param: str | None = None
    arrow_expected = False

    m = _JS_ASSIGNED.match(masked, i)
    if m:
        name = m.group(1)
        if m.group(4):
            single_param = m.group(4)
            arrow_expected = True
        else:
            popen = m.end() - 1
            arrow_expected = m.group(2) is None  # bare '(' may start an arrow
    else:
        m = _JS_FUNC_DECL.match(masked, i)
        if m:
            name = m.group(1) or ""
            popen = m.end() - 1
        else:
            m = _JS_METHOD.match(masked, i)
            if m and m.group(1) not in _JS_STMT_KEYWORDS and m.group(1) != "function":
                name = m.group(1)
                popen = m.end() - 1
            else:
                raise _error(masked, i, "no function definition found", "javascript")

    is_arrow = single_param is not None
    if single_param is not None:
        params_src = single_param
        after = m.end()
    else:
        pclose = match_bracket(masked, popen, "javascript")
        params_src = masked[popen + 1 : pclose]
        after = skip_ws(masked, pclose + 1)
        if masked[after : after + 2] == "=>":
            after += 2
            is_arrow = True
        elif arrow_expected:
            raise _error(masked, after, "expected '=>' after parameter list", "javascript")

    j = skip_ws(masked, after)
    if j < len(masked) and masked[j] == "{":
        close = match_bracket(masked, j, "javascript")
        body = masked[j + 1 : close]
        body_end = close + 1
        implicit_return = False
    else:
        if not is_arrow:
            raise _error(masked, j, "missing function body", "javascript")
        semi = masked.find(";", j)
        body_end = len(masked) if semi == -1 else semi + 1
        body = masked[j:body_end]
        implicit_return = bool(body.strip(" ;\n\t"))

    _check_single_definition(masked, body_end, "javascript")

    params: list[str] = []
    for entry in split_top_level(params_src):
        params.extend(_js_binding_names(entry))

    visible = _strip_excluded(body)
    has_return = implicit_return or _has_return_with_expr(visible, newline_terminates=True)
    return ScanResult(name, params, _throw_names(visible), has_return)
