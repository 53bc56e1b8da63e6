"""Token-to-term alignment.

Terms are matched case-insensitively as substrings of the identifier spans
in the code; every tokenizer token overlapping a matched span contributes
its attention mass to the term. The greedy character-span route makes the
mapping independent of how the tokenizer splits subwords, so two backends
with different vocabularies agree on which tokens belong to which term.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")

# compact keyword sets: enough to keep terms from latching onto control flow
_KEYWORDS = {
    "python": {
        "def", "return", "raise", "if", "elif", "else", "for", "while", "try",
        "except", "finally", "with", "as", "import", "from", "class", "pass",
        "break", "continue", "lambda", "yield", "not", "and", "or", "in", "is",
        "None", "True", "False", "global", "nonlocal", "del", "assert", "async",
        "await",
    },
    "java": {
        "public", "private", "protected", "static", "final", "void", "int",
        "long", "double", "float", "boolean", "char", "byte", "short", "new",
        "return", "throw", "throws", "if", "else", "for", "while", "do",
        "switch", "case", "break", "continue", "try", "catch", "finally",
        "class", "interface", "extends", "implements", "this", "super",
        "null", "true", "false", "import", "package", "instanceof", "var",
    },
    "javascript": {
        "function", "return", "throw", "if", "else", "for", "while", "do",
        "switch", "case", "break", "continue", "try", "catch", "finally",
        "class", "extends", "new", "this", "super", "null", "undefined",
        "true", "false", "const", "let", "var", "typeof", "instanceof",
        "async", "await", "yield", "of", "in", "delete", "void", "export",
        "import", "default",
    },
    "csharp": {
        "public", "private", "protected", "internal", "static", "void", "int",
        "long", "double", "float", "bool", "char", "byte", "short", "string",
        "object", "decimal", "new", "return", "throw", "if", "else", "for",
        "foreach", "while", "do", "switch", "case", "break", "continue",
        "try", "catch", "finally", "class", "interface", "this", "base",
        "null", "true", "false", "using", "namespace", "var", "async",
        "await", "is", "as",
    },
    "go": {
        "func", "return", "if", "else", "for", "range", "switch", "case",
        "break", "continue", "defer", "go", "select", "chan", "map", "type",
        "struct", "interface", "package", "import", "var", "const", "nil",
        "true", "false",
    },
}


@dataclass(frozen=True)
class Span:
    start: int
    end: int


def identifier_spans(code: str, language: str) -> list[Span]:
    keywords = _KEYWORDS.get(language, set())
    return [
        Span(m.start(), m.end())
        for m in _IDENT_RE.finditer(code)
        if m.group(0) not in keywords
    ]


def term_occurrences(code: str, language: str, term: str) -> list[Span]:
    """Absolute char ranges where term occurs inside identifier spans."""
    lowered = term.lower()
    if not lowered:
        return []
    out: list[Span] = []
    for span in identifier_spans(code, language):
        text = code[span.start : span.end].lower()
        pos = text.find(lowered)
        while pos != -1:
            out.append(Span(span.start + pos, span.start + pos + len(lowered)))
            pos = text.find(lowered, pos + 1)
    return out


def _overlaps(a: Span, start: int, end: int) -> bool:
    return a.start < end and start < a.end


def align_term_weights(
    code: str,
    language: str,
    terms: list[str],
    token_offsets: list[tuple[int, int]],
    token_mass: list[float],
) -> list[float]:
    """Per-term summed mass of the tokens overlapping the term's occurrences.

    Each token counts once per term even when several occurrences overlap it;
    terms with no aligned token get 0.
    """
    weights: list[float] = []
    for term in terms:
        occurrences = term_occurrences(code, language, term)
        if not occurrences:
            weights.append(0.0)
            continue
        mass = 0.0
        for (start, end), value in zip(token_offsets, token_mass):
            if end <= start:
                continue  # special tokens map to empty offsets
            if any(_overlaps(span, start, end) for span in occurrences):
                mass += value
        weights.append(mass)
    return weights
