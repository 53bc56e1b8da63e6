"""Completeness component: documented-element coverage of a function.

For Java/C#/Python/JavaScript the score is the ratio of documented elements
found in the comment (available) to documentable elements (overall), with
language-family weights: Java/C# count each exception and parameter twice
(presence + description) and the return once; Python/JS count the return
twice (type + description) and each parameter three times (presence +
description + type). A comment with no structural tags counts its leading
free-text description as one documentable element instead.

Go comments have no tag structure; the score is the binary leading-sentence
convention: 1 iff the comment starts with the function name.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Language
from .docparse import CommentDoc, DocElements
from .docparse.comments import strip_comment_markers

_WORD_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")


@dataclass(frozen=True)
class CompletenessBreakdown:
    overall: int
    available: int
    score: float
    diagnostics: tuple[str, ...] = ()


def round_significant(value: float, digits: int = 12) -> float:
    if value == 0.0:
        return 0.0
    return float(f"%.{digits}g" % value)


def _last_segment(name: str) -> str:
    return name.rsplit(".", 1)[-1]


def _match_exception(code_name: str, comment_names) -> str | None:
    """Exact name match, falling back to last-dotted-segment equality."""
    if code_name in comment_names:
        return code_name
    segment = _last_segment(code_name)
    for candidate in comment_names:
        if _last_segment(candidate) == segment:
            return candidate
    return None


def completeness(
    code_elems: DocElements, comment_doc: CommentDoc, language: Language
) -> CompletenessBreakdown:
    """Coverage ratio for the tag-structured languages (everything but Go)."""
    if language is Language.GO:
        raise ValueError("Go has no tag structure; use completeness_go")

    p_code = code_elems.params
    p_inter = [p for p in p_code if p in comment_doc.params]
    p_n_desc = sum(1 for p in p_inter if comment_doc.params[p].has_description)
    p_n_type = sum(1 for p in p_inter if comment_doc.params[p].has_type)

    e_code = sorted(code_elems.exceptions)
    matched_exceptions = {}
    for e in e_code:
        hit = _match_exception(e, comment_doc.exceptions)
        if hit is not None:
            matched_exceptions[e] = comment_doc.exceptions[hit]
    e_inter = len(matched_exceptions)
    e_n_desc = sum(1 for d in matched_exceptions.values() if d.has_description)

    r_code = code_elems.has_return
    ret = comment_doc.return_doc
    count_desc = int(comment_doc.count_description)
    desc_term = int(comment_doc.has_description and comment_doc.count_description)

    if language in (Language.JAVA, Language.CSHARP):
        overall = 2 * len(e_code) + int(r_code) + 2 * len(p_code) + count_desc
        available = (
            (e_inter + e_n_desc)
            + int(r_code and ret.present)
            + (len(p_inter) + p_n_desc)
            + desc_term
        )
    else:  # Python / JavaScript
        overall = 2 * len(e_code) + 2 * int(r_code) + 3 * len(p_code) + count_desc
        available = (
            (e_inter + e_n_desc)
            + int(r_code and ret.present) * (int(ret.has_type) + int(ret.has_description))
            + (len(p_inter) + p_n_desc + p_n_type)
            + desc_term
        )

    diagnostics = []
    for name in comment_doc.params:
        if name not in p_code:
            diagnostics.append(f"documented param {name!r} not in signature")
    matched_names = {_last_segment(n) for n in e_code}
    for name in comment_doc.exceptions:
        if name not in code_elems.exceptions and _last_segment(name) not in matched_names:
            diagnostics.append(f"documented exception {name!r} not raised in code")
    if ret.present and not r_code:
        diagnostics.append("return documented but function returns nothing")

    if available > overall:
        diagnostics.append(
            f"available {available} exceeds overall {overall}; clamped"
        )
        available = overall

    score = 1.0 if overall == 0 else round_significant(available / overall)
    return CompletenessBreakdown(overall, available, score, tuple(diagnostics))


def completeness_go(comment: str, function_name: str) -> CompletenessBreakdown:
    """Binary Go rule: the comment must open with the function's name.

    The name has to be followed by a word boundary, so "Getter ..." does not
    pass for a function named "Get".
    """
    text = strip_comment_markers(comment, "go").lstrip()
    ok = bool(function_name) and text.startswith(function_name)
    if ok and len(text) > len(function_name):
        ok = text[len(function_name)] not in _WORD_CHARS
    available = int(ok)
    return CompletenessBreakdown(overall=1, available=available, score=float(available))
