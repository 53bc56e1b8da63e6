"""Structure extraction from function source code and structured comments.

Two pure operations:

  extract_code_elements(code, language) -> DocElements
      parameter names, raised/thrown exception names, whether the function
      returns a value, and the function name.

  parse_comment(comment, language) -> CommentDoc
      the documented params/exceptions/return plus the leading free-text
      description, per the tag grammar in data/tag_grammars.json.

Python code is parsed with the stdlib ast module; Java, C#, JavaScript and
Go use masked-text scanners (see _cfamily/_go for their documented limits).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..corpus import Language
from ._cfamily import KEYWORDS as _CF_KEYWORDS
from ._cfamily import scan_java_like, scan_javascript
from ._go import go_identifiers, parse_go
from ._mask import mask_source
from ._python import parse_python, python_identifiers
from ._scanutil import IDENT_RE
from .comments import (
    CommentDoc,
    ExceptionDoc,
    ParamDoc,
    ReturnDoc,
    normalize_doc_name,
    parse_comment,
    strip_comment_markers,
)
from .errors import DocParseError

__all__ = [
    "DocElements",
    "CommentDoc",
    "ParamDoc",
    "ExceptionDoc",
    "ReturnDoc",
    "DocParseError",
    "extract_code_elements",
    "parse_comment",
    "collect_identifiers",
    "strip_comment_markers",
    "normalize_doc_name",
]


@dataclass(frozen=True)
class DocElements:
    """Documentable structure of one function, as read from its source."""

    function_name: str
    params: tuple[str, ...]
    exceptions: frozenset[str]
    has_return: bool


def _dedupe(names: list[str]) -> tuple[str, ...]:
    return tuple(dict.fromkeys(names))


def extract_code_elements(code: str, language: Language) -> DocElements:
    """Parse one function definition into its documentable elements."""
    if language is Language.PYTHON:
        name, params, exceptions, has_return = parse_python(code)
    elif language is Language.GO:
        name, params, has_return = parse_go(code)
        exceptions = []
    elif language in (Language.JAVA, Language.CSHARP):
        result = scan_java_like(code, language.value)
        name, params = result.name, result.params
        exceptions, has_return = result.exceptions, result.has_return
    elif language is Language.JAVASCRIPT:
        result = scan_javascript(code)
        name, params = result.name, result.params
        exceptions, has_return = result.exceptions, result.has_return
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unsupported language {language!r}")
    return DocElements(
        function_name=name,
        params=_dedupe(params),
        exceptions=frozenset(exceptions),
        has_return=has_return,
    )


def collect_identifiers(code: str, language: Language) -> list[str]:
    """Every identifier occurring in the function, for term extraction."""
    if language is Language.PYTHON:
        return python_identifiers(code)
    if language is Language.GO:
        return go_identifiers(code)
    masked = mask_source(code, language.value)
    keywords = _CF_KEYWORDS[language.value]
    return [m.group(0) for m in IDENT_RE.finditer(masked) if m.group(0) not in keywords]
