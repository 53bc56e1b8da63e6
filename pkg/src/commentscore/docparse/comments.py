"""Structured-comment parsing driven by the per-language tag grammar table.

The grammar lives in data/tag_grammars.json so conventions can be extended
without touching code. Each entry is
{tag_pattern, kind, role, captures, end_pattern?}:

  kind      param | return | exception
  role      "doc"  -- the tag documents the element; trailing block text
                      within the tag's logical block is its description, a
                      {Type} or ":param Type name:" capture marks a type
            "type" -- the tag declares a type (:type x:, :rtype:)
  captures  which named groups the pattern binds (name, type)

parse_comment is total: it never raises, and unrecognised tag-like tokens
are reported in the diagnostics list instead.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources

_GRAMMAR_PATH = resources.files(__package__) / "data" / "tag_grammars.json"

# markers stripped per language; "*" means a javadoc-style continuation star
_LINE_MARKERS = {
    "python": ("#",),
    "java": ("//", "*"),
    "javascript": ("//", "*"),
    "csharp": ("///", "//", "*"),
    "go": ("//",),
}

_KNOWN_SPHINX_FIELDS = {"param", "type", "return", "returns", "rtype", "raise", "raises"}
_KNOWN_AT_TAGS = {"param", "return", "returns", "throw", "throws", "exception"}
_KNOWN_XML_TAGS = {"summary", "param", "returns", "exception"}

_SUMMARY_RE = re.compile(r"<summary\s*>(?P<body>.*?)</summary\s*>", re.DOTALL)


@dataclass
class ParamDoc:
    has_description: bool = False
    has_type: bool = False


@dataclass
class ExceptionDoc:
    has_description: bool = False


@dataclass
class ReturnDoc:
    present: bool = False
    has_type: bool = False
    has_description: bool = False


@dataclass
class CommentDoc:
    raw_text: str
    leading_description: str
    has_description: bool
    count_description: bool
    params: dict[str, ParamDoc] = field(default_factory=dict)
    exceptions: dict[str, ExceptionDoc] = field(default_factory=dict)
    return_doc: ReturnDoc = field(default_factory=ReturnDoc)
    diagnostics: list[str] = field(default_factory=list)


class _Grammar:
    def __init__(self, entries: list[dict]):
        self.entries = [
            (
                re.compile(e["tag_pattern"]),
                e["kind"],
                e["role"],
                re.compile(e["end_pattern"]) if e.get("end_pattern") else None,
            )
            for e in entries
        ]


_grammars: dict[str, _Grammar] | None = None


def _load_grammars() -> dict[str, _Grammar]:
    global _grammars
    if _grammars is None:
        raw = json.loads(_GRAMMAR_PATH.read_text(encoding="utf-8"))
        _grammars = {lang: _Grammar(entries) for lang, entries in raw.items()}
    return _grammars


def strip_comment_markers(text: str, language) -> str:
    """Remove comment delimiters while keeping the text content and layout."""
    language = getattr(language, "value", language)
    s = text.strip()
    if s.startswith("/**"):
        s = s[3:]
    elif s.startswith("/*"):
        s = s[2:]
    if s.endswith("*/"):
        s = s[:-2]
    for quote in ('"""', "'''"):
        if s.startswith(quote):
            s = s[len(quote) :]
        if s.endswith(quote):
            s = s[: -len(quote)]
    markers = _LINE_MARKERS.get(language, ())
    lines = []
    for line in s.splitlines():
        t = line.lstrip()
        for marker in markers:
            if marker == "*":
                if t.startswith("*") and not t.startswith("*/"):
                    t = t[1:]
                    break
            elif t.startswith(marker):
                t = t[len(marker) :]
                break
        if t.startswith(" "):
            t = t[1:]
        lines.append(t)
    return "\n".join(lines).strip("\n")


def normalize_doc_name(raw: str) -> str:
    """Trim braces/brackets/quotes/whitespace and leading stars off a tag name."""
    name = raw.strip()
    while name and name[0] in "{[<\"'*":
        name = name[1:]
    while name and name[-1] in "}]>\"':,.":
        name = name[:-1]
    return name.strip()


def _find_tag_matches(text: str, grammar: _Grammar):
    candidates = []
    for order, (pattern, kind, role, end_pattern) in enumerate(grammar.entries):
        for m in pattern.finditer(text):
            candidates.append((m.start(), order, m, kind, role, end_pattern))
    candidates.sort(key=lambda c: (c[0], c[1]))
    selected = []
    last_end = -1
    for start, _, m, kind, role, end_pattern in candidates:
        if start >= last_end:
            selected.append((m, kind, role, end_pattern))
            last_end = m.end()
    return selected


def _unknown_tag_diagnostics(text: str, language: str) -> list[str]:
    diags = []
    if language in ("java", "javascript"):
        for m in re.finditer(r"@([A-Za-z][\w]*)", text):
            if m.group(1) not in _KNOWN_AT_TAGS:
                diags.append(f"unrecognized tag @{m.group(1)}")
    elif language == "python":
        for m in re.finditer(r"(?m)^\s*:([A-Za-z][\w-]*)\b[^:\n]*:", text):
            if m.group(1) not in _KNOWN_SPHINX_FIELDS:
                diags.append(f"unrecognized field :{m.group(1)}:")
    elif language == "csharp":
        for m in re.finditer(r"<\s*/?\s*([A-Za-z][\w]*)", text):
            if m.group(1) not in _KNOWN_XML_TAGS:
                diags.append(f"unrecognized element <{m.group(1)}>")
    return list(dict.fromkeys(diags))


def parse_comment(comment: str, language) -> CommentDoc:
    """Extract the documented-element structure from a raw comment string."""
    language = getattr(language, "value", language)
    text = strip_comment_markers(comment, language)
    grammar = _load_grammars().get(language, _Grammar([]))
    matches = _find_tag_matches(text, grammar)

    doc = CommentDoc(
        raw_text=comment,
        leading_description="",
        has_description=False,
        count_description=not matches,
    )

    first_tag = matches[0][0].start() if matches else len(text)
    leading = text[:first_tag]
    if language == "csharp":
        summary = _SUMMARY_RE.search(text)
        if summary:
            leading = summary.group("body")
        else:
            leading = re.split(r"<\s*[A-Za-z]", leading, maxsplit=1)[0]
    doc.leading_description = leading.strip()
    doc.has_description = bool(doc.leading_description)

    for i, (m, kind, role, end_pattern) in enumerate(matches):
        block_end = matches[i + 1][0].start() if i + 1 < len(matches) else len(text)
        block = text[m.end() : block_end]
        if end_pattern:
            closed = end_pattern.search(block)
            if closed:
                block = block[: closed.start()]
        has_desc = bool(block.strip())
        groups = m.groupdict()
        typed = bool(groups.get("type") and groups["type"].strip())
        raw_name = groups.get("name") or ""

        if kind == "return":
            if role == "doc":
                doc.return_doc = ReturnDoc(
                    present=True,
                    has_type=typed or doc.return_doc.has_type,
                    has_description=has_desc,
                )
            else:  # :rtype:
                doc.return_doc.present = True
                doc.return_doc.has_type = doc.return_doc.has_type or has_desc
        elif kind == "param":
            name = normalize_doc_name(raw_name)
            if not name:
                doc.diagnostics.append(f"tag with unusable name: {m.group(0).strip()!r}")
                continue
            if role == "doc":
                doc.params[name] = ParamDoc(has_description=has_desc, has_type=typed)
            else:  # :type name:
                entry = doc.params.setdefault(name, ParamDoc())
                entry.has_type = entry.has_type or has_desc
        elif kind == "exception":
            names = [normalize_doc_name(n) for n in raw_name.split(",")] if raw_name else []
            names = [n for n in names if n]
            if not names:
                doc.diagnostics.append(
                    f"exception tag without a name: {m.group(0).strip()!r}"
                )
                continue
            for name in names:
                doc.exceptions[name] = ExceptionDoc(has_description=has_desc)

    doc.diagnostics.extend(_unknown_tag_diagnostics(text, language))
    return doc
