"""Text preprocessing: identifier splitting, tokenization, lemmatization.

The lemmatizer is a dictionary lookup (form<TAB>lemma files, English and
Russian merged) with identity fallback, keeping scoring deterministic and
dependency-free. Stop-word lists ship the same way, one token per line with
# comments.
"""

from __future__ import annotations

import re
from importlib import resources

_DATA = resources.files(__package__) / "data"

_CAMEL_BOUNDARY = re.compile(
    r"(?<=[a-zа-яё])(?=[A-ZА-ЯЁ])"          # fooBar -> foo|Bar
    r"|(?<=[A-ZА-ЯЁ])(?=[A-ZА-ЯЁ][a-zа-яё])"  # HTTPServer -> HTTP|Server
    r"|(?<=[0-9])(?=[A-Za-zА-Яа-яЁё])"        # 2fast -> 2|fast
    r"|(?<=[A-Za-zА-Яа-яЁё])(?=[0-9])"        # utf8 -> utf|8
)
_SEPARATORS = re.compile(r"[_\-\s]+")
_NON_ALNUM = re.compile(r"[^0-9A-Za-zА-Яа-яЁё]+")
_WORD_RE = re.compile(r"[0-9A-Za-zА-Яа-яЁё]+")


def split_identifier(identifier: str) -> list[str]:
    """Split camelCase/PascalCase/snake_case/kebab-case and digit boundaries.

    Pieces come back lowercased; empty pieces are dropped but no length or
    stop-word filtering happens here.
    """
    pieces: list[str] = []
    for chunk in _SEPARATORS.split(identifier):
        chunk = _NON_ALNUM.sub(" ", chunk)
        for part in chunk.split():
            pieces.extend(p for p in _CAMEL_BOUNDARY.split(part) if p)
    return [p.lower() for p in pieces]


def tokenize_words(text: str) -> list[str]:
    """Word tokens (Latin/Cyrillic/digits) in order, lowercased."""
    return [m.group(0).lower() for m in _WORD_RE.finditer(text)]


def _read_list(name: str) -> set[str]:
    out = set()
    for line in (_DATA / name).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.add(line.lower())
    return out


def _read_lemmas(text: str) -> dict[str, str]:
    table: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) == 2:
            table[parts[0].strip().lower()] = parts[1].strip().lower()
    return table


class Lemmatizer:
    """Dictionary-backed lemmatizer with identity fallback."""

    def __init__(self, table: dict[str, str]):
        self._table = table

    def lemma(self, word: str) -> str:
        return self._table.get(word.lower(), word.lower())

    @classmethod
    def from_files(cls, *paths: str) -> "Lemmatizer":
        table: dict[str, str] = {}
        for path in paths:
            with open(path, encoding="utf-8") as fh:
                table.update(_read_lemmas(fh.read()))
        return cls(table)


_default_lemmatizer: Lemmatizer | None = None
_default_stopwords: set[str] | None = None


def default_lemmatizer() -> Lemmatizer:
    global _default_lemmatizer
    if _default_lemmatizer is None:
        table = _read_lemmas((_DATA / "lemmas_en.tsv").read_text(encoding="utf-8"))
        table.update(_read_lemmas((_DATA / "lemmas_ru.tsv").read_text(encoding="utf-8")))
        _default_lemmatizer = Lemmatizer(table)
    return _default_lemmatizer


def default_stopwords() -> set[str]:
    global _default_stopwords
    if _default_stopwords is None:
        _default_stopwords = _read_list("stopwords_en.txt") | _read_list("stopwords_ru.txt")
    return _default_stopwords


def load_stopwords(*paths: str) -> set[str]:
    out: set[str] = set()
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    out.add(line.lower())
    return out
