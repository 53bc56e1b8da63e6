"""Informativeness component: weighted coverage of code terms in the comment.

Terms are word pieces split out of the function's identifiers, lemmatized
and filtered. Each term carries an importance weight (uniform by default;
a weight file or the model sidecar can supply attention-derived weights).
A term counts as found when it appears verbatim among the comment's words
or when its word-embedding cosine against some comment word is strictly
greater than the similarity threshold. The score is

    sum of found-term weights / sum of all term weights

which reduces to the plain found/total ratio under uniform weights.
"""

from __future__ import annotations

import json
import urllib.error
import urllib.request
from dataclasses import dataclass, field

from ..corpus import Language
from ..docparse import collect_identifiers
from .embeddings import WordVectorTable, cosine
from .textprep import (
    Lemmatizer,
    default_lemmatizer,
    default_stopwords,
    split_identifier,
    tokenize_words,
)

__all__ = [
    "Term",
    "TermMatchReport",
    "WeightProviderError",
    "UniformWeightProvider",
    "FileWeightProvider",
    "SidecarWeightProvider",
    "extract_terms",
    "weigh_terms",
    "informativeness",
    "WordVectorTable",
    "cosine",
]


class WeightProviderError(RuntimeError):
    """A term-weight provider could not produce weights."""


@dataclass(frozen=True)
class Term:
    surface: str  # lemmatized lowercase word piece, length >= 2
    weight: float

    def __post_init__(self):
        if len(self.surface) < 2:
            raise ValueError(f"term too short: {self.surface!r}")
        if not self.weight > 0:
            raise ValueError(f"term weight must be positive: {self.weight!r}")


@dataclass
class TermMatchReport:
    terms: tuple[Term, ...]
    found: frozenset[str]
    score: float
    diagnostics: list[str] = field(default_factory=list)


class UniformWeightProvider:
    """Every term weighs the same; the default, matching the plain ratio."""

    name = "uniform"

    def weights_for(self, code: str, language: str, terms: list[str]) -> list[float]:
        return [1.0] * len(terms)


class FileWeightProvider:
    """Raw term weights from a JSON object file {term: weight, ...}."""

    def __init__(self, path: str):
        self.name = f"file:{path}"
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise WeightProviderError(f"{self.name}: weight file must be a JSON object")
        self._weights = {str(k): float(v) for k, v in raw.items()}

    def weights_for(self, code: str, language: str, terms: list[str]) -> list[float]:
        out = []
        for term in terms:
            if term not in self._weights:
                raise WeightProviderError(f"{self.name}: no weight for term {term!r}")
            value = self._weights[term]
            if value < 0:
                raise WeightProviderError(f"{self.name}: negative weight for term {term!r}")
            out.append(value)
        return out


class SidecarWeightProvider:
    """Attention-mass weights served by the model sidecar."""

    def __init__(self, url: str, timeout: float = 30.0):
        self.url = url.rstrip("/")
        self.name = f"sidecar:{self.url}"
        self.timeout = timeout

    def weights_for(self, code: str, language: str, terms: list[str]) -> list[float]:
        payload = json.dumps(
            {"code": code, "language": language, "terms": list(terms)}
        ).encode("utf-8")
        request = urllib.request.Request(
            f"{self.url}/v1/term-weights",
            data=payload,
            headers={"Content-Type": "application/json"},
        )
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as resp:
                body = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise WeightProviderError(f"{self.name}: request failed: {exc}") from exc
        weights = body.get("weights")
        if not isinstance(weights, list) or len(weights) != len(terms):
            raise WeightProviderError(
                f"{self.name}: response weights do not match {len(terms)} terms"
            )
        return [float(w) for w in weights]


def extract_terms(
    code: str,
    language: Language,
    lemmatizer: Lemmatizer | None = None,
    stopwords: set[str] | None = None,
) -> list[str]:
    """Lemmatized, deduplicated, filtered identifier word pieces, sorted."""
    lemmatizer = lemmatizer or default_lemmatizer()
    stopwords = stopwords if stopwords is not None else default_stopwords()
    seen: set[str] = set()
    for identifier in collect_identifiers(code, language):
        for piece in split_identifier(identifier):
            lemma = lemmatizer.lemma(piece)
            if len(lemma) < 2 or lemma in stopwords:
                continue
            seen.add(lemma)
    return sorted(seen)


def weigh_terms(
    code: str,
    terms: list[str],
    provider,
    language: Language | str = Language.PYTHON,
) -> list[Term]:
    """Attach normalized importance weights (summing to 1) to terms.

    A provider may legitimately report zero mass for every term (none of
    them aligns with the code); that degenerates to uniform weights. Terms
    with zero weight among positive ones carry no mass and are dropped,
    which leaves both sums in the weighted ratio unchanged.
    """
    if not terms:
        raise ValueError("terms must be non-empty")
    lang_tag = language.value if isinstance(language, Language) else str(language)
    raw = [float(w) for w in provider.weights_for(code, lang_tag, list(terms))]
    total = sum(raw)
    if total <= 0.0:
        raw = [1.0] * len(terms)
        total = float(len(terms))
    return [
        Term(surface, weight / total)
        for surface, weight in zip(terms, raw)
        if weight > 0.0
    ]


def informativeness(
    terms: list[Term],
    comment: str,
    embeddings: WordVectorTable,
    threshold: float,
    lemmatizer: Lemmatizer | None = None,
    stopwords: set[str] | None = None,
) -> TermMatchReport:
    """Weighted fraction of terms present (verbatim or by embedding) in the
    comment. An empty term list scores 1.0: there is nothing to convey."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold out of (0,1): {threshold}")
    if not terms:
        return TermMatchReport(terms=(), found=frozenset(), score=1.0)

    lemmatizer = lemmatizer or default_lemmatizer()
    stopwords = stopwords if stopwords is not None else default_stopwords()
    words: list[str] = []
    for token in tokenize_words(comment):
        lemma = lemmatizer.lemma(token)
        if lemma and lemma not in stopwords:
            words.append(lemma)
    word_set = set(words)
    word_vectors = [
        vec for vec in (embeddings.vector(w) for w in word_set) if vec is not None
    ]

    found: set[str] = set()
    diagnostics: list[str] = []
    for term in terms:
        if term.surface in word_set:
            found.add(term.surface)
            continue
        term_vec = embeddings.vector(term.surface)
        if term_vec is None:
            diagnostics.append(f"no embedding for term {term.surface!r}")
            continue
        best = max((cosine(term_vec, wv) for wv in word_vectors), default=0.0)
        if best > threshold:
            found.add(term.surface)

    total_weight = sum(t.weight for t in terms)
    found_weight = sum(t.weight for t in terms if t.surface in found)
    score = found_weight / total_weight if total_weight > 0 else 1.0
    return TermMatchReport(
        terms=tuple(terms),
        found=frozenset(found),
        score=score,
        diagnostics=diagnostics,
    )
