"""Feature computation and corpus scoring: the glue the CLI drives.

A ScoringContext bundles the providers and thresholds; compute_features
turns one pair into the four component scores. Pairs whose code cannot be
parsed are not dropped: they score completeness 0 and informativeness 0,
carry a diagnostic, and still get description length and relevance (those
need no parse).
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .classifier import QualityModel, description_length, predict
from .completeness import completeness, completeness_go
from .corpus import CodeCommentPair, FeatureVector, Language, RunConfig, ScoredPair
from .docparse import DocParseError, extract_code_elements, parse_comment
from .informativeness import (
    FileWeightProvider,
    SidecarWeightProvider,
    UniformWeightProvider,
    WordVectorTable,
    extract_terms,
    informativeness,
    weigh_terms,
)
from .relevance import (
    FileEmbeddingProvider,
    HashEmbeddingProvider,
    SidecarEmbeddingProvider,
    relevance_for_pair,
)

SIDECAR_URL_ENV = "COMMENTSCORE_SIDECAR_URL"


@dataclass
class ScoringContext:
    weight_provider: object
    word_vectors: WordVectorTable
    relevance_provider: object
    similarity_threshold: float = 0.5
    model: Optional[QualityModel] = None


@dataclass
class ScoreSummary:
    scored: int = 0
    flagged: int = 0
    diagnostics: list[tuple[str, str]] = field(default_factory=list)


def _clamp(value: float, lo: float, hi: float) -> float:
    return min(hi, max(lo, value))


def compute_features(
    pair: CodeCommentPair, ctx: ScoringContext
) -> tuple[FeatureVector, list[str]]:
    diagnostics: list[str] = []
    comment_doc = parse_comment(pair.comment, pair.language)
    d_score = description_length(comment_doc)
    r_score = _clamp(relevance_for_pair(pair, ctx.relevance_provider), -1.0, 1.0)

    try:
        elems = extract_code_elements(pair.code, pair.language)
        if pair.language is Language.GO:
            c_score = completeness_go(pair.comment, elems.function_name).score
        else:
            breakdown = completeness(elems, comment_doc, pair.language)
            c_score = breakdown.score
        terms = extract_terms(pair.code, pair.language)
        if terms:
            weighted = weigh_terms(pair.code, terms, ctx.weight_provider, pair.language)
            i_score = informativeness(
                weighted, pair.comment, ctx.word_vectors, ctx.similarity_threshold
            ).score
        else:
            i_score = 1.0
    except DocParseError as exc:
        diagnostics.append(f"unparseable code, scored degenerate: {exc}")
        c_score = 0.0
        i_score = 0.0

    features = FeatureVector(
        completeness=_clamp(c_score, 0.0, 1.0),
        informativeness=_clamp(i_score, 0.0, 1.0),
        description_length=d_score,
        relevance=r_score,
    )
    return features, diagnostics


def score_pair(pair: CodeCommentPair, ctx: ScoringContext) -> tuple[ScoredPair, list[str]]:
    if ctx.model is None:
        raise ValueError("scoring context has no model")
    features, diagnostics = compute_features(pair, ctx)
    probability = predict(ctx.model, features)
    return ScoredPair(pair.id, features, probability), diagnostics


def iter_scored(
    pairs: Iterable[CodeCommentPair],
    ctx: ScoringContext,
    jobs: int = 1,
    summary: ScoreSummary | None = None,
    chunk_size: int = 64,
):
    """Stream ScoredPair records in input order, filling summary as it goes.

    With jobs > 1 the work runs on a thread pool one bounded chunk at a
    time, so memory stays proportional to the chunk, and results are
    emitted in input order regardless of scheduling.
    """
    summary = summary if summary is not None else ScoreSummary()

    def work(pair: CodeCommentPair):
        return score_pair(pair, ctx)

    def emit(pair, record, diagnostics):
        summary.scored += 1
        if diagnostics:
            summary.flagged += 1
            for message in diagnostics:
                summary.diagnostics.append((pair.id, message))
        return record

    if jobs <= 1:
        for pair in pairs:
            record, diagnostics = work(pair)
            yield emit(pair, record, diagnostics)
        return

    iterator = iter(pairs)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        while True:
            chunk = list(itertools.islice(iterator, chunk_size * jobs))
            if not chunk:
                break
            for pair, (record, diagnostics) in zip(chunk, pool.map(work, chunk)):
                yield emit(pair, record, diagnostics)


def score_corpus(
    pairs: Sequence[CodeCommentPair], ctx: ScoringContext, jobs: int = 1
) -> tuple[list[ScoredPair], ScoreSummary]:
    """Score pairs fully in memory; order equals input order."""
    summary = ScoreSummary()
    scored = list(iter_scored(pairs, ctx, jobs=jobs, summary=summary))
    return scored, summary


# ------------------------------------------------------------ provider wiring


def _resolve_sidecar_url(url: str) -> str:
    return os.environ.get(SIDECAR_URL_ENV, url)


def build_weight_provider(spec: str):
    if spec == "uniform":
        return UniformWeightProvider()
    if spec.startswith("file:"):
        return FileWeightProvider(spec[len("file:") :])
    if spec.startswith("sidecar:"):
        return SidecarWeightProvider(_resolve_sidecar_url(spec[len("sidecar:") :]))
    raise ValueError(f"unknown weight provider {spec!r}")


def build_word_vectors(spec: str) -> WordVectorTable:
    if spec in ("none", ""):
        return WordVectorTable.empty()
    if spec.startswith("file:"):
        return WordVectorTable.load(spec[len("file:") :])
    raise ValueError(f"unknown embed provider {spec!r}")


def build_relevance_provider(spec: str):
    if spec == "hash":
        return HashEmbeddingProvider()
    if spec.startswith("file:"):
        rest = spec[len("file:") :]
        if "," in rest:
            vectors_path, texts_path = rest.split(",", 1)
            return FileEmbeddingProvider(vectors_path, texts_path)
        return FileEmbeddingProvider(rest)
    if spec.startswith("sidecar:"):
        return SidecarEmbeddingProvider(_resolve_sidecar_url(spec[len("sidecar:") :]))
    raise ValueError(f"unknown relevance provider {spec!r}")


def build_context(config: RunConfig, model: Optional[QualityModel] = None) -> ScoringContext:
    return ScoringContext(
        weight_provider=build_weight_provider(config.weight_provider),
        word_vectors=build_word_vectors(config.embed_provider),
        relevance_provider=build_relevance_provider(config.relevance_provider),
        similarity_threshold=config.similarity_threshold,
        model=model,
    )
