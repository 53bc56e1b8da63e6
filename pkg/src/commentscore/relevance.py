"""Relevance component: code-comment embedding cosine, plus hard-negative
mining over a corpus for contrastive training data.

Three text-embedding providers ship with the package:

  HashEmbeddingProvider   deterministic pseudo-random unit vectors derived
                          from a SHA-256 of the text; no model needed, used
                          as the test/default fixture provider
  FileEmbeddingProvider   precomputed vectors keyed by pair id ("<id>:code",
                          "<id>:comment") in the "count dim / id v1..vdim"
                          text format, with an optional JSONL side-channel
                          {"text": ..., "vector": [...]} for ad-hoc strings
  SidecarEmbeddingProvider  the model sidecar's /v1/embed endpoint

All providers are read-only after construction and safe for concurrent use.
"""

from __future__ import annotations

import hashlib
import json
import os
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .corpus import CodeCommentPair
from .informativeness.embeddings import cosine


class EmbeddingProviderError(RuntimeError):
    """A text-embedding provider could not produce vectors."""


@dataclass(frozen=True)
class TripletRecord:
    anchor_id: str
    positive_id: str
    negative_id: str
    similarity: float


class HashEmbeddingProvider:
    """Stable pseudo-random unit vectors; identical text, identical vector."""

    name = "hash"

    def __init__(self, dim: int = 64):
        self.dim = dim

    def embed_texts(self, texts: Sequence[str]) -> list[np.ndarray]:
        out = []
        for text in texts:
            digest = hashlib.sha256(text.encode("utf-8")).digest()
            seed = int.from_bytes(digest[:8], "big")
            rng = np.random.default_rng(seed)
            vec = rng.standard_normal(self.dim)
            norm = np.linalg.norm(vec)
            out.append(vec / norm if norm > 0 else vec)
        return out

    def embed_pair_side(self, pair: CodeCommentPair, side: str) -> np.ndarray:
        return self.embed_texts([pair.code if side == "code" else pair.comment])[0]


class FileEmbeddingProvider:
    """Precomputed vectors keyed by pair id, plus a text side-channel."""

    def __init__(self, path: str | os.PathLike, texts_path: str | os.PathLike | None = None):
        self.name = f"file:{path}"
        self._by_key: dict[str, np.ndarray] = {}
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise EmbeddingProviderError(f"{self.name}: expected 'count dim' header")
            self.dim = int(header[1])
            for line in fh:
                parts = line.rstrip("\n").split(" ")
                if not line.strip():
                    continue
                if len(parts) != self.dim + 1:
                    raise EmbeddingProviderError(
                        f"{self.name}: row for {parts[0]!r} has {len(parts) - 1} values,"
                        f" expected {self.dim}"
                    )
                self._by_key[parts[0]] = np.asarray(
                    [float(v) for v in parts[1:]], dtype=np.float64
                )
        self._by_text: dict[str, np.ndarray] = {}
        if texts_path is not None:
            with open(texts_path, encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    obj = json.loads(line)
                    self._by_text[obj["text"]] = np.asarray(obj["vector"], dtype=np.float64)

    def embed_texts(self, texts: Sequence[str]) -> list[np.ndarray]:
        out = []
        for text in texts:
            if text not in self._by_text:
                raise EmbeddingProviderError(
                    f"{self.name}: no precomputed vector for ad-hoc text ({text[:40]!r}...)"
                )
            out.append(self._by_text[text])
        return out

    def embed_pair_side(self, pair: CodeCommentPair, side: str) -> np.ndarray:
        key = f"{pair.id}:{side}"
        if key in self._by_key:
            return self._by_key[key]
        text = pair.code if side == "code" else pair.comment
        if text in self._by_text:
            return self._by_text[text]
        raise EmbeddingProviderError(f"{self.name}: no vector for key {key!r}")


class SidecarEmbeddingProvider:
    """Dense text embeddings from the model sidecar's /v1/embed endpoint."""

    def __init__(self, url: str, timeout: float = 60.0):
        self.url = url.rstrip("/")
        self.name = f"sidecar:{self.url}"
        self.timeout = timeout

    def embed_texts(self, texts: Sequence[str]) -> list[np.ndarray]:
        payload = json.dumps({"texts": list(texts)}).encode("utf-8")
        request = urllib.request.Request(
            f"{self.url}/v1/embed",
            data=payload,
            headers={"Content-Type": "application/json"},
        )
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as resp:
                body = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise EmbeddingProviderError(f"{self.name}: request failed: {exc}") from exc
        vectors = body.get("vectors")
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise EmbeddingProviderError(f"{self.name}: malformed embed response")
        return [np.asarray(v, dtype=np.float64) for v in vectors]

    def embed_pair_side(self, pair: CodeCommentPair, side: str) -> np.ndarray:
        return self.embed_texts([pair.code if side == "code" else pair.comment])[0]


def relevance(code: str, comment: str, provider) -> float:
    """Cosine similarity between the code and comment embeddings."""
    code_vec, comment_vec = provider.embed_texts([code, comment])
    if code_vec.shape != comment_vec.shape:
        raise EmbeddingProviderError(
            f"embedding dimension mismatch: {code_vec.shape} vs {comment_vec.shape}"
        )
    return cosine(code_vec, comment_vec)


def relevance_for_pair(pair: CodeCommentPair, provider) -> float:
    """Like relevance(), but lets id-keyed providers look vectors up by id."""
    code_vec = provider.embed_pair_side(pair, "code")
    comment_vec = provider.embed_pair_side(pair, "comment")
    if code_vec.shape != comment_vec.shape:
        raise EmbeddingProviderError(
            f"embedding dimension mismatch for pair {pair.id!r}"
        )
    return cosine(code_vec, comment_vec)


def mine_hard_negatives(
    pairs: Sequence[CodeCommentPair],
    provider,
    k: int = 3,
    min_similarity: float = 0.0,
) -> list[TripletRecord]:
    """For each anchor pair, the k other-pair comments most similar to the
    anchor's code embedding, keeping only similarities strictly above
    min_similarity. Anchors with no qualifying candidate yield no records.
    """
    if len(pairs) < 2:
        raise ValueError("hard-negative mining needs at least 2 pairs")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")

    code_vecs = [provider.embed_pair_side(p, "code") for p in pairs]
    comment_vecs = [provider.embed_pair_side(p, "comment") for p in pairs]

    records: list[TripletRecord] = []
    for i, anchor in enumerate(pairs):
        candidates = []
        for j, other in enumerate(pairs):
            if j == i:
                continue
            sim = cosine(code_vecs[i], comment_vecs[j])
            if sim > min_similarity:
                candidates.append((-sim, j))
        candidates.sort()
        for neg_sim, j in candidates[:k]:
            records.append(
                TripletRecord(
                    anchor_id=anchor.id,
                    positive_id=anchor.id,
                    negative_id=pairs[j].id,
                    similarity=-neg_sim,
                )
            )
    return records


def write_triplets(records: Iterable[TripletRecord], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(
                json.dumps(
                    {
                        "anchor_id": rec.anchor_id,
                        "positive_id": rec.positive_id,
                        "negative_id": rec.negative_id,
                        "similarity": rec.similarity,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
