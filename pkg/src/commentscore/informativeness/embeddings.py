"""Word-vector table in the plain text format: "count dim" header, then one
"token v1 ... vdim" line per word. Tokens may be bare words or URI-style
"/c/<lang>/<word>" entries; the loader strips the prefix and indexes by
(language, word), with bare words filed under language "any".
"""

from __future__ import annotations

import os

import numpy as np


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; zero vectors yield 0.0 rather than NaN."""
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


class WordVectorTable:
    """Immutable (language, word) -> vector lookup, shared across workers."""

    def __init__(self, vectors: dict[tuple[str, str], np.ndarray], dim: int):
        self._vectors = vectors
        self.dim = dim
        langs = sorted({lang for lang, _ in vectors} - {"any"})
        self._lookup_order = ["any"] + langs

    def __len__(self) -> int:
        return len(self._vectors)

    @classmethod
    def empty(cls) -> "WordVectorTable":
        return cls({}, 0)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "WordVectorTable":
        vectors: dict[tuple[str, str], np.ndarray] = {}
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise ValueError(f"{path}: expected 'count dim' header")
            count, dim = int(header[0]), int(header[1])
            for lineno, line in enumerate(fh, start=2):
                parts = line.rstrip("\n").split(" ")
                if len(parts) < dim + 1:
                    if not line.strip():
                        continue
                    raise ValueError(f"{path}:{lineno}: expected {dim} values")
                token = parts[0]
                if token.startswith("/c/"):
                    pieces = token.split("/", 3)
                    lang, word = pieces[2], pieces[3] if len(pieces) > 3 else ""
                else:
                    lang, word = "any", token
                vec = np.asarray([float(v) for v in parts[1 : dim + 1]], dtype=np.float64)
                vectors[(lang, word.lower())] = vec
        if count != len(vectors):
            # duplicate tokens collapse; keep going, the header is advisory
            pass
        return cls(vectors, dim)

    def vector(self, word: str, language: str | None = None) -> np.ndarray | None:
        word = word.lower()
        if language is not None:
            return self._vectors.get((language, word))
        for lang in self._lookup_order:
            hit = self._vectors.get((lang, word))
            if hit is not None:
                return hit
        return None
