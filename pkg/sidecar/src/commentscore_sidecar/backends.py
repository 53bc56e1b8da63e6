"""Model backends: tokenization with offsets, per-token attention mass, and
unit-normalized text embeddings.

DeterministicBackend needs no model files: token mass and embeddings are
derived from SHA-256 digests, so every response is reproducible across
calls, processes, and restarts. TransformersBackend serves any Hugging Face
encoder that exposes attentions; it is imported lazily so the service runs
without torch installed.
"""

from __future__ import annotations

import hashlib
import re
from typing import Protocol, Sequence

import numpy as np

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


class Backend(Protocol):
    model_id: str
    dim: int

    def load(self) -> None: ...

    def tokenize_with_offsets(self, text: str) -> list[tuple[str, int, int]]: ...

    def token_attention_mass(self, text: str) -> list[float]: ...

    def embed(self, texts: Sequence[str]) -> np.ndarray: ...


def _digest_float(*parts: str) -> float:
    """Stable value in [0.5, 1.5) derived from the parts' SHA-256."""
    digest = hashlib.sha256("\x1f".join(parts).encode("utf-8")).digest()
    return 0.5 + int.from_bytes(digest[:8], "big") / 2**64


class DeterministicBackend:
    """Hash-derived signals standing in for a transformer."""

    def __init__(self, model_id: str = "deterministic-hash-v1", dim: int = 64):
        self.model_id = model_id
        self.dim = dim
        self._ready = False

    def load(self) -> None:
        self._ready = True

    def tokenize_with_offsets(self, text: str) -> list[tuple[str, int, int]]:
        return [(m.group(0), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]

    def token_attention_mass(self, text: str) -> list[float]:
        # mass depends on the token surface and its position, nothing else
        return [
            _digest_float(self.model_id, token, str(index))
            for index, (token, _, _) in enumerate(self.tokenize_with_offsets(text))
        ]

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        out = np.empty((len(texts), self.dim))
        for row, text in enumerate(texts):
            digest = hashlib.sha256(text.encode("utf-8")).digest()
            seed = int.from_bytes(digest[:8], "big")
            rng = np.random.default_rng(seed)
            vec = rng.standard_normal(self.dim)
            norm = np.linalg.norm(vec)
            out[row] = vec / norm if norm > 0 else vec
        return out


class TransformersBackend:
    """Hugging Face encoder backend (requires the "models" extra)."""

    def __init__(self, model_id: str, device: str = "cpu", max_batch: int = 16):
        self.model_id = model_id
        self.device = device
        self.max_batch = max_batch
        self.dim = 0
        self._tokenizer = None
        self._model = None

    def load(self) -> None:
        import torch
        from transformers import AutoModel, AutoTokenizer

        self._tokenizer = AutoTokenizer.from_pretrained(self.model_id, use_fast=True)
        self._model = AutoModel.from_pretrained(
            self.model_id, output_attentions=True
        ).to(self.device)
        self._model.eval()
        self.dim = int(self._model.config.hidden_size)
        self._torch = torch

    def _encode(self, text: str):
        return self._tokenizer(
            text,
            return_offsets_mapping=True,
            return_tensors="pt",
            truncation=True,
        )

    def tokenize_with_offsets(self, text: str) -> list[tuple[str, int, int]]:
        enc = self._encode(text)
        offsets = enc["offset_mapping"][0].tolist()
        tokens = self._tokenizer.convert_ids_to_tokens(enc["input_ids"][0])
        return [(tok, start, end) for tok, (start, end) in zip(tokens, offsets)]

    def token_attention_mass(self, text: str) -> list[float]:
        enc = self._encode(text)
        inputs = {
            k: v.to(self.device)
            for k, v in enc.items()
            if k != "offset_mapping"
        }
        with self._torch.no_grad():
            outputs = self._model(**inputs)
        # last layer, averaged over heads, then the attention each token
        # receives: column sums of the averaged matrix
        last = outputs.attentions[-1][0]          # [heads, seq, seq]
        averaged = last.mean(dim=0)               # [seq, seq]
        received = averaged.sum(dim=0)            # [seq]
        return [float(v) for v in received.cpu().tolist()]

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        rows = []
        for start in range(0, len(texts), self.max_batch):
            batch = list(texts[start : start + self.max_batch])
            enc = self._tokenizer(
                batch, return_tensors="pt", padding=True, truncation=True
            )
            inputs = {k: v.to(self.device) for k, v in enc.items()}
            with self._torch.no_grad():
                outputs = self._model(**inputs)
            hidden = outputs.last_hidden_state            # [b, seq, dim]
            mask = inputs["attention_mask"].unsqueeze(-1)  # [b, seq, 1]
            pooled = (hidden * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1)
            rows.append(pooled.cpu().numpy())
        stacked = np.vstack(rows)
        norms = np.linalg.norm(stacked, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        return stacked / norms


def build_backend(config) -> Backend:
    if config.backend == "deterministic":
        return DeterministicBackend(model_id=config.model_id, dim=config.dim)
    if config.backend == "transformers":
        return TransformersBackend(
            model_id=config.model_id, device=config.device, max_batch=config.max_batch
        )
    raise ValueError(f"unknown backend {config.backend!r}")
