import itertools
import json
import math
import random

import numpy as np
import pytest

from commentscore.corpus import CodeCommentPair, Language
from commentscore.informativeness.embeddings import cosine
from commentscore.relevance import (
    EmbeddingProviderError,
    FileEmbeddingProvider,
    HashEmbeddingProvider,
    SidecarEmbeddingProvider,
    TripletRecord,
    mine_hard_negatives,
    relevance,
    relevance_for_pair,
    write_triplets,
)


class MappingProvider:
    """Test provider with explicit text -> vector assignments."""

    def __init__(self, mapping):
        self.mapping = {k: np.asarray(v, dtype=np.float64) for k, v in mapping.items()}

    def embed_texts(self, texts):
        return [self.mapping[t] for t in texts]

    def embed_pair_side(self, pair, side):
        return self.embed_texts([pair.code if side == "code" else pair.comment])[0]


def _pair(pid, code, comment):
    return CodeCommentPair(pid, Language.PYTHON, code, comment)


# ----------------------------------------------------------------- relevance


def test_identical_strings_cosine_one():
    provider = HashEmbeddingProvider()
    text = "def f():\n    return 1"
    assert abs(relevance(text, text, provider) - 1.0) < 1e-9


def test_orthogonal_fixture_vectors():
    provider = MappingProvider({"code": (1.0, 0.0), "comment": (0.0, 1.0)})
    assert relevance("code", "comment", provider) == 0.0


def test_hand_cosine_45_degrees():
    provider = MappingProvider({"code": (1.0, 1.0), "comment": (1.0, 0.0)})
    assert abs(relevance("code", "comment", provider) - math.sqrt(0.5)) < 1e-9


def test_dimension_mismatch_rejected():
    provider = MappingProvider({"a": (1.0, 0.0), "b": (1.0, 0.0, 0.0)})
    with pytest.raises(EmbeddingProviderError, match="dimension"):
        relevance("a", "b", provider)


def test_scale_invariance():
    base = MappingProvider({"code": (0.3, -0.7, 0.2), "comment": (0.1, 0.5, -0.4)})
    scaled = MappingProvider(
        {k: tuple(5.0 * x for x in v) for k, v in
         {"code": (0.3, -0.7, 0.2), "comment": (0.1, 0.5, -0.4)}.items()}
    )
    a = relevance("code", "comment", base)
    b = relevance("code", "comment", scaled)
    assert abs(a - b) < 1e-9


def test_hash_provider_deterministic_across_instances():
    a = HashEmbeddingProvider().embed_texts(["same text"])[0]
    b = HashEmbeddingProvider().embed_texts(["same text"])[0]
    assert np.array_equal(a, b)
    assert abs(np.linalg.norm(a) - 1.0) < 1e-9


# ------------------------------------------------------------- file provider


def test_file_provider_by_id_and_text(tmp_path):
    vec_path = tmp_path / "emb.txt"
    vec_path.write_text(
        "4 2\n"
        "p1:code 1.0 0.0\n"
        "p1:comment 0.0 1.0\n"
        "p2:code 1.0 1.0\n"
        "p2:comment 1.0 0.0\n"
    )
    texts_path = tmp_path / "texts.jsonl"
    texts_path.write_text(json.dumps({"text": "ad hoc", "vector": [0.5, 0.5]}) + "\n")
    provider = FileEmbeddingProvider(vec_path, texts_path)

    p1 = _pair("p1", "code text", "comment text")
    assert relevance_for_pair(p1, provider) == 0.0
    p2 = _pair("p2", "c", "m")
    assert abs(relevance_for_pair(p2, provider) - math.sqrt(0.5)) < 1e-9
    assert provider.embed_texts(["ad hoc"])[0].tolist() == [0.5, 0.5]

    with pytest.raises(EmbeddingProviderError, match="p9:code"):
        relevance_for_pair(_pair("p9", "x", "y"), provider)
    with pytest.raises(EmbeddingProviderError, match="ad-hoc"):
        provider.embed_texts(["unknown text"])


def test_file_provider_bad_rows(tmp_path):
    path = tmp_path / "emb.txt"
    path.write_text("1 3\nkey 1.0 2.0\n")
    with pytest.raises(EmbeddingProviderError, match="expected 3"):
        FileEmbeddingProvider(path)


def test_sidecar_embedding_provider(stub_sidecar):
    provider = SidecarEmbeddingProvider(stub_sidecar)
    vecs = provider.embed_texts(["some code", "a comment"])
    assert [v.tolist() for v in vecs] == [[1.0, 0.0], [0.0, 1.0]]


def test_sidecar_embedding_unreachable():
    provider = SidecarEmbeddingProvider("http://127.0.0.1:1", timeout=0.5)
    with pytest.raises(EmbeddingProviderError):
        provider.embed_texts(["x"])


# -------------------------------------------------------------------- mining


def test_two_identical_comments_mine_each_other():
    provider = HashEmbeddingProvider()
    pairs = [
        _pair("a", "def f():\n    return 1", "shared comment text"),
        _pair("b", "def g():\n    return 2", "shared comment text"),
    ]
    records = mine_hard_negatives(pairs, provider, k=1, min_similarity=-1.0)
    by_anchor = {r.anchor_id: r for r in records}
    assert by_anchor["a"].negative_id == "b"
    assert by_anchor["b"].negative_id == "a"


def test_k_bound_and_descending_order():
    provider = HashEmbeddingProvider()
    pairs = [_pair(f"p{i}", f"code {i}", f"comment {i}") for i in range(6)]
    records = mine_hard_negatives(pairs, provider, k=3, min_similarity=-1.0)
    for anchor in {r.anchor_id for r in records}:
        sims = [r.similarity for r in records if r.anchor_id == anchor]
        assert len(sims) <= 3
        assert sims == sorted(sims, reverse=True)


def test_min_similarity_strictly_greater():
    provider = MappingProvider({
        "c1": (1.0, 0.0), "m1": (0.0, 1.0),
        "c2": (1.0, 0.0), "m2": (1.0, 0.0),
    })
    pairs = [_pair("p1", "c1", "m1"), _pair("p2", "c2", "m2")]
    records = mine_hard_negatives(pairs, provider, k=3, min_similarity=0.0)
    # anchor p1's only candidate m2 has cosine 1 -> kept;
    # anchor p2's only candidate m1 has cosine 0 -> excluded (strict >)
    assert {r.anchor_id for r in records} == {"p1"}


def test_all_candidates_at_or_below_zero_yield_empty():
    provider = MappingProvider({
        "c1": (1.0, 0.0), "m1": (1.0, 0.0),
        "c2": (-1.0, 0.0), "m2": (-1.0, 0.0),
    })
    pairs = [_pair("p1", "c1", "m1"), _pair("p2", "c2", "m2")]
    assert mine_hard_negatives(pairs, provider, k=3, min_similarity=0.0) == []


def test_mining_preconditions():
    provider = HashEmbeddingProvider()
    with pytest.raises(ValueError):
        mine_hard_negatives([_pair("a", "c", "m")], provider)
    with pytest.raises(ValueError):
        mine_hard_negatives(
            [_pair("a", "c", "m"), _pair("b", "c2", "m2")], provider, k=0
        )


def _exhaustive_oracle(pairs, provider, k, min_similarity):
    code = {p.id: provider.embed_pair_side(p, "code") for p in pairs}
    comment = {p.id: provider.embed_pair_side(p, "comment") for p in pairs}
    expected = []
    for anchor in pairs:
        scored = []
        for idx, other in enumerate(pairs):
            if other.id == anchor.id:
                continue
            sim = cosine(code[anchor.id], comment[other.id])
            if sim > min_similarity:
                scored.append((-sim, idx))
        scored.sort()
        expected.extend(
            TripletRecord(anchor.id, anchor.id, pairs[idx].id, -negsim)
            for negsim, idx in scored[:k]
        )
    return expected


def test_miner_matches_exhaustive_oracle_up_to_20_pairs():
    rng = random.Random(31)
    provider = HashEmbeddingProvider()
    for n in (2, 5, 11, 20):
        pairs = [
            _pair(f"p{i}", f"code body {i} {rng.random()}", f"words {rng.random()}")
            for i in range(n)
        ]
        for k, threshold in itertools.product((1, 3, 5), (0.0, -1.0, 0.15)):
            got = mine_hard_negatives(pairs, provider, k=k, min_similarity=threshold)
            expected = _exhaustive_oracle(pairs, provider, k, threshold)
            assert got == expected


def test_triplet_invariants_and_file_format(tmp_path):
    provider = HashEmbeddingProvider()
    pairs = [_pair(f"p{i}", f"code {i}", f"comment {i}") for i in range(5)]
    records = mine_hard_negatives(pairs, provider)  # defaults k=3, min_sim=0
    for rec in records:
        assert rec.negative_id != rec.positive_id
        assert rec.similarity > 0.0
    path = tmp_path / "triplets.jsonl"
    write_triplets(records, path)
    lines = [json.loads(l) for l in path.read_text().splitlines()]
    assert len(lines) == len(records)
    assert list(lines[0]) == ["anchor_id", "positive_id", "negative_id", "similarity"]
