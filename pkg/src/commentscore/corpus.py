"""Corpus data model, line-delimited JSON ingestion, and run configuration.

A corpus is a UTF-8 text file with one JSON object per line:

    {"id": str, "language": "python"|"java"|"javascript"|"csharp"|"go",
     "code": str, "comment": str, "label": bool?}

Score files use the same layout:

    {"id": str, "components": {"completeness": num, "informativeness": num,
     "description_length": num, "relevance": num}, "probability": num}

Loading is streaming and single-threaded; the returned records are frozen
dataclasses, safe to hand out to worker threads.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional


class Language(enum.Enum):
    PYTHON = "python"
    JAVA = "java"
    JAVASCRIPT = "javascript"
    CSHARP = "csharp"
    GO = "go"


class CorpusError(ValueError):
    """Malformed corpus or score file. Carries the offending line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


FEATURE_NAMES = ("completeness", "informativeness", "description_length", "relevance")


@dataclass(frozen=True)
class FeatureVector:
    """The four component scores fed to the quality classifier."""

    completeness: float
    informativeness: float
    description_length: float
    relevance: float

    def __post_init__(self):
        for name in FEATURE_NAMES:
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if not 0.0 <= self.completeness <= 1.0:
            raise ValueError(f"completeness out of [0,1]: {self.completeness}")
        if not 0.0 <= self.informativeness <= 1.0:
            raise ValueError(f"informativeness out of [0,1]: {self.informativeness}")
        if self.description_length < 0.0:
            raise ValueError(f"description_length negative: {self.description_length}")
        if not -1.0 <= self.relevance <= 1.0:
            raise ValueError(f"relevance out of [-1,1]: {self.relevance}")

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in FEATURE_NAMES}

    @classmethod
    def from_dict(cls, data: dict) -> "FeatureVector":
        missing = [name for name in FEATURE_NAMES if name not in data]
        if missing:
            raise ValueError(f"missing component(s): {', '.join(missing)}")
        return cls(**{name: float(data[name]) for name in FEATURE_NAMES})


@dataclass(frozen=True)
class CodeCommentPair:
    """One corpus record: a function and its raw comment text."""

    id: str
    language: Language
    code: str
    comment: str
    label: Optional[bool] = None


@dataclass(frozen=True)
class ScoredPair:
    """A pair's component scores plus the fused class-1 probability."""

    id: str
    components: FeatureVector
    probability: float

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"probability out of [0,1]: {self.probability}")


@dataclass
class RunConfig:
    """Pipeline knobs shared by the CLI commands.

    Provider strings:
      weight_provider     "uniform" | "file:PATH" | "sidecar:URL"
      embed_provider      "none" | "file:PATH"           (word vectors)
      relevance_provider  "hash" | "file:PATH[:TEXTS]" | "sidecar:URL"
    """

    similarity_threshold: float = 0.5
    filter_threshold: float = 0.5
    ce_clip_epsilon: float = 1e-15
    weight_provider: str = "uniform"
    embed_provider: str = "none"
    relevance_provider: str = "hash"
    sidecar_url: Optional[str] = None

    def __post_init__(self):
        if not 0.0 < self.similarity_threshold < 1.0:
            raise ValueError(f"similarity_threshold out of (0,1): {self.similarity_threshold}")
        if not 0.0 < self.filter_threshold < 1.0:
            raise ValueError(f"filter_threshold out of (0,1): {self.filter_threshold}")
        if not 0.0 < self.ce_clip_epsilon < 0.5:
            raise ValueError(f"ce_clip_epsilon out of (0,0.5): {self.ce_clip_epsilon}")

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config field(s): {', '.join(sorted(unknown))}")
        return cls(**data)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


_LANGUAGE_TAGS = {lang.value: lang for lang in Language}


def _parse_pair(obj: dict, lineno: int) -> CodeCommentPair:
    for field in ("id", "language", "code", "comment"):
        if field not in obj:
            raise CorpusError(f"missing field {field}", lineno)
    if not isinstance(obj["id"], str) or not obj["id"]:
        raise CorpusError("id must be a non-empty string", lineno)
    tag = obj["language"]
    if tag not in _LANGUAGE_TAGS:
        raise CorpusError(f"unknown language tag {tag!r}", lineno)
    if not isinstance(obj["code"], str) or not obj["code"]:
        raise CorpusError("code must be a non-empty string", lineno)
    if not isinstance(obj["comment"], str):
        raise CorpusError("comment must be a string", lineno)
    label = obj.get("label")
    if label is not None and not isinstance(label, bool):
        raise CorpusError(f"label must be a boolean, got {label!r}", lineno)
    return CodeCommentPair(
        id=obj["id"],
        language=_LANGUAGE_TAGS[tag],
        code=obj["code"],
        comment=obj["comment"],
        label=label,
    )


def iter_corpus(path: str | os.PathLike) -> Iterator[CodeCommentPair]:
    """Stream pairs from a corpus file, validating as it goes.

    Non-UTF-8 bytes are a hard error: term matching downstream is
    text-sensitive, so silent replacement would corrupt scores.
    """
    seen: dict[str, int] = {}
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise CorpusError(f"invalid UTF-8 ({exc.reason})", lineno) from exc
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"malformed JSON ({exc.msg})", lineno) from exc
            if not isinstance(obj, dict):
                raise CorpusError("record is not a JSON object", lineno)
            pair = _parse_pair(obj, lineno)
            if pair.id in seen:
                raise CorpusError(
                    f"duplicate id {pair.id!r} (first seen on line {seen[pair.id]})", lineno
                )
            seen[pair.id] = lineno
            yield pair


def load_corpus(path: str | os.PathLike) -> list[CodeCommentPair]:
    """Load a whole corpus file in order."""
    return list(iter_corpus(path))


def write_corpus(pairs: Iterable[CodeCommentPair], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pair in pairs:
            obj = {
                "id": pair.id,
                "language": pair.language.value,
                "code": pair.code,
                "comment": pair.comment,
            }
            if pair.label is not None:
                obj["label"] = pair.label
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def write_scores(pairs: Iterable[ScoredPair], path: str | os.PathLike) -> None:
    """Write one score object per line, field order id/components/probability."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pair in pairs:
            obj = {
                "id": pair.id,
                "components": pair.components.as_dict(),
                "probability": pair.probability,
            }
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def read_scores(path: str | os.PathLike) -> list[ScoredPair]:
    """Load a score file written by write_scores (round-trip inverse)."""
    out: list[ScoredPair] = []
    seen: dict[str, int] = {}
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise CorpusError(f"invalid UTF-8 ({exc.reason})", lineno) from exc
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"malformed JSON ({exc.msg})", lineno) from exc
            for field in ("id", "components", "probability"):
                if field not in obj:
                    raise CorpusError(f"missing field {field}", lineno)
            if obj["id"] in seen:
                raise CorpusError(
                    f"duplicate id {obj['id']!r} (first seen on line {seen[obj['id']]})", lineno
                )
            seen[obj["id"]] = lineno
            try:
                components = FeatureVector.from_dict(obj["components"])
                scored = ScoredPair(obj["id"], components, float(obj["probability"]))
            except ValueError as exc:
                raise CorpusError(str(exc), lineno) from exc
            out.append(scored)
    return out
