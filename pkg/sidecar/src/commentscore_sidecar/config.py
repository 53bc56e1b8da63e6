"""Service configuration: backend choice, model id, device, batching, port."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field


@dataclass
class SidecarConfig:
    backend: str = "deterministic"  # "deterministic" | "transformers"
    model_id: str = "deterministic-hash-v1"
    device: str = "cpu"
    max_batch: int = 16
    port: int = 8914
    host: str = "127.0.0.1"
    dim: int = 64  # deterministic backend only; transformers uses the model's

    extra: dict = field(default_factory=dict)

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "SidecarConfig":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f for f in cls.__dataclass_fields__ if f != "extra"}
        kwargs = {k: v for k, v in data.items() if k in known}
        extra = {k: v for k, v in data.items() if k not in known}
        return cls(**kwargs, extra=extra)
