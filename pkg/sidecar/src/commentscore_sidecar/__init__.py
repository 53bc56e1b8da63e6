"""HTTP sidecar serving transformer-derived signals to the comment scorer:
per-term attention weights and dense unit-normalized text embeddings."""

from .backends import DeterministicBackend, TransformersBackend, build_backend
from .config import SidecarConfig
from .service import create_app

__version__ = "0.1.0"

__all__ = [
    "SidecarConfig",
    "DeterministicBackend",
    "TransformersBackend",
    "build_backend",
    "create_app",
]
