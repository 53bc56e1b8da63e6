"""Reference-free quality scoring and dataset filtering for structured code
comments across Python, Java, JavaScript, C#, and Go.

Four component scores per code-comment pair - completeness of the
documented elements, informativeness of code terms covered by the comment,
description length, and code-comment embedding relevance - are fused by a
trained binary classifier into a probability that the comment is good.
"""

from .classifier import (
    QualityModel,
    description_length,
    load_model,
    predict,
    save_model,
    train,
)
from .completeness import CompletenessBreakdown, completeness, completeness_go
from .corpus import (
    CodeCommentPair,
    CorpusError,
    FEATURE_NAMES,
    FeatureVector,
    Language,
    RunConfig,
    ScoredPair,
    load_corpus,
    read_scores,
    write_scores,
)
from .docparse import CommentDoc, DocElements, DocParseError, extract_code_elements, parse_comment
from .evaluation import cross_entropy, f1, mann_whitney, run_ablation
from .informativeness import Term, TermMatchReport, extract_terms, informativeness, weigh_terms
from .relevance import TripletRecord, mine_hard_negatives, relevance

__version__ = "0.1.0"

__all__ = [
    "CodeCommentPair",
    "CommentDoc",
    "CompletenessBreakdown",
    "CorpusError",
    "DocElements",
    "DocParseError",
    "FEATURE_NAMES",
    "FeatureVector",
    "Language",
    "QualityModel",
    "RunConfig",
    "ScoredPair",
    "Term",
    "TermMatchReport",
    "TripletRecord",
    "completeness",
    "completeness_go",
    "cross_entropy",
    "description_length",
    "extract_code_elements",
    "extract_terms",
    "f1",
    "informativeness",
    "load_corpus",
    "load_model",
    "mann_whitney",
    "mine_hard_negatives",
    "parse_comment",
    "predict",
    "read_scores",
    "relevance",
    "run_ablation",
    "save_model",
    "train",
    "weigh_terms",
    "write_scores",
]
