"""Command-line interface for batch scoring, filtering, and evaluation.

Exit codes: 0 success, 1 data errors (malformed corpus lines, missing
labels/scores), 2 config errors (unreadable inputs, bad flags, provider
setup or provider calls failing).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import evaluation
from .classifier import (
    ModelFormatError,
    load_model,
    predict_many,
    save_model,
    train,
)
from .corpus import (
    CorpusError,
    FEATURE_NAMES,
    RunConfig,
    iter_corpus,
    load_corpus,
    read_scores,
    write_scores,
)
from .docparse import DocParseError
from .informativeness import WeightProviderError
from .pipeline import (
    ScoreSummary,
    build_context,
    compute_features,
    iter_scored,
    score_pair,
)
from .relevance import EmbeddingProviderError, mine_hard_negatives, write_triplets

_CONFIG_ERRORS = (
    FileNotFoundError,
    PermissionError,
    IsADirectoryError,
    NotADirectoryError,
    ModelFormatError,
    WeightProviderError,
    EmbeddingProviderError,
    ValueError,
)
_DATA_ERRORS = (CorpusError,)


def _add_provider_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file mirroring the run configuration")
    parser.add_argument(
        "--weight-provider", help="uniform | file:PATH | sidecar:URL"
    )
    parser.add_argument("--embed-provider", help="none | file:PATH (word vectors)")
    parser.add_argument(
        "--relevance-provider", help="hash | file:PATH[,TEXTS] | sidecar:URL"
    )


def _load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    if getattr(args, "weight_provider", None):
        config.weight_provider = args.weight_provider
    if getattr(args, "embed_provider", None):
        config.embed_provider = args.embed_provider
    if getattr(args, "relevance_provider", None):
        config.relevance_provider = args.relevance_provider
    if getattr(args, "threshold", None) is not None:
        config.filter_threshold = args.threshold
    return config


def _require_labels(pairs):
    labels = []
    for pair in pairs:
        if pair.label is None:
            raise CorpusError(f"pair {pair.id!r} has no label; training/eval needs labels")
        labels.append(pair.label)
    return labels


def _emit(report: dict, path: str | None) -> None:
    text = json.dumps(report, indent=1, ensure_ascii=False) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------ commands


def _cmd_score(args) -> int:
    config = _load_config(args)
    model = load_model(args.model)
    ctx = build_context(config, model)
    summary = ScoreSummary()
    write_scores(
        iter_scored(iter_corpus(args.corpus), ctx, jobs=args.jobs, summary=summary),
        args.out,
    )
    _emit(
        {
            "scored": summary.scored,
            "flagged": summary.flagged,
            "warnings": [f"{pid}: {msg}" for pid, msg in summary.diagnostics],
            "config": config.as_dict(),
        },
        None,
    )
    return 0


def _cmd_filter(args) -> int:
    config = _load_config(args)
    threshold = config.filter_threshold

    if args.scores:
        probabilities = {s.id: s.probability for s in read_scores(args.scores)}

        def probability_for(pair_id, pair, lineno):
            if pair_id not in probabilities:
                raise CorpusError(f"no score for pair {pair_id!r}", lineno)
            return probabilities[pair_id]

    elif args.model:
        model = load_model(args.model)
        ctx = build_context(config, model)

        def probability_for(pair_id, pair, lineno):
            return score_pair(pair, ctx)[0].probability

    else:
        raise ValueError("filter needs --scores or --model")

    retained = removed = 0
    pair_stream = iter_corpus(args.corpus)
    with open(args.corpus, "rb") as src, open(args.out, "wb") as dst:
        lineno = 0
        for raw in src:
            lineno += 1
            if not raw.strip():
                continue
            pair = next(pair_stream)
            if probability_for(pair.id, pair, lineno) >= threshold:
                dst.write(raw)
                retained += 1
            else:
                removed += 1
    _emit(
        {"retained": retained, "removed": removed, "threshold": threshold,
         "config": config.as_dict()},
        None,
    )
    return 0


def _cmd_train(args) -> int:
    config = _load_config(args)
    pairs = load_corpus(args.corpus)
    labels = _require_labels(pairs)
    ctx = build_context(config)
    features = []
    flagged = 0
    for pair in pairs:
        fv, diags = compute_features(pair, ctx)
        features.append(fv)
        flagged += bool(diags)

    hyperparams = {}
    if args.l2 is not None:
        hyperparams["l2"] = args.l2
    if args.svm_c is not None:
        hyperparams["C"] = args.svm_c
    if args.svm_gamma is not None:
        hyperparams["gamma"] = args.svm_gamma

    model = train(
        features, labels, kind=args.kind,
        hyperparams=hyperparams or None, seed=args.seed,
    )
    save_model(model, args.out)
    probs = predict_many(model, features)
    report = {
        "model": args.out,
        "kind": args.kind,
        "seed": args.seed,
        "examples": len(pairs),
        "positives": int(sum(labels)),
        "flagged": flagged,
        "train_f1": evaluation.f1(labels, probs),
        "train_cross_entropy": evaluation.cross_entropy(
            labels, probs, config.ce_clip_epsilon
        ),
        "meta": model.meta,
        "config": config.as_dict(),
    }
    _emit(report, args.report)
    return 0


def _cmd_eval(args) -> int:
    config = _load_config(args)
    pairs = load_corpus(args.corpus)
    labels = _require_labels(pairs)
    scores = read_scores(args.scores)
    by_id = {s.id: s for s in scores}
    missing = [p.id for p in pairs if p.id not in by_id]
    if missing:
        raise CorpusError(f"no score for pair(s): {', '.join(missing[:5])}")
    probs = [by_id[p.id].probability for p in pairs]

    per_component = {}
    for name in FEATURE_NAMES:
        bad = [getattr(by_id[p.id].components, name) for p in pairs if not p.label]
        good = [getattr(by_id[p.id].components, name) for p in pairs if p.label]
        if bad and good:
            result = evaluation.mann_whitney(bad, good)
            per_component[name] = {
                "u_statistic": result.u_statistic,
                "p_value": result.p_value,
                "n_bad": result.n_bad,
                "n_good": result.n_good,
                "exact": result.exact,
            }
    report = {
        "examples": len(pairs),
        "cross_entropy": evaluation.cross_entropy(labels, probs, config.ce_clip_epsilon),
        "f1": evaluation.f1(labels, probs, config.filter_threshold),
        "mann_whitney": per_component,
        "threshold": config.filter_threshold,
        "config": config.as_dict(),
    }
    _emit(report, args.out)
    return 0


def _cmd_ablate(args) -> int:
    config = _load_config(args)
    pairs = load_corpus(args.corpus)
    labels = _require_labels(pairs)
    ctx = build_context(config)
    features = [compute_features(p, ctx)[0] for p in pairs]
    table = evaluation.run_ablation(
        features, labels, test_fraction=args.test_fraction,
        kind=args.kind, seed=args.seed,
    )
    report = {
        "rows": {"+".join(subset): score for subset, score in table.rows.items()},
        "best": "+".join(table.best()[0]),
        "kind": table.kind,
        "seed": table.seed,
        "test_fraction": table.test_fraction,
        "config": config.as_dict(),
    }
    _emit(report, args.out)
    return 0


def _cmd_mine_negatives(args) -> int:
    config = _load_config(args)
    pairs = load_corpus(args.corpus)
    provider = build_context(config).relevance_provider
    records = mine_hard_negatives(
        pairs, provider, k=args.k, min_similarity=args.min_similarity
    )
    write_triplets(records, args.out)
    _emit(
        {"anchors": len(pairs), "triplets": len(records), "k": args.k,
         "min_similarity": args.min_similarity, "config": config.as_dict()},
        None,
    )
    return 0


# --------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commentscore",
        description="Reference-free quality scoring and filtering for code comments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="compute component scores and probabilities")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    _add_provider_flags(p)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("filter", help="keep pairs at or above the threshold")
    p.add_argument("--corpus", required=True)
    p.add_argument("--scores")
    p.add_argument("--model")
    p.add_argument("--out", required=True)
    p.add_argument("--threshold", type=float)
    p.add_argument("--jobs", type=int, default=1)
    _add_provider_flags(p)
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("train", help="fit a quality model on a labeled corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--kind", choices=("logistic", "svm_rbf"), default="svm_rbf")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report")
    p.add_argument("--l2", type=float)
    p.add_argument("--svm-c", type=float, dest="svm_c")
    p.add_argument("--svm-gamma", type=float, dest="svm_gamma")
    _add_provider_flags(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="cross-entropy/F1/Mann-Whitney on scored data")
    p.add_argument("--corpus", required=True)
    p.add_argument("--scores", required=True)
    p.add_argument("--out")
    p.add_argument("--threshold", type=float)
    _add_provider_flags(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("ablate", help="F1 per feature subset (15 rows)")
    p.add_argument("--corpus", required=True)
    p.add_argument("--kind", choices=("logistic", "svm_rbf"), default="svm_rbf")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--out")
    _add_provider_flags(p)
    p.set_defaults(func=_cmd_ablate)

    p = sub.add_parser("mine-negatives", help="mine hard negatives into a triplet file")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--min-similarity", type=float, default=0.0)
    _add_provider_flags(p)
    p.set_defaults(func=_cmd_mine_negatives)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DocParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
