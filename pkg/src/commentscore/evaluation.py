"""Statistical validation: Mann-Whitney U, cross-entropy, F1, ablation.

mann_whitney computes the exact two-sided p-value by integer counting of
the U null distribution whenever n_bad * n_good <= 10000 and the pooled
sample has no ties; otherwise it falls back to the normal approximation
with tie and continuity corrections. The exact counting recurrence builds
the same distribution full permutation enumeration would, in polynomial
time, so small-sample results match a brute-force oracle exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .corpus import FEATURE_NAMES, FeatureVector
from .classifier import predict_many, train

_EXACT_LIMIT = 10000


@dataclass(frozen=True)
class MWTestResult:
    u_statistic: float  # U of the first ("bad") group
    p_value: float
    n_bad: int
    n_good: int
    exact: bool


@dataclass(frozen=True)
class AblationTable:
    rows: dict[tuple[str, ...], float]
    kind: str
    seed: int
    test_fraction: float

    def best(self) -> tuple[tuple[str, ...], float]:
        return max(self.rows.items(), key=lambda kv: (kv[1], -len(kv[0])))


def _rankdata(values: Sequence[float]) -> list[float]:
    """Average ranks (1-based), ties share the mean of their rank block."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def u_null_distribution(n1: int, n2: int) -> list[int]:
    """counts[u] = number of rank arrangements with U statistic equal to u.

    Built by the Gaussian-binomial recurrence: multiply out
    prod_i (1 - q^(n2+i)) / (1 - q^i); all intermediate values are exact
    integers and the counts sum to C(n1+n2, n1).
    """
    size = n1 * n2 + 1
    coef = [0] * size
    coef[0] = 1
    for i in range(1, n1 + 1):
        a = n2 + i
        for u in range(size - 1, a - 1, -1):
            coef[u] -= coef[u - a]
        for u in range(i, size):
            coef[u] += coef[u - i]
    return coef


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def mann_whitney(bad: Sequence[float], good: Sequence[float]) -> MWTestResult:
    """Two-sided Mann-Whitney U test; U is reported for the bad group."""
    n1, n2 = len(bad), len(good)
    if n1 == 0 or n2 == 0:
        raise ValueError("both groups must be non-empty")
    pooled = list(bad) + list(good)
    ranks = _rankdata(pooled)
    r1 = sum(ranks[:n1])
    u1 = r1 - n1 * (n1 + 1) / 2.0

    has_ties = len(set(pooled)) != len(pooled)
    if not has_ties and n1 * n2 <= _EXACT_LIMIT:
        counts = u_null_distribution(n1, n2)
        total = sum(counts)
        u = int(round(u1))
        cdf_le = Fraction(sum(counts[: u + 1]), total)
        cdf_ge = Fraction(sum(counts[u:]), total)
        p = min(Fraction(1), 2 * min(cdf_le, cdf_ge))
        return MWTestResult(float(u1), float(p), n1, n2, exact=True)

    n = n1 + n2
    tie_term = 0.0
    seen: dict[float, int] = {}
    for value in pooled:
        seen[value] = seen.get(value, 0) + 1
    for count in seen.values():
        tie_term += count**3 - count
    variance = (n1 * n2 / 12.0) * ((n + 1) - tie_term / (n * (n - 1)))
    if variance <= 0:
        return MWTestResult(float(u1), 1.0, n1, n2, exact=False)
    numerator = u1 - n1 * n2 / 2.0
    if abs(numerator) <= 0.5:
        adjusted = 0.0
    else:
        adjusted = numerator - math.copysign(0.5, numerator)
    z = adjusted / math.sqrt(variance)
    p = min(1.0, 2.0 * _normal_sf(abs(z)))
    return MWTestResult(float(u1), p, n1, n2, exact=False)


def mann_whitney_permutation_oracle(
    bad: Sequence[float], good: Sequence[float]
) -> float:
    """Literal full-enumeration two-sided p; feasible for tiny groups only."""
    n1 = len(bad)
    pooled = list(bad) + list(good)
    ranks = _rankdata(pooled)
    observed = sum(ranks[:n1]) - n1 * (n1 + 1) / 2.0

    us = []
    for combo in itertools.combinations(range(len(pooled)), n1):
        r = sum(ranks[i] for i in combo)
        us.append(r - n1 * (n1 + 1) / 2.0)
    total = len(us)
    le = sum(1 for u in us if u <= observed)
    ge = sum(1 for u in us if u >= observed)
    return float(min(Fraction(1), 2 * min(Fraction(le, total), Fraction(ge, total))))


def cross_entropy(
    labels: Sequence[bool],
    probabilities: Sequence[float],
    clip_epsilon: float = 1e-15,
) -> float:
    """Mean negative log-likelihood with probabilities clipped away from 0/1."""
    if len(labels) != len(probabilities):
        raise ValueError("labels and probabilities must have the same length")
    if not labels:
        raise ValueError("need at least one example")
    p = np.asarray(probabilities, dtype=np.float64)
    if not np.isfinite(p).all():
        raise ValueError("probabilities must be finite")
    p = np.clip(p, clip_epsilon, 1.0 - clip_epsilon)
    y = np.asarray([1.0 if l else 0.0 for l in labels])
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def f1(
    labels: Sequence[bool],
    probabilities: Sequence[float],
    threshold: float = 0.5,
) -> float:
    """Binary F1 of class 1; prediction is strict "probability > threshold",
    so a probability exactly at the threshold classifies as class 0."""
    if len(labels) != len(probabilities):
        raise ValueError("labels and probabilities must have the same length")
    tp = fp = fn = 0
    for label, prob in zip(labels, probabilities):
        pred = prob > threshold
        if pred and label:
            tp += 1
        elif pred and not label:
            fp += 1
        elif not pred and label:
            fn += 1
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def stratified_split(
    labels: Sequence[bool], test_fraction: float, seed: int
) -> tuple[list[int], list[int]]:
    """Deterministic stratified index split; errors if either half loses a class."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction out of (0,1): {test_fraction}")
    rng = np.random.default_rng(seed)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for cls in (False, True):
        members = [i for i, l in enumerate(labels) if l == cls]
        if not members:
            raise ValueError("labels contain a single class")
        rng.shuffle(members)
        n_test = int(round(len(members) * test_fraction))
        if n_test == 0 or n_test == len(members):
            raise ValueError(
                f"degenerate split: class {cls} would have an empty half"
            )
        test_idx.extend(members[:n_test])
        train_idx.extend(members[n_test:])
    return sorted(train_idx), sorted(test_idx)


def feature_subsets() -> list[tuple[str, ...]]:
    """All 15 non-empty subsets of the four features, small subsets first."""
    subsets = []
    for size in range(1, len(FEATURE_NAMES) + 1):
        subsets.extend(itertools.combinations(FEATURE_NAMES, size))
    return subsets


def run_ablation(
    features: Sequence[FeatureVector],
    labels: Sequence[bool],
    test_fraction: float = 0.2,
    kind: str = "svm_rbf",
    hyperparams: dict | None = None,
    seed: int = 0,
) -> AblationTable:
    """Train one model per feature subset, report held-out F1 for each."""
    train_idx, test_idx = stratified_split(labels, test_fraction, seed)
    train_x = [features[i] for i in train_idx]
    train_y = [labels[i] for i in train_idx]
    test_x = [features[i] for i in test_idx]
    test_y = [labels[i] for i in test_idx]

    rows: dict[tuple[str, ...], float] = {}
    for subset in feature_subsets():
        model = train(
            train_x, train_y, kind=kind, feature_mask=subset,
            hyperparams=hyperparams, seed=seed,
        )
        probs = predict_many(model, test_x)
        rows[subset] = f1(test_y, probs)
    return AblationTable(rows=rows, kind=kind, seed=seed, test_fraction=test_fraction)
