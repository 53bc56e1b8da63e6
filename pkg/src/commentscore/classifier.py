"""Binary quality classifier fusing the four component scores.

Two model kinds, both trained on z-scored features:

  logistic   L2-regularized maximum likelihood, accelerated gradient descent
             (tolerance 1e-8 on the gradient norm, capped at 10000 steps)
  svm_rbf    RBF-kernel SVM solved with a deterministic SMO, calibrated with
             a Platt sigmoid fitted on the training decision values

Features with zero variance in the training data are dropped from the
active set (an all-constant dataset degenerates to an intercept-only
model). Trained models are immutable and predict() is pure.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .corpus import FEATURE_NAMES, FeatureVector
from .docparse import CommentDoc

_PROB_EPS = 1e-12
_STD_FLOOR = 1e-12


class ModelFormatError(ValueError):
    """Model file does not match the expected schema."""


def description_length(comment_doc: CommentDoc) -> float:
    """Character count of the full raw comment text."""
    return float(len(comment_doc.raw_text))


def description_lengths(comment_doc: CommentDoc) -> tuple[float, float]:
    """(total length, leading-description length) - the latter for reports."""
    return (
        float(len(comment_doc.raw_text)),
        float(len(comment_doc.leading_description)),
    )


@dataclass
class QualityModel:
    kind: str
    feature_mask: tuple[str, ...]
    active_features: tuple[str, ...]
    scaler_mean: np.ndarray
    scaler_std: np.ndarray
    weights: Optional[np.ndarray] = None  # logistic
    bias: float = 0.0
    gamma: Optional[float] = None  # svm_rbf
    support_vectors: Optional[np.ndarray] = None
    dual_coef: Optional[np.ndarray] = None
    svm_bias: float = 0.0
    platt_a: Optional[float] = None
    platt_b: Optional[float] = None
    meta: dict = field(default_factory=dict)


def _sigmoid(z):
    z = np.atleast_1d(np.asarray(z, dtype=np.float64))
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _sigmoid_scalar(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def _feature_matrix(features: Sequence[FeatureVector], names: Sequence[str]) -> np.ndarray:
    return np.asarray(
        [[getattr(fv, name) for name in names] for fv in features], dtype=np.float64
    )


def _standardize(model: QualityModel, features: Sequence[FeatureVector]) -> np.ndarray:
    raw = _feature_matrix(features, model.active_features)
    if raw.shape[1] == 0:
        return raw
    return (raw - model.scaler_mean) / model.scaler_std


# --------------------------------------------------------------- logistic


def _train_logistic(Z: np.ndarray, y: np.ndarray, l2: float, tol: float, max_iter: int):
    """Accelerated gradient descent on the regularized logistic loss."""
    n, d = Z.shape
    w = np.zeros(d)
    b = 0.0

    Zt = np.hstack([Z, np.ones((n, 1))])
    lipschitz = (np.linalg.norm(Zt, 2) ** 2) / (4.0 * n) + l2
    step = 1.0 / lipschitz

    def gradient(w_, b_):
        margin = Z @ w_ + b_
        s = _sigmoid(-y * margin)  # = 1 - sigma(y * margin)
        coeff = -(y * s) / n
        return Z.T @ coeff + l2 * w_, float(np.sum(coeff))

    vw, vb = w.copy(), b
    t_prev = 1.0
    grad_norm = math.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        gw, gb = gradient(vw, vb)
        w_next = vw - step * gw
        b_next = vb - step * gb
        t_next = (1.0 + math.sqrt(1.0 + 4.0 * t_prev * t_prev)) / 2.0
        beta = (t_prev - 1.0) / t_next
        vw = w_next + beta * (w_next - w)
        vb = b_next + beta * (b_next - b)
        w, b, t_prev = w_next, b_next, t_next

        gw, gb = gradient(w, b)
        grad_norm = math.sqrt(float(np.dot(gw, gw)) + gb * gb)
        if grad_norm <= tol:
            break
    return w, b, grad_norm, iterations


# -------------------------------------------------------------------- SMO


def _smo(K: np.ndarray, y: np.ndarray, C: float, tol: float, seed: int, max_examines: int):
    """Deterministic sequential minimal optimization on a precomputed Gram."""
    n = len(y)
    alpha = np.zeros(n)
    b = 0.0
    E = -y.astype(np.float64)  # decision starts at 0
    rng = np.random.default_rng(seed)
    eps = 1e-12
    examines = 0

    def take_step(i1: int, i2: int) -> bool:
        nonlocal b
        if i1 == i2:
            return False
        a1, a2 = alpha[i1], alpha[i2]
        y1, y2 = y[i1], y[i2]
        E1, E2 = E[i1], E[i2]
        s = y1 * y2
        if s > 0:
            lo, hi = max(0.0, a1 + a2 - C), min(C, a1 + a2)
        else:
            lo, hi = max(0.0, a2 - a1), min(C, C + a2 - a1)
        if hi - lo < eps:
            return False
        k11, k12, k22 = K[i1, i1], K[i1, i2], K[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2_new = a2 + y2 * (E1 - E2) / eta
            a2_new = min(hi, max(lo, a2_new))
        else:
            # objective at both clip ends; move to the strictly better one
            f1 = y1 * (E1 + b) - a1 * k11 - s * a2 * k12
            f2 = y2 * (E2 + b) - s * a1 * k12 - a2 * k22
            l1 = a1 + s * (a2 - lo)
            h1 = a1 + s * (a2 - hi)
            obj_lo = (
                l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22
                + s * lo * l1 * k12
            )
            obj_hi = (
                h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22
                + s * hi * h1 * k12
            )
            if obj_lo < obj_hi - eps:
                a2_new = lo
            elif obj_hi < obj_lo - eps:
                a2_new = hi
            else:
                return False
        if abs(a2_new - a2) < eps * (a2_new + a2 + eps):
            return False
        a1_new = a1 + s * (a2 - a2_new)

        b1 = E1 + y1 * (a1_new - a1) * k11 + y2 * (a2_new - a2) * k12 + b
        b2 = E2 + y1 * (a1_new - a1) * k12 + y2 * (a2_new - a2) * k22 + b
        if 0 < a1_new < C:
            b_new = b1
        elif 0 < a2_new < C:
            b_new = b2
        else:
            b_new = (b1 + b2) / 2.0

        delta = (
            y1 * (a1_new - a1) * K[i1, :]
            + y2 * (a2_new - a2) * K[i2, :]
            - (b_new - b)
        )
        E[:] = E + delta
        alpha[i1], alpha[i2] = a1_new, a2_new
        b = b_new
        return True

    def examine(i2: int) -> int:
        y2, a2, e2 = y[i2], alpha[i2], E[i2]
        r2 = e2 * y2
        if (r2 < -tol and a2 < C) or (r2 > tol and a2 > 0):
            non_bound = np.flatnonzero((alpha > eps) & (alpha < C - eps))
            if len(non_bound) > 1:
                i1 = int(non_bound[np.argmax(np.abs(E[non_bound] - e2))])
                if take_step(i1, i2):
                    return 1
            if len(non_bound):
                start = int(rng.integers(len(non_bound)))
                for offset in range(len(non_bound)):
                    if take_step(int(non_bound[(start + offset) % len(non_bound)]), i2):
                        return 1
            start = int(rng.integers(n))
            for offset in range(n):
                if take_step((start + offset) % n, i2):
                    return 1
        return 0

    examine_all = True
    num_changed = 0
    converged = True
    while num_changed > 0 or examine_all:
        num_changed = 0
        indices = range(n) if examine_all else [
            int(i) for i in np.flatnonzero((alpha > eps) & (alpha < C - eps))
        ]
        for i2 in indices:
            num_changed += examine(i2)
            examines += 1
            if examines > max_examines:
                converged = False
                num_changed = 0
                break
        if not converged:
            break
        if examine_all:
            examine_all = False
        elif num_changed == 0:
            examine_all = True
    decision = (alpha * y) @ K - b
    return alpha, -b, decision, converged


def kkt_residuals(alpha: np.ndarray, y: np.ndarray, decision: np.ndarray, C: float):
    """Per-point KKT violation of the soft-margin dual optimality conditions."""
    margin = y * decision
    bound = 1e-8 * C
    residual = np.empty_like(margin)
    at_zero = alpha <= bound
    at_c = alpha >= C - bound
    interior = ~(at_zero | at_c)
    residual[at_zero] = np.maximum(0.0, 1.0 - margin[at_zero])
    residual[at_c] = np.maximum(0.0, margin[at_c] - 1.0)
    residual[interior] = np.abs(margin[interior] - 1.0)
    return residual


def _fit_platt(decision: np.ndarray, labels: np.ndarray, max_iter: int = 200):
    """Platt sigmoid fit with prior-corrected targets (Newton + backtracking)."""
    prior1 = float(np.sum(labels))
    prior0 = float(len(labels) - prior1)
    hi = (prior1 + 1.0) / (prior1 + 2.0)
    lo = 1.0 / (prior0 + 2.0)
    t = np.where(labels > 0, hi, lo)

    A, B = 0.0, math.log((prior0 + 1.0) / (prior1 + 1.0))
    sigma = 1e-12
    min_step = 1e-10

    def objective(a, b):
        fapb = decision * a + b
        pos = fapb >= 0
        out = np.empty_like(fapb)
        out[pos] = t[pos] * fapb[pos] + np.log1p(np.exp(-fapb[pos]))
        out[~pos] = (t[~pos] - 1.0) * fapb[~pos] + np.log1p(np.exp(fapb[~pos]))
        return float(np.sum(out))

    fval = objective(A, B)
    for _ in range(max_iter):
        fapb = decision * A + B
        p = _sigmoid(-fapb)  # P(y=1 | f) under current params
        q = 1.0 - p
        d1 = t - p
        g1 = float(np.sum(decision * d1))
        g2 = float(np.sum(d1))
        if abs(g1) < 1e-5 and abs(g2) < 1e-5:
            break
        d2 = p * q
        h11 = float(np.sum(decision * decision * d2)) + sigma
        h22 = float(np.sum(d2)) + sigma
        h21 = float(np.sum(decision * d2))
        det = h11 * h22 - h21 * h21
        dA = -(h22 * g1 - h21 * g2) / det
        dB = -(-h21 * g1 + h11 * g2) / det
        gd = g1 * dA + g2 * dB

        stepsize = 1.0
        while stepsize >= min_step:
            new_a, new_b = A + stepsize * dA, B + stepsize * dB
            new_f = objective(new_a, new_b)
            if new_f < fval + 1e-4 * stepsize * gd:
                A, B, fval = new_a, new_b, new_f
                break
            stepsize /= 2.0
        else:
            break
    return A, B


# ------------------------------------------------------------------- train


_LOGISTIC_DEFAULTS = {"l2": 1e-4, "tol": 1e-8, "max_iter": 10000}
_SVM_DEFAULTS = {"C": 1.0, "gamma": "scale", "tol": 1e-3, "max_examines": 2_000_000}


def train(
    features: Sequence[FeatureVector],
    labels: Sequence[bool],
    kind: str = "svm_rbf",
    feature_mask: Sequence[str] | None = None,
    hyperparams: dict | None = None,
    seed: int = 0,
) -> QualityModel:
    if kind not in ("logistic", "svm_rbf"):
        raise ValueError(f"unknown model kind {kind!r}")
    if len(features) != len(labels):
        raise ValueError("features and labels must have the same length")
    labels01 = np.asarray([1.0 if l else 0.0 for l in labels])
    if labels01.min() == labels01.max():
        raise ValueError("labels contain a single class; need both")

    mask = tuple(feature_mask) if feature_mask else FEATURE_NAMES
    unknown = [m for m in mask if m not in FEATURE_NAMES]
    if unknown:
        raise ValueError(f"unknown feature(s) in mask: {unknown}")

    raw = _feature_matrix(features, mask)
    if not np.isfinite(raw).all():
        raise ValueError("non-finite feature value in training data")

    mean = raw.mean(axis=0)
    std = raw.std(axis=0)
    keep = std > _STD_FLOOR * np.maximum(1.0, np.abs(mean))
    active = tuple(name for name, k in zip(mask, keep) if k)
    dropped = [name for name, k in zip(mask, keep) if not k]
    Z = (raw[:, keep] - mean[keep]) / std[keep]
    y = np.where(labels01 > 0, 1.0, -1.0)

    params = dict(_LOGISTIC_DEFAULTS if kind == "logistic" else _SVM_DEFAULTS)
    params.update(hyperparams or {})

    model = QualityModel(
        kind=kind,
        feature_mask=mask,
        active_features=active,
        scaler_mean=mean[keep],
        scaler_std=std[keep],
    )
    meta = {"seed": seed, "hyperparams": dict(params)}
    if dropped:
        meta["dropped_features"] = dropped

    if kind == "logistic":
        w, b, grad_norm, iters = _train_logistic(
            Z, y, float(params["l2"]), float(params["tol"]), int(params["max_iter"])
        )
        model.weights = w
        model.bias = b
        meta["gradient_norm"] = grad_norm
        meta["iterations"] = iters
    else:
        if params["gamma"] == "scale":
            variance = float(Z.var()) if Z.size else 0.0
            gamma = 1.0 / (Z.shape[1] * variance) if Z.shape[1] and variance > 0 else 1.0
        else:
            gamma = float(params["gamma"])
        sq = _pairwise_sq_dists(Z, Z)
        K = np.exp(-gamma * sq)
        alpha, svm_bias, decision, converged = _smo(
            K, y, float(params["C"]), float(params["tol"]), seed,
            int(params["max_examines"]),
        )
        support = alpha > 1e-8
        model.gamma = gamma
        model.support_vectors = Z[support]
        model.dual_coef = (alpha * y)[support]
        model.svm_bias = svm_bias
        model.platt_a, model.platt_b = _fit_platt(decision, labels01)
        meta["converged"] = bool(converged)
        meta["n_support"] = int(np.sum(support))
        meta["hyperparams"]["gamma"] = gamma
    model.meta = meta
    return model


def _pairwise_sq_dists(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[0]))
    aa = np.sum(A * A, axis=1)[:, None]
    bb = np.sum(B * B, axis=1)[None, :]
    return np.maximum(aa + bb - 2.0 * (A @ B.T), 0.0)


# ----------------------------------------------------------------- predict


def decision_value(model: QualityModel, features: FeatureVector) -> float:
    """Raw pre-sigmoid score (logit / SVM decision value)."""
    z = _standardize(model, [features])
    if model.kind == "logistic":
        return float(z[0] @ model.weights + model.bias)
    K = np.exp(-model.gamma * _pairwise_sq_dists(model.support_vectors, z))
    return float(model.dual_coef @ K[:, 0] + model.svm_bias)


def predict(model: QualityModel, features: FeatureVector) -> float:
    """Probability of the "good" class, strictly inside (0,1)."""
    value = decision_value(model, features)
    if model.kind == "logistic":
        p = _sigmoid_scalar(value)
    else:
        p = _sigmoid_scalar(-(model.platt_a * value + model.platt_b))
    return min(max(p, _PROB_EPS), 1.0 - _PROB_EPS)


def predict_many(model: QualityModel, features: Sequence[FeatureVector]) -> np.ndarray:
    return np.asarray([predict(model, fv) for fv in features])


# --------------------------------------------------------------- save/load


def save_model(model: QualityModel, path: str | os.PathLike) -> None:
    obj = {
        "kind": model.kind,
        "feature_mask": list(model.feature_mask),
        "active_features": list(model.active_features),
        "scaler": {
            "mean": list(map(float, model.scaler_mean)),
            "std": list(map(float, model.scaler_std)),
        },
        "meta": model.meta,
    }
    if model.kind == "logistic":
        obj["logistic"] = {
            "weights": list(map(float, model.weights)),
            "bias": float(model.bias),
        }
    else:
        obj["svm"] = {
            "gamma": float(model.gamma),
            "support_vectors": [list(map(float, row)) for row in model.support_vectors],
            "dual_coef": list(map(float, model.dual_coef)),
            "bias": float(model.svm_bias),
            "platt": {"a": float(model.platt_a), "b": float(model.platt_b)},
        }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise ModelFormatError(f"missing field {path}.{key}")
    return obj[key]


def load_model(path: str | os.PathLike) -> QualityModel:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(
                f"unparseable model file at line {exc.lineno}, col {exc.colno}: {exc.msg}"
            ) from exc
    kind = _require(obj, "kind", "model")
    if kind not in ("logistic", "svm_rbf"):
        raise ModelFormatError(f"unknown model kind {kind!r}")
    mask = tuple(_require(obj, "feature_mask", "model"))
    active = tuple(_require(obj, "active_features", "model"))
    for name in (*mask, *active):
        if name not in FEATURE_NAMES:
            raise ModelFormatError(f"unknown feature {name!r} in model.feature_mask")
    scaler = _require(obj, "scaler", "model")
    model = QualityModel(
        kind=kind,
        feature_mask=mask,
        active_features=active,
        scaler_mean=np.asarray(_require(scaler, "mean", "model.scaler"), dtype=np.float64),
        scaler_std=np.asarray(_require(scaler, "std", "model.scaler"), dtype=np.float64),
        meta=obj.get("meta", {}),
    )
    if len(model.scaler_mean) != len(active) or len(model.scaler_std) != len(active):
        raise ModelFormatError("model.scaler: length does not match active_features")
    if kind == "logistic":
        section = _require(obj, "logistic", "model")
        model.weights = np.asarray(_require(section, "weights", "model.logistic"))
        model.bias = float(_require(section, "bias", "model.logistic"))
        if len(model.weights) != len(active):
            raise ModelFormatError("model.logistic.weights: wrong length")
    else:
        section = _require(obj, "svm", "model")
        model.gamma = float(_require(section, "gamma", "model.svm"))
        model.support_vectors = np.asarray(
            _require(section, "support_vectors", "model.svm"), dtype=np.float64
        ).reshape(-1, len(active))
        model.dual_coef = np.asarray(_require(section, "dual_coef", "model.svm"))
        model.svm_bias = float(_require(section, "bias", "model.svm"))
        platt = _require(section, "platt", "model.svm")
        model.platt_a = float(_require(platt, "a", "model.svm.platt"))
        model.platt_b = float(_require(platt, "b", "model.svm.platt"))
    return model
