"""Scoring models: deterministic logistic regression and its fair variant.

Training is full-batch gradient descent on L2-regularized log-loss with
zero-initialized weights and a fixed epoch count, so identical configs give
bit-identical weights. The fair variant (``acf_logistic``) residualizes every
encoded design column against group membership before training, removing the
additive effect of the sensitive attribute from each feature.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .data import CONTINUOUS, FeatureView
from .errors import (
    DimensionMismatch,
    NonFiniteLoss,
    SensitiveFeatureInView,
    SingleClassLabels,
)
from .measures import Ranking

LOGISTIC = "logistic"
ACF_LOGISTIC = "acf_logistic"


@dataclass(frozen=True)
class TrainConfig:
    model_kind: str = LOGISTIC
    learning_rate: float = 0.1
    epochs: int = 2000
    l2_penalty: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.model_kind not in (LOGISTIC, ACF_LOGISTIC):
            raise DimensionMismatch(f"unknown model kind {self.model_kind!r}")
        if self.learning_rate <= 0:
            raise DimensionMismatch("learning_rate must be > 0")
        if self.epochs < 1:
            raise DimensionMismatch("epochs must be >= 1")
        if self.l2_penalty < 0:
            raise DimensionMismatch("l2_penalty must be >= 0")


@dataclass(frozen=True)
class EncodedColumn:
    """Provenance of one design-matrix column."""

    feature: str
    kind: str
    level: str | None = None  # one-hot level for categorical columns


@dataclass(frozen=True)
class ScoringModel:
    weights: np.ndarray
    intercept: float
    kind: str
    encoding: tuple[EncodedColumn, ...]
    acf_baseline: np.ndarray | None = None  # 2 x d group means (S+, S-)
    loss_curve: tuple[float, ...] | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        enc = [
            {"feature": c.feature, "kind": c.kind, "level": c.level}
            for c in self.encoding
        ]
        return {
            "kind": self.kind,
            "weights": [float(w) for w in self.weights],
            "intercept": float(self.intercept),
            "encoding": enc,
            "acf_baseline": None
            if self.acf_baseline is None
            else [[float(v) for v in row] for row in self.acf_baseline],
        }


def encode(view: FeatureView) -> tuple[np.ndarray, tuple[EncodedColumn, ...]]:
    """Design matrix: continuous columns stay [0,1]-scaled, categorical become
    one-hot over all declared levels (no reference level dropped)."""
    cols: list[np.ndarray] = []
    enc: list[EncodedColumn] = []
    schema_by_name = view.dataset.schema_by_name
    for j, name in enumerate(view.names):
        if view.kinds[j] == CONTINUOUS:
            cols.append(view.matrix[:, j])
            enc.append(EncodedColumn(feature=name, kind=CONTINUOUS))
        else:
            codes = view.matrix[:, j].astype(np.int64)
            for code, level in enumerate(schema_by_name[name].categories):
                cols.append((codes == code).astype(np.float64))
                enc.append(EncodedColumn(feature=name, kind="categorical", level=level))
    design = np.column_stack(cols)
    return design, tuple(enc)


def acf_transform(
    view: FeatureView,
    design: np.ndarray,
    s_plus: np.ndarray,
    s_minus: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Residualize each design column against group membership.

    Every column is replaced by x - mean(x | row's group), which zeroes the
    per-group means and hence the point-biserial correlation between any
    column and the group indicator. Returns the residualized matrix and the
    2 x d matrix of group means (S+ row first) for reproducibility.
    """
    if view.sensitive_included:
        raise SensitiveFeatureInView(
            "the sensitive attribute must be excluded from the view before "
            "counterfactual residualization"
        )
    s_plus = np.asarray(s_plus)
    s_minus = np.asarray(s_minus)
    means = np.vstack([design[s_plus].mean(axis=0), design[s_minus].mean(axis=0)])
    out = design.copy()
    out[s_plus] -= means[0]
    out[s_minus] -= means[1]
    return out, means


def loss_and_gradient(
    weights: np.ndarray,
    intercept: float,
    design: np.ndarray,
    labels: np.ndarray,
    l2_penalty: float,
) -> tuple[float, np.ndarray, float]:
    """Mean log-loss + (l2/2)*||w||^2 (intercept unpenalized) and its gradient."""
    m = design.shape[0]
    y = np.asarray(labels, dtype=np.float64)
    with np.errstate(over="ignore"):  # overflow -> inf, caught by the trainer
        z = design @ weights + intercept
        # log(1 + e^z) - y*z, computed stably
        loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
        loss += 0.5 * l2_penalty * float(weights @ weights)
        p = expit(z)
        grad_w = design.T @ (p - y) / m + l2_penalty * weights
        grad_b = float(np.mean(p - y))
    return loss, grad_w, grad_b


def train(
    design: np.ndarray,
    labels: np.ndarray,
    cfg: TrainConfig,
    encoding: tuple[EncodedColumn, ...] = (),
    acf_baseline: np.ndarray | None = None,
    collect_loss: bool = False,
) -> ScoringModel:
    y = np.asarray(labels, dtype=np.float64)
    if len(np.unique(y)) < 2:
        raise SingleClassLabels("training labels contain a single class")
    if design.shape[0] != len(y):
        raise DimensionMismatch("design rows do not match label count")
    w = np.zeros(design.shape[1], dtype=np.float64)
    b = 0.0
    curve: list[float] = []
    for _ in range(cfg.epochs):
        loss, grad_w, grad_b = loss_and_gradient(w, b, design, y, cfg.l2_penalty)
        if not np.isfinite(loss):
            raise NonFiniteLoss(f"loss diverged (lr={cfg.learning_rate})")
        if collect_loss:
            curve.append(loss)
        w = w - cfg.learning_rate * grad_w
        b = b - cfg.learning_rate * grad_b
    if not np.all(np.isfinite(w)) or not np.isfinite(b):
        raise NonFiniteLoss("non-finite weights after training")
    if collect_loss:
        curve.append(loss_and_gradient(w, b, design, y, cfg.l2_penalty)[0])
    w.setflags(write=False)
    return ScoringModel(
        weights=w,
        intercept=b,
        kind=cfg.model_kind,
        encoding=encoding,
        acf_baseline=acf_baseline,
        loss_curve=tuple(curve) if collect_loss else None,
    )


def rank(model: ScoringModel, design: np.ndarray, k: int | None = None) -> Ranking:
    """Rank by descending sigmoid score; exact score ties go to the lower id."""
    if design.shape[1] != len(model.weights):
        raise DimensionMismatch(
            f"design has {design.shape[1]} columns, model expects {len(model.weights)}"
        )
    scores = expit(design @ model.weights + model.intercept)
    order = np.argsort(-scores, kind="stable").astype(np.int64)
    scores.setflags(write=False)
    n = len(order)
    return Ranking(order=order, scores=scores, k=n if k is None else k)
