"""Feature-level bias identification: correlation, outlier distortion, perturbation.

Three probes, one per pipeline phase:
- data: 1-D Wasserstein distance between a feature's per-group distributions
  (high distance = usable as a proxy for the sensitive attribute);
- model: Wasserstein distance between the feature distribution of high-
  distortion outliers and of the whole pool;
- outcome: retrain with one feature's values block-swapped and report how far
  the fairness/utility measures move.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import CATEGORICAL, CONTINUOUS, Dataset, FeatureView
from .errors import EmptyDistribution, IsSensitiveAttribute, KindMismatch, UnknownFeature
from . import model as model_mod
from .measures import gfdcg, utility_at_k
from .spaces import SpacePair


@dataclass(frozen=True)
class Distribution1D:
    """Either raw continuous samples or a categorical level-probability vector."""

    kind: str
    values: np.ndarray  # samples (continuous) or probabilities (categorical)

    def __post_init__(self):
        if self.kind not in (CONTINUOUS, CATEGORICAL):
            raise KindMismatch(f"unknown distribution kind {self.kind!r}")
        if len(self.values) == 0:
            raise EmptyDistribution("empty distribution")
        if self.kind == CATEGORICAL:
            total = float(np.sum(self.values))
            if not math.isclose(total, 1.0, rel_tol=0, abs_tol=1e-9):
                raise KindMismatch(f"level probabilities sum to {total}, expected 1")


def wasserstein_1d(p: Distribution1D, q: Distribution1D) -> float:
    """W1 between two 1-D distributions.

    Continuous: integral of |CDF_p - CDF_q| over the merged sample support
    (handles unequal sample sizes). Categorical: W1 under the discrete 0/1
    ground metric, which equals total variation, 0.5 * sum |p - q|.
    """
    if p.kind != q.kind:
        raise KindMismatch(f"cannot compare {p.kind} with {q.kind}")
    if p.kind == CATEGORICAL:
        if len(p.values) != len(q.values):
            raise KindMismatch("categorical distributions have different level counts")
        return 0.5 * float(np.abs(p.values - q.values).sum())
    a = np.sort(np.asarray(p.values, dtype=np.float64))
    b = np.sort(np.asarray(q.values, dtype=np.float64))
    support = np.concatenate([a, b])
    support.sort(kind="stable")
    # CDF of each sample set evaluated just after every support point
    cdf_a = np.searchsorted(a, support, side="right") / len(a)
    cdf_b = np.searchsorted(b, support, side="right") / len(b)
    widths = np.diff(support)
    return float(np.sum(np.abs(cdf_a - cdf_b)[:-1] * widths))


def feature_distribution(dataset: Dataset, name: str, ids: np.ndarray | None = None) -> Distribution1D:
    """Distribution of one feature over ``ids`` (default: everyone).

    Continuous samples are scaled to the feature's [0,1] range first so that
    scores are comparable across features.
    """
    schema = dataset.schema_by_name.get(name)
    if schema is None:
        raise UnknownFeature(f"unknown feature {name!r}")
    if ids is None:
        ids = np.arange(dataset.n, dtype=np.int64)
    else:
        ids = np.asarray(ids)
    if schema.kind == CONTINUOUS:
        return Distribution1D(kind=CONTINUOUS, values=dataset.scaled_column(name)[ids])
    codes = dataset.columns[name][ids]
    counts = np.bincount(codes, minlength=len(schema.categories)).astype(np.float64)
    return Distribution1D(kind=CATEGORICAL, values=counts / counts.sum())


def feature_correlation(name: str, dataset: Dataset) -> float:
    """W1 between the feature's protected and non-protected distributions."""
    if name == dataset.sensitive_attribute:
        raise IsSensitiveAttribute(f"{name!r} is the sensitive attribute")
    return wasserstein_1d(
        feature_distribution(dataset, name, dataset.s_plus),
        feature_distribution(dataset, name, dataset.s_minus),
    )


# -- outlier distortion (model phase) ----------------------------------------

def instance_distortions(pair: SpacePair) -> np.ndarray:
    """Per-instance mean distortion against all other instances."""
    n = pair.n
    return pair.distortion.sum(axis=1) / (n - 1)


def outliers(distortions: np.ndarray) -> np.ndarray:
    """Ids in the right 5% tail of the distortion distribution.

    Nearest-rank rule: the tail holds the n - ceil(0.95 n) largest values,
    never fewer than one; ids tied with the boundary value are all included.
    """
    d = np.asarray(distortions, dtype=np.float64)
    n = len(d)
    m = n - math.ceil(0.95 * n)
    if m < 1:
        m = 1
    boundary = np.sort(d)[n - m]
    ids = np.flatnonzero(d >= boundary)
    return ids.astype(np.int64)


def feature_distortion_score(name: str, outlier_ids: np.ndarray, dataset: Dataset) -> float:
    """W1 between the feature's outlier distribution and the whole pool's."""
    if len(outlier_ids) == 0:
        raise EmptyDistribution("no outliers given")
    return wasserstein_1d(
        feature_distribution(dataset, name, np.asarray(outlier_ids)),
        feature_distribution(dataset, name, None),
    )


# -- perturbation (outcome phase) ----------------------------------------------

def perturb_feature(view: FeatureView, q: str) -> FeatureView:
    """Swap the first ceil(n/2) values of column ``q`` with the remainder."""
    j = view.column_index(q)
    col = view.matrix[:, j]
    m = math.ceil(len(col) / 2)
    swapped = np.concatenate([col[m:], col[:m]])
    return view.with_column(q, swapped)


def _fit_and_rank(view: FeatureView, labels: np.ndarray, cfg: model_mod.TrainConfig,
                  s_plus: np.ndarray, s_minus: np.ndarray, k: int):
    design, encoding = model_mod.encode(view)
    baseline = None
    if cfg.model_kind == model_mod.ACF_LOGISTIC:
        design, baseline = model_mod.acf_transform(view, design, s_plus, s_minus)
    fitted = model_mod.train(design, labels, cfg, encoding=encoding, acf_baseline=baseline)
    return fitted, model_mod.rank(fitted, design, k=k)


def perturbation_report(view: FeatureView, q: str, labels: np.ndarray,
                        s_plus: np.ndarray, s_minus: np.ndarray,
                        cfg: model_mod.TrainConfig, k: int,
                        baseline: dict | None = None) -> dict:
    """Retrain with ``q`` perturbed; report signed measure drops.

    Training is deterministic, so the baseline recomputed here is identical
    to any run trained with the same config (callers holding one may pass it
    as ``baseline={"gfdcg": .., "utility": ..}``). Negative drops mean the
    perturbation improved the measure.
    """
    if baseline is None:
        _, base_ranking = _fit_and_rank(view, labels, cfg, s_plus, s_minus, k)
        baseline = {
            "gfdcg": gfdcg(base_ranking, k, labels, s_plus, s_minus),
            "utility": utility_at_k(base_ranking, k, labels),
        }

    _, pert_ranking = _fit_and_rank(perturb_feature(view, q), labels, cfg, s_plus, s_minus, k)
    pert_gfdcg = gfdcg(pert_ranking, k, labels, s_plus, s_minus)
    pert_utility = utility_at_k(pert_ranking, k, labels)

    return {
        "feature": q,
        "gfdcg_drop": baseline["gfdcg"] - pert_gfdcg,
        "utility_drop": baseline["utility"] - pert_utility,
        "perturbed_ranking": pert_ranking,
        "baseline": baseline,
        "perturbed": {"gfdcg": pert_gfdcg, "utility": pert_utility},
    }


# -- full audit over a run -------------------------------------------------------

def _outlier_histogram(dataset: Dataset, name: str, out_ids: np.ndarray) -> dict:
    """Binned feature distribution of the whole pool vs the outlier set."""
    schema = dataset.schema_by_name[name]
    if schema.kind == CONTINUOUS:
        lo, hi = dataset.feature_range(name)
        if hi == lo:
            hi = lo + 1.0
        edges = np.linspace(lo, hi, 11)
        col = dataset.columns[name]
        all_counts, _ = np.histogram(col, bins=edges)
        out_counts, _ = np.histogram(col[out_ids], bins=edges)
        return {
            "kind": CONTINUOUS,
            "bin_edges": [float(e) for e in edges],
            "all": all_counts.tolist(),
            "outliers": out_counts.tolist(),
        }
    codes = dataset.columns[name]
    n_levels = len(schema.categories)
    return {
        "kind": CATEGORICAL,
        "levels": list(schema.categories),
        "all": np.bincount(codes, minlength=n_levels).tolist(),
        "outliers": np.bincount(codes[out_ids], minlength=n_levels).tolist(),
    }


def build_audit_report(view: FeatureView, pair: SpacePair, labels: np.ndarray,
                       s_plus: np.ndarray, s_minus: np.ndarray,
                       cfg: model_mod.TrainConfig, k: int,
                       baseline: dict | None = None) -> dict:
    """Correlation, distortion and perturbation scores for every view feature."""
    dataset = view.dataset
    dist = instance_distortions(pair)
    out_ids = outliers(dist)
    non_out = np.setdiff1d(np.arange(view.n, dtype=np.int64), out_ids)
    if baseline is None:
        _, base_ranking = _fit_and_rank(view, labels, cfg, s_plus, s_minus, k)
        baseline = {
            "gfdcg": gfdcg(base_ranking, k, labels, s_plus, s_minus),
            "utility": utility_at_k(base_ranking, k, labels),
        }
    features = []
    for name in view.names:
        if name == dataset.sensitive_attribute:
            corr = None
        else:
            corr = feature_correlation(name, dataset)
        pert = perturbation_report(view, name, labels, s_plus, s_minus, cfg, k, baseline=baseline)
        features.append(
            {
                "name": name,
                "kind": dataset.schema_by_name[name].kind,
                "correlation": corr,
                "distortion_score": feature_distortion_score(name, out_ids, dataset),
                "histogram": _outlier_histogram(dataset, name, out_ids),
                "perturbation": {
                    "gfdcg_drop": pert["gfdcg_drop"],
                    "utility_drop": pert["utility_drop"],
                    "ranking": pert["perturbed_ranking"].order.tolist(),
                },
            }
        )
    return {
        "features": features,
        "outliers": out_ids.tolist(),
        "non_outliers": non_out.tolist(),
        "outliers_degenerate": len(out_ids) == view.n,
        "instance_distortions": [float(x) for x in dist],
    }
