"""Fairness and utility measures across the data / mapping / outcome phases.

Data phase: group separation (symmetric Hausdorff distance between the two
groups' point sets under Gower distance).

Mapping phase: per-instance rank coherence with input-space neighbors
(``rnn``), its signed variant (``rnn_gain``), their global and per-group
means, and group skew (mean between-group pairwise distortion over mean
within-group pairwise distortion; > 1 signals structural bias).

Outcome phase: group-fairness DCG ratio with linear rank discount, top-k
statistical parity, linear nDCG utility, and precision at k.

Ratio measures use the conventions 0/0 -> 1.0 and x/0 -> +inf (serialized as
null plus an ``*_infinite`` flag).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .data import FeatureView
from .errors import EmptyGroup, NoPairs, SizeMismatch
from .spaces import SpacePair


@dataclass(frozen=True)
class Ranking:
    """A full ordering of candidate ids with scores and a top-k threshold.

    ``order[p]`` is the id at rank p+1; ``rank[i]`` is the 1-based rank of id
    i. Scores must be weakly decreasing along the order unless the ranking
    was produced by post-processing (``reranked=True``).
    """

    order: np.ndarray  # position -> id
    scores: np.ndarray  # id -> predicted qualification
    k: int
    reranked: bool = False
    rank: np.ndarray = field(init=False)  # id -> 1..n

    def __post_init__(self):
        order = np.asarray(self.order, dtype=np.int64)
        n = len(order)
        if sorted(order.tolist()) != list(range(n)):
            raise SizeMismatch("order is not a permutation of 0..n-1")
        if len(self.scores) != n:
            raise SizeMismatch("scores length does not match order")
        if not (1 <= self.k <= n):
            raise SizeMismatch(f"k={self.k} out of range 1..{n}")
        rank = np.empty(n, dtype=np.int64)
        rank[order] = np.arange(1, n + 1)
        rank.setflags(write=False)
        object.__setattr__(self, "rank", rank)
        if not self.reranked:
            along = np.asarray(self.scores, dtype=np.float64)[order]
            if np.any(np.diff(along) > 0):
                raise SizeMismatch("scores must be weakly decreasing along the order")

    @property
    def n(self) -> int:
        return len(self.order)

    def with_k(self, k: int) -> "Ranking":
        return Ranking(order=self.order, scores=self.scores, k=k, reranked=self.reranked)

    def topk_ids(self, k: int | None = None) -> np.ndarray:
        return self.order[: (self.k if k is None else k)]


# -- individual fairness (mapping phase) ------------------------------------

def rnn_from_ranks(r_i: float, neighbor_ranks: Sequence[float], n: int) -> float:
    """1 - mean(|r_i - r_j|) / n over the given neighbor ranks."""
    gaps = np.abs(np.asarray(neighbor_ranks, dtype=np.float64) - r_i)
    return 1.0 - gaps.mean() / n


def rnn_gain_from_ranks(r_i: float, neighbor_ranks: Sequence[float], n: int) -> float:
    """Signed variant: > 1 means ranked above neighbors (advantaged)."""
    diffs = r_i - np.asarray(neighbor_ranks, dtype=np.float64)
    return 1.0 - diffs.mean() / n


def rnn(i: int, ranking: Ranking, neighbors: Sequence[int]) -> float:
    return rnn_from_ranks(ranking.rank[i], ranking.rank[np.asarray(neighbors)], ranking.n)


def rnn_gain(i: int, ranking: Ranking, neighbors: Sequence[int]) -> float:
    return rnn_gain_from_ranks(ranking.rank[i], ranking.rank[np.asarray(neighbors)], ranking.n)


def rnn_all(ranking: Ranking, neighbor_ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized per-instance (rnn, rnn_gain) given an n x h neighbor matrix."""
    r = ranking.rank.astype(np.float64)
    nbr = r[neighbor_ids]  # n x h
    diffs = r[:, None] - nbr
    n = float(ranking.n)
    return 1.0 - np.abs(diffs).mean(axis=1) / n, 1.0 - diffs.mean(axis=1) / n


def rnn_mean(rnn_values: np.ndarray) -> float:
    return float(np.mean(rnn_values))


def rnn_group(rnn_values: np.ndarray, group: np.ndarray) -> float:
    if len(group) == 0:
        raise EmptyGroup("rnn_group over empty group")
    return float(np.mean(rnn_values[np.asarray(group)]))


# -- group fairness: data phase ----------------------------------------------

def hausdorff(distances: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between id sets ``a`` and ``b``."""
    if len(a) == 0 or len(b) == 0:
        raise EmptyGroup("hausdorff over empty group")
    block = distances[np.ix_(a, b)]
    h_ab = block.min(axis=1).max()
    h_ba = block.min(axis=0).max()
    return float(max(h_ab, h_ba))


def group_separation(view: FeatureView, s_plus: np.ndarray, s_minus: np.ndarray) -> float:
    """Hausdorff distance between the two groups under raw Gower distance."""
    return hausdorff(view.gower_matrix(), np.asarray(s_plus), np.asarray(s_minus))


# -- group fairness: mapping phase --------------------------------------------

def group_skew(pair: SpacePair, s_plus: np.ndarray, s_minus: np.ndarray) -> float:
    """Mean between-group distortion over mean within-group distortion.

    Means (not raw sums) keep 1.0 as the neutral point regardless of group
    sizes. Conventions: 0/0 -> 1.0, x/0 -> +inf.
    """
    n = pair.n
    is_plus = np.zeros(n, dtype=bool)
    is_plus[np.asarray(s_plus)] = True
    iu, ju = np.triu_indices(n, k=1)
    between = is_plus[iu] != is_plus[ju]
    n_between = int(between.sum())
    n_within = int((~between).sum())
    if n_between == 0 or n_within == 0:
        raise NoPairs(
            f"need at least one between- and one within-group pair "
            f"(between={n_between}, within={n_within})"
        )
    vals = pair.distortion[iu, ju]
    between_mean = float(vals[between].mean())
    within_mean = float(vals[~between].mean())
    if within_mean == 0.0:
        return 1.0 if between_mean == 0.0 else float("inf")
    return between_mean / within_mean


# -- outcome phase -------------------------------------------------------------

def linear_dcg(ranking: Ranking, k: int, labels: np.ndarray, members: np.ndarray) -> float:
    """Sum of y_i * (n - r_i) / n over ``members`` within the top-k prefix."""
    n = ranking.n
    topk = ranking.order[:k]
    mask = np.zeros(n, dtype=bool)
    mask[np.asarray(members)] = True
    sel = topk[mask[topk]]
    if len(sel) == 0:
        return 0.0
    y = np.asarray(labels, dtype=np.float64)[sel]
    r = ranking.rank[sel].astype(np.float64)
    return float(np.sum(y * (n - r) / n))


def _ratio(num: float, den: float) -> float:
    if den == 0.0:
        return 1.0 if num == 0.0 else float("inf")
    return num / den


def gfdcg(ranking: Ranking, k: int, labels: np.ndarray,
          s_plus: np.ndarray, s_minus: np.ndarray) -> float:
    """Protected-over-non-protected ratio of linear-discounted top-k DCG."""
    return _ratio(
        linear_dcg(ranking, k, labels, s_plus),
        linear_dcg(ranking, k, labels, s_minus),
    )


def statistical_parity(ranking: Ranking, k: int,
                       s_plus: np.ndarray, s_minus: np.ndarray) -> float:
    """Ratio of group selection rates within the top k (no rank discount)."""
    topk = set(ranking.order[:k].tolist())
    sel_plus = sum(1 for i in np.asarray(s_plus).tolist() if i in topk)
    sel_minus = sum(1 for i in np.asarray(s_minus).tolist() if i in topk)
    return _ratio(sel_plus / len(s_plus), sel_minus / len(s_minus))


def ideal_ranking(labels: np.ndarray) -> Ranking:
    """Positives before negatives; ascending id within each label class."""
    y = np.asarray(labels, dtype=np.int64)
    order = np.argsort(-y, kind="stable").astype(np.int64)
    scores = y.astype(np.float64)
    return Ranking(order=order, scores=scores, k=len(y))


def utility_at_k(ranking: Ranking, k: int, labels: np.ndarray) -> float:
    """Linear nDCG: achieved top-k DCG over the ideal ordering's. All-zero
    labels define utility as 1.0."""
    everyone = np.arange(ranking.n, dtype=np.int64)
    dcg = linear_dcg(ranking, k, labels, everyone)
    ideal = ideal_ranking(labels)
    idcg = linear_dcg(ideal, k, labels, everyone)
    if idcg == 0.0:
        return 1.0
    return dcg / idcg


def precision_at_k(ranking: Ranking, k: int, labels: np.ndarray) -> float:
    topk = ranking.order[:k]
    return float(np.asarray(labels)[topk].sum()) / k


def within_ranking_curves(ranking: Ranking, labels: np.ndarray,
                          s_plus: np.ndarray, s_minus: np.ndarray) -> dict:
    """Per-k arrays (k = 1..n) of gfdcg, precision and parity.

    Evaluates the scalar measures directly at every k, so curve values equal
    the scalar ops exactly.
    """
    n = ranking.n
    ks = list(range(1, n + 1))
    return {
        "k": ks,
        "gfdcg": [gfdcg(ranking, k, labels, s_plus, s_minus) for k in ks],
        "precision": [precision_at_k(ranking, k, labels) for k in ks],
        "parity": [statistical_parity(ranking, k, s_plus, s_minus) for k in ks],
    }


# -- report -------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureReport:
    """Every scalar measure for one run plus per-instance values and curves."""

    group_separation: float
    group_skew: float
    rnn_mean: float
    rnn_s_plus: float
    rnn_s_minus: float
    gfdcg: float
    parity: float
    utility: float
    precision: float
    curves: dict
    instance_rnn: np.ndarray
    instance_rnn_gain: np.ndarray

    def to_dict(self) -> dict:
        def flag(x: float) -> tuple[float | None, bool]:
            return (None, True) if np.isinf(x) else (x, False)

        skew, skew_inf = flag(self.group_skew)
        gf, gf_inf = flag(self.gfdcg)
        par, par_inf = flag(self.parity)
        return {
            "group_separation": self.group_separation,
            "group_skew": skew,
            "group_skew_infinite": skew_inf,
            "rnn_mean": self.rnn_mean,
            "rnn_s_plus": self.rnn_s_plus,
            "rnn_s_minus": self.rnn_s_minus,
            "gfdcg": gf,
            "gfdcg_infinite": gf_inf,
            "parity": par,
            "parity_infinite": par_inf,
            "utility": self.utility,
            "precision": self.precision,
            "curves": self.curves,
            "instances": [
                {
                    "id": i,
                    "rnn": float(self.instance_rnn[i]),
                    "rnn_gain": float(self.instance_rnn_gain[i]),
                    "gain_delta": float(self.instance_rnn_gain[i]) - 1.0,
                }
                for i in range(len(self.instance_rnn))
            ],
        }


def build_measure_report(view: FeatureView, pair: SpacePair, ranking: Ranking,
                         labels: np.ndarray, s_plus: np.ndarray, s_minus: np.ndarray,
                         neighbor_ids: np.ndarray) -> MeasureReport:
    """Assemble the full three-phase report for one run."""
    inst_rnn, inst_gain = rnn_all(ranking, neighbor_ids)
    k = ranking.k
    return MeasureReport(
        group_separation=group_separation(view, s_plus, s_minus),
        group_skew=group_skew(pair, s_plus, s_minus),
        rnn_mean=rnn_mean(inst_rnn),
        rnn_s_plus=rnn_group(inst_rnn, s_plus),
        rnn_s_minus=rnn_group(inst_rnn, s_minus),
        gfdcg=gfdcg(ranking, k, labels, s_plus, s_minus),
        parity=statistical_parity(ranking, k, s_plus, s_minus),
        utility=utility_at_k(ranking, k, labels),
        precision=precision_at_k(ranking, k, labels),
        curves=within_ranking_curves(ranking, labels, s_plus, s_minus),
        instance_rnn=inst_rnn,
        instance_rnn_gain=inst_gain,
    )
