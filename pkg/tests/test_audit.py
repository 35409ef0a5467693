import numpy as np
import pytest
from scipy.optimize import linprog

from fairrank.audit import (
    Distribution1D,
    feature_correlation,
    feature_distortion_score,
    instance_distortions,
    outliers,
    perturb_feature,
    perturbation_report,
    wasserstein_1d,
)
from fairrank.data import select_features
from fairrank.errors import IsSensitiveAttribute, KindMismatch
from fairrank.model import TrainConfig
from fairrank.spaces import DistanceMatrix, SpacePair

from conftest import toy_dataset


def cont(values):
    return Distribution1D(kind="continuous", values=np.asarray(values, dtype=float))


def catd(probs):
    return Distribution1D(kind="categorical", values=np.asarray(probs, dtype=float))


def lp_transport(a, b):
    """Brute-force optimal transport between two empirical samples."""
    m, n = len(a), len(b)
    cost = np.abs(np.subtract.outer(a, b)).reshape(-1)
    a_eq = np.zeros((m + n, m * n))
    for i in range(m):
        a_eq[i, i * n:(i + 1) * n] = 1.0
    for j in range(n):
        a_eq[m + j, j::n] = 1.0
    b_eq = np.concatenate([np.full(m, 1.0 / m), np.full(n, 1.0 / n)])
    res = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    assert res.success
    return res.fun


def pair_from_distortion(d):
    d = np.asarray(d, dtype=np.float64)
    z = np.zeros_like(d)
    return SpacePair(DistanceMatrix(z, True), DistanceMatrix(z, True), d)


# -- wasserstein ---------------------------------------------------------------

def test_wasserstein_identical_zero():
    assert wasserstein_1d(cont([0.1, 0.5, 0.9]), cont([0.1, 0.5, 0.9])) == 0.0


def test_wasserstein_point_masses():
    assert wasserstein_1d(cont([0.0]), cont([1.0])) == pytest.approx(1.0, abs=1e-12)


def test_wasserstein_matches_lp_oracle():
    rng = np.random.default_rng(19)
    for _ in range(10):
        a = rng.random(int(rng.integers(2, 30)))
        b = rng.random(int(rng.integers(2, 40)))
        assert wasserstein_1d(cont(a), cont(b)) == pytest.approx(
            lp_transport(a, b), abs=1e-9)


def test_wasserstein_unequal_sizes():
    # W1 between {0} and {0, 1}: move half the mass across distance 1
    assert wasserstein_1d(cont([0.0]), cont([0.0, 1.0])) == pytest.approx(0.5, abs=1e-12)


def test_wasserstein_categorical_is_total_variation():
    p, q = [0.7, 0.2, 0.1], [0.1, 0.3, 0.6]
    expect = 0.5 * sum(abs(x - y) for x, y in zip(p, q))
    assert wasserstein_1d(catd(p), catd(q)) == pytest.approx(expect, abs=1e-15)


def test_wasserstein_kind_mismatch():
    with pytest.raises(KindMismatch):
        wasserstein_1d(cont([0.5]), catd([1.0]))


def test_wasserstein_properties():
    rng = np.random.default_rng(25)
    for _ in range(20):
        p = rng.random(4); p /= p.sum()
        q = rng.random(4); q /= q.sum()
        r = rng.random(4); r /= r.sum()
        dpq = wasserstein_1d(catd(p), catd(q))
        assert dpq >= 0
        assert dpq == pytest.approx(wasserstein_1d(catd(q), catd(p)), abs=1e-15)
        # triangle inequality for total variation
        assert dpq <= wasserstein_1d(catd(p), catd(r)) + wasserstein_1d(catd(r), catd(q)) + 1e-12
    assert wasserstein_1d(catd([0.2, 0.8]), catd([0.2, 0.8])) == 0.0


# -- feature correlation -----------------------------------------------------------

def test_feature_correlation_identical_groups():
    ds = toy_dataset(cont={"x": [1.0, 1.0, 5.0, 5.0]},
                     cat={"grp": ["A", "B", "A", "B"]}, sensitive="grp")
    assert feature_correlation("x", ds) == 0.0


def test_feature_correlation_perfect_proxy():
    ds = toy_dataset(cat={"c": ["u", "u", "v", "v"], "grp": ["A", "A", "B", "B"]},
                     sensitive="grp", levels={"c": ("u", "v")})
    assert feature_correlation("c", ds) == 1.0


def test_feature_correlation_rejects_sensitive():
    ds = toy_dataset(cont={"x": [0.0, 1.0]})
    with pytest.raises(IsSensitiveAttribute):
        feature_correlation("grp", ds)


def test_demo_proxy_is_strongest(demo_dataset):
    names = [f for f in demo_dataset.feature_names if f != "sex"]
    scores = {f: feature_correlation(f, demo_dataset) for f in names}
    assert max(scores, key=scores.get) == "marital_status"
    assert scores["marital_status"] == 1.0


# -- instance distortions and outliers ------------------------------------------------

def test_instance_distortions_zero():
    assert np.all(instance_distortions(pair_from_distortion(np.zeros((5, 5)))) == 0.0)


def test_instance_distortions_hand_example():
    d = np.zeros((3, 3))
    d[0, 1] = d[1, 0] = 0.2
    d[0, 2] = d[2, 0] = 0.4
    got = instance_distortions(pair_from_distortion(d))
    assert got.tolist() == pytest.approx([0.3, 0.1, 0.2], abs=1e-15)


def test_instance_distortions_double_counting_identity():
    rng = np.random.default_rng(27)
    n = 12
    d = rng.random((n, n))
    d = (d + d.T) / 2
    np.fill_diagonal(d, 0.0)
    got = instance_distortions(pair_from_distortion(d))
    iu = np.triu_indices(n, 1)
    assert got.sum() * (n - 1) == pytest.approx(2 * d[iu].sum(), rel=1e-12)


def test_outliers_top5_of_100():
    rng = np.random.default_rng(35)
    d = rng.permutation(100).astype(float)
    ids = outliers(d)
    assert sorted(d[ids].tolist()) == [95.0, 96.0, 97.0, 98.0, 99.0]


def test_outliers_all_equal_degenerate():
    assert outliers(np.full(30, 0.4)).tolist() == list(range(30))


def test_outliers_minimum_one():
    d = np.arange(10).astype(float)
    assert outliers(d).tolist() == [9]


def test_outliers_ties_at_cutoff_included():
    d = np.array([0.0] * 95 + [1.0] * 5)
    d[90:95] = 1.0  # ten ids tie at the boundary value
    assert outliers(d).tolist() == list(range(90, 100))


def test_outliers_monotone():
    rng = np.random.default_rng(37)
    d = rng.random(40)
    base = set(outliers(d).tolist())
    j = int(np.argmin(d))
    d2 = d.copy()
    d2[j] = d.max() + 1.0
    assert j in set(outliers(d2).tolist())


# -- feature distortion score ----------------------------------------------------------

def test_distortion_score_random_outliers_near_zero(demo_dataset):
    # sampling-noise baseline for 13 uniform "outliers" out of 250, frozen
    # from the seeded harness: individual trials stay below 0.15, the mean
    # below 0.1 (the structured fixture below scores ~0.93)
    rng = np.random.default_rng(39)
    scores = []
    for _ in range(20):
        ids = rng.choice(demo_dataset.n, size=13, replace=False)
        scores.append(feature_distortion_score("age", ids, demo_dataset))
    assert max(scores) < 0.15
    assert np.mean(scores) < 0.1


def test_distortion_score_flags_level_shared_by_outliers():
    n = 40
    marker = ["rare" if i < 3 else "common" for i in range(n)]
    rng = np.random.default_rng(41)
    ds = toy_dataset(
        cont={"x": rng.normal(size=n).tolist()},
        cat={"m": marker, "grp": [("A", "B")[i % 2] for i in range(n)]},
        sensitive="grp", levels={"m": ("rare", "common")},
    )
    out_ids = np.array([0, 1, 2])  # exactly the carriers of the rare level
    marker_score = feature_distortion_score("m", out_ids, ds)
    x_score = feature_distortion_score("x", out_ids, ds)
    assert marker_score > x_score
    assert marker_score == pytest.approx(1.0 - 3 / 40, abs=1e-12)


# -- perturbation -------------------------------------------------------------------------

def pview(values, extra=None):
    cont_cols = {"x": values}
    if extra:
        cont_cols |= extra
    ds = toy_dataset(cont=cont_cols, labels=[i % 2 for i in range(len(values))])
    return ds, select_features(ds, [n for n in ds.feature_names if n != "grp"])


def test_perturb_even_swap():
    # column [1,2,3,4] (as stored in the view) becomes [3,4,1,2]
    _, view = pview([1.0, 2.0, 3.0, 4.0])
    j = view.column_index("x")
    col = view.matrix[:, j]
    got = perturb_feature(view, "x")
    assert got.matrix[:, j].tolist() == [col[2], col[3], col[0], col[1]]


def test_perturb_odd_swap():
    # first ceil(5/2)=3 values swap with the remaining 2: [1..5] -> [4,5,1,2,3]
    _, view = pview([1.0, 2.0, 3.0, 4.0, 5.0])
    j = view.column_index("x")
    col = view.matrix[:, j]
    got = perturb_feature(view, "x")
    assert got.matrix[:, j].tolist() == [col[3], col[4], col[0], col[1], col[2]]


def test_perturb_constant_column_unchanged():
    _, view = pview([7.0, 7.0, 7.0, 7.0])
    got = perturb_feature(view, "x")
    assert np.array_equal(got.matrix, view.matrix)


def test_perturb_double_is_identity_iff_even():
    _, view = pview([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    twice = perturb_feature(perturb_feature(view, "x"), "x")
    assert np.array_equal(twice.matrix, view.matrix)
    _, view_odd = pview([1.0, 2.0, 3.0, 4.0, 5.0])
    twice_odd = perturb_feature(perturb_feature(view_odd, "x"), "x")
    assert not np.array_equal(twice_odd.matrix, view_odd.matrix)


def test_perturbation_report_constant_feature_zero_drops():
    rng = np.random.default_rng(43)
    n = 16
    ds = toy_dataset(
        cont={"flat": [5.0] * n, "x": rng.normal(size=n).tolist()},
        labels=rng.integers(0, 2, n - 2).tolist() + [0, 1],
    )
    view = select_features(ds, ["flat", "x"])
    cfg = TrainConfig(epochs=100)
    report = perturbation_report(view, "flat", ds.target, ds.s_plus, ds.s_minus, cfg, 5)
    assert report["gfdcg_drop"] == 0.0
    assert report["utility_drop"] == 0.0
    assert report["perturbed"] == report["baseline"]


def test_perturbation_report_predictive_feature_drops_utility():
    # single feature that perfectly predicts the label; values in random row
    # order so the block swap actually decouples feature from label
    rng = np.random.default_rng(49)
    x = rng.normal(size=20)
    labels = (x > 0).astype(int)
    ds = toy_dataset(cont={"x": x.tolist()}, labels=labels.tolist())
    view = select_features(ds, ["x"])
    cfg = TrainConfig(learning_rate=0.5, epochs=400)
    report = perturbation_report(view, "x", ds.target, ds.s_plus, ds.s_minus, cfg, 6)
    assert report["baseline"]["utility"] == 1.0
    assert report["utility_drop"] >= 0.0


def test_perturbation_report_accepts_precomputed_baseline():
    rng = np.random.default_rng(47)
    n = 12
    ds = toy_dataset(cont={"x": rng.normal(size=n).tolist(),
                           "z": rng.normal(size=n).tolist()},
                     labels=rng.integers(0, 2, n - 2).tolist() + [0, 1])
    view = select_features(ds, ["x", "z"])
    cfg = TrainConfig(epochs=60)
    auto = perturbation_report(view, "x", ds.target, ds.s_plus, ds.s_minus, cfg, 4)
    given = perturbation_report(view, "x", ds.target, ds.s_plus, ds.s_minus, cfg, 4,
                                baseline=auto["baseline"])
    assert given["gfdcg_drop"] == auto["gfdcg_drop"]
    assert given["utility_drop"] == auto["utility_drop"]
