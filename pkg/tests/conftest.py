import numpy as np
import pytest

from fairrank.data import CATEGORICAL, CONTINUOUS, Dataset, FeatureSchema
from fairrank.measures import Ranking


def toy_dataset(cont=None, cat=None, labels=None, sensitive="grp",
                protected="A", ranges=None, levels=None) -> Dataset:
    """Build a small in-memory dataset.

    ``cont`` maps feature name -> list of floats, ``cat`` maps feature name ->
    list of level strings. A two-level sensitive column is required; if the
    caller does not provide one, an alternating A/B "grp" column is added.
    """
    cont = dict(cont or {})
    cat = dict(cat or {})
    ranges = ranges or {}
    levels = levels or {}
    n = len(next(iter((cont | cat).values())))
    if sensitive not in cat and sensitive == "grp":
        cat["grp"] = ["A" if i % 2 == 0 else "B" for i in range(n)]
    features = []
    columns = {}
    for name, values in cont.items():
        features.append(FeatureSchema(name, CONTINUOUS, declared_range=ranges.get(name)))
        columns[name] = np.asarray(values, dtype=np.float64)
    for name, values in cat.items():
        lv = tuple(levels.get(name) or sorted(set(values)))
        features.append(FeatureSchema(name, CATEGORICAL, categories=lv))
        columns[name] = np.asarray([lv.index(v) for v in values], dtype=np.int64)
    if labels is None:
        labels = [i % 2 for i in range(n)]
    return Dataset(
        features=tuple(features),
        columns=columns,
        target=np.asarray(labels, dtype=np.int64),
        sensitive_attribute=sensitive,
        protected_value=protected,
    )


def ranking_from_order(order, k=None, scores=None) -> Ranking:
    order = np.asarray(order, dtype=np.int64)
    n = len(order)
    if scores is None:
        scores = np.empty(n, dtype=np.float64)
        scores[order] = np.linspace(1.0, 0.0, n)
    return Ranking(order=order, scores=np.asarray(scores, dtype=np.float64),
                   k=n if k is None else k)


@pytest.fixture(scope="session")
def demo_dataset():
    from fairrank.demo import load_demo_dataset

    return load_demo_dataset()


@pytest.fixture(scope="session")
def demo_files(tmp_path_factory):
    from fairrank.demo import generate_credit_csv, schema_json

    d = tmp_path_factory.mktemp("demo")
    csv_path = d / "credit.csv"
    schema_path = d / "credit.schema.json"
    csv_path.write_bytes(generate_credit_csv())
    schema_path.write_text(schema_json(), encoding="utf-8")
    return csv_path, schema_path
