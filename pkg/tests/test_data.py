import numpy as np
import pytest

from fairrank.data import (
    FeatureSchema,
    load_dataset,
    parse_schema_json,
    partition_groups,
    select_features,
)
from fairrank.errors import (
    EmptyGroup,
    EmptySelection,
    MissingColumn,
    MultiLevelSensitive,
    RaggedRow,
    SchemaError,
    UnexpectedColumn,
    UnknownCategoryLevel,
    UnknownFeature,
    UnparseableCell,
)

from conftest import toy_dataset

SCHEMA2 = (
    FeatureSchema("x", "continuous"),
    FeatureSchema("sex", "categorical", categories=("M", "F")),
)


def csv_bytes(rows, header="x,sex,y"):
    return ("\r\n".join([header] + rows) + "\r\n").encode()


def test_load_demo_dataset_partition(demo_dataset):
    assert demo_dataset.n == 250
    s_plus, s_minus = partition_groups(demo_dataset)
    assert len(s_plus) == 125 and len(s_minus) == 125


def test_unparseable_continuous_cell():
    with pytest.raises(UnparseableCell):
        load_dataset(csv_bytes(["abc,M,0", "2.0,F,1"]), SCHEMA2, "y", "sex", "F")


def test_protected_value_absent_is_empty_group():
    with pytest.raises(EmptyGroup):
        load_dataset(csv_bytes(["1.0,M,0", "2.0,M,1"]), SCHEMA2, "y", "sex", "F")


def test_all_rows_protected_is_empty_group():
    with pytest.raises(EmptyGroup):
        load_dataset(csv_bytes(["1.0,F,0", "2.0,F,1"]), SCHEMA2, "y", "sex", "F")


def test_partition_simple():
    ds = load_dataset(
        csv_bytes(["1,F,0", "2,M,1", "3,F,0", "4,M,1"]), SCHEMA2, "y", "sex", "F"
    )
    s_plus, s_minus = partition_groups(ds)
    assert s_plus.tolist() == [0, 2]
    assert s_minus.tolist() == [1, 3]


def test_partition_bijection_property():
    rng = np.random.default_rng(3)
    for _ in range(10):
        n = int(rng.integers(4, 40)) * 2
        rows = [f"{rng.normal():.4f},{'F' if rng.random() < 0.5 else 'M'},{i % 2}"
                for i in range(n - 2)]
        rows += [f"0,F,0", f"0,M,1"]  # both groups guaranteed
        ds = load_dataset(csv_bytes(rows), SCHEMA2, "y", "sex", "F")
        s_plus, s_minus = partition_groups(ds)
        merged = sorted(s_plus.tolist() + s_minus.tolist())
        assert merged == list(range(ds.n))


def test_unknown_level_rejected():
    with pytest.raises(UnknownCategoryLevel):
        load_dataset(csv_bytes(["1.0,X,0", "2.0,F,1"]), SCHEMA2, "y", "sex", "F")


def test_bad_target_rejected():
    with pytest.raises(UnparseableCell):
        load_dataset(csv_bytes(["1.0,M,2", "2.0,F,1"]), SCHEMA2, "y", "sex", "F")


def test_missing_column():
    with pytest.raises(MissingColumn):
        load_dataset(csv_bytes(["1.0,0"], header="x,y"), SCHEMA2, "y", "sex", "F")


def test_unexpected_column():
    with pytest.raises(UnexpectedColumn):
        load_dataset(
            csv_bytes(["1.0,M,3,0"], header="x,sex,extra,y"), SCHEMA2, "y", "sex", "F"
        )


def test_ragged_row():
    with pytest.raises(RaggedRow):
        load_dataset(csv_bytes(["1.0,M,0", "2.0,F"]), SCHEMA2, "y", "sex", "F")


def test_multi_level_sensitive_rejected():
    schema = (
        FeatureSchema("x", "continuous"),
        FeatureSchema("sex", "categorical", categories=("M", "F", "X")),
    )
    with pytest.raises(MultiLevelSensitive):
        load_dataset(csv_bytes(["1.0,M,0", "2.0,F,1"]), schema, "y", "sex", "F")


def test_schema_invariants():
    with pytest.raises(SchemaError):
        FeatureSchema("x", "continuous", declared_range=(2.0, 1.0))
    with pytest.raises(SchemaError):
        FeatureSchema("c", "categorical", categories=())
    with pytest.raises(SchemaError):
        FeatureSchema("c", "weird")


def test_select_features_flags_sensitive(demo_dataset):
    names = [f for f in demo_dataset.feature_names if f != "sex"]
    view = select_features(demo_dataset, names)
    assert not view.sensitive_included
    full = select_features(demo_dataset, demo_dataset.feature_names)
    assert full.sensitive_included


def test_select_features_errors(demo_dataset):
    with pytest.raises(UnknownFeature):
        select_features(demo_dataset, ["nonexistent"])
    with pytest.raises(EmptySelection):
        select_features(demo_dataset, [])


def test_select_features_pure(demo_dataset):
    a = select_features(demo_dataset, ["age", "savings"])
    b = select_features(demo_dataset, ["age", "savings"])
    assert a.names == b.names
    assert np.array_equal(a.matrix, b.matrix)
    assert np.array_equal(a.gower_matrix(), b.gower_matrix())


def test_zero_range_feature_scales_to_zero():
    ds = toy_dataset(cont={"flat": [5.0, 5.0, 5.0, 5.0], "x": [0, 1, 2, 3]})
    view = select_features(ds, ["flat", "x"])
    assert np.all(view.matrix[:, 0] == 0.0)
    # flat feature contributes 0 to every pairwise distance
    g = view.gower_matrix()
    only_x = select_features(ds, ["x"]).gower_matrix()
    assert np.allclose(g, only_x / 2)


def test_declared_range_overrides_observed():
    ds = toy_dataset(cont={"x": [2.0, 7.0]}, ranges={"x": (0.0, 10.0)})
    view = select_features(ds, ["x"])
    assert view.matrix[:, 0].tolist() == [0.2, 0.7]


def test_schema_json_roundtrip():
    blob = b"""
    {"features": [{"name": "x", "kind": "continuous", "range": [0, 10]},
                  {"name": "sex", "kind": "categorical", "categories": ["M", "F"]}],
     "target": "y", "sensitive": "sex", "protected": "F"}
    """
    schema, target, sensitive, protected = parse_schema_json(blob)
    assert schema == (
        FeatureSchema("x", "continuous", declared_range=(0, 10)),
        FeatureSchema("sex", "categorical", categories=("M", "F")),
    )
    assert (target, sensitive, protected) == ("y", "sex", "F")
