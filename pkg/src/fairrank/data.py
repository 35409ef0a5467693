"""Dataset ingestion, feature schema, group partitioning and feature views.

Candidates live in a flat table of typed features (continuous or
categorical), a binary target label, and one categorical sensitive
attribute whose declared levels split the pool into a protected group
(``s_plus``) and its complement (``s_minus``). Rows must be complete; the
loader rejects anything it cannot parse rather than imputing.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
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

CONTINUOUS = "continuous"
CATEGORICAL = "categorical"


@dataclass(frozen=True)
class FeatureSchema:
    """Declared type of one feature column."""

    name: str
    kind: str  # "continuous" | "categorical"
    declared_range: tuple[float, float] | None = None
    categories: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in (CONTINUOUS, CATEGORICAL):
            raise SchemaError(f"feature {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == CONTINUOUS:
            if self.declared_range is not None:
                lo, hi = self.declared_range
                if not (lo < hi):
                    raise SchemaError(f"feature {self.name!r}: range must have min < max")
            if self.categories:
                raise SchemaError(f"feature {self.name!r}: continuous feature has categories")
        else:
            if len(self.categories) < 1:
                raise SchemaError(f"feature {self.name!r}: categorical needs >= 1 level")
            if len(set(self.categories)) != len(self.categories):
                raise SchemaError(f"feature {self.name!r}: duplicate category levels")
            if self.declared_range is not None:
                raise SchemaError(f"feature {self.name!r}: categorical feature has range")


@dataclass(frozen=True)
class Dataset:
    """Immutable candidate table with group partition precomputed.

    Continuous columns are stored as float arrays, categorical columns as
    integer codes into the schema's declared level list. ``s_plus`` holds the
    ids whose sensitive-attribute level equals ``protected_value``.
    """

    features: tuple[FeatureSchema, ...]
    columns: dict[str, np.ndarray]
    target: np.ndarray
    sensitive_attribute: str
    protected_value: str
    s_plus: np.ndarray = field(init=False)
    s_minus: np.ndarray = field(init=False)

    def __post_init__(self):
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise SchemaError("duplicate feature names")
        schema = self.schema_by_name.get(self.sensitive_attribute)
        if schema is None:
            raise UnknownFeature(f"sensitive attribute {self.sensitive_attribute!r} not in schema")
        if schema.kind != CATEGORICAL:
            raise SchemaError(f"sensitive attribute {self.sensitive_attribute!r} must be categorical")
        if len(schema.categories) != 2:
            raise MultiLevelSensitive(
                f"sensitive attribute {self.sensitive_attribute!r} has "
                f"{len(schema.categories)} levels; exactly 2 are supported"
            )
        if self.protected_value not in schema.categories:
            raise EmptyGroup(
                f"protected value {self.protected_value!r} is not a level of "
                f"{self.sensitive_attribute!r}"
            )
        codes = self.columns[self.sensitive_attribute]
        prot_code = schema.categories.index(self.protected_value)
        ids = np.arange(len(codes), dtype=np.int64)
        object.__setattr__(self, "s_plus", ids[codes == prot_code])
        object.__setattr__(self, "s_minus", ids[codes != prot_code])
        if len(self.s_plus) == 0 or len(self.s_minus) == 0:
            raise EmptyGroup(
                f"partition by {self.sensitive_attribute!r}={self.protected_value!r} "
                f"leaves an empty group (|S+|={len(self.s_plus)}, |S-|={len(self.s_minus)})"
            )

    @property
    def n(self) -> int:
        return len(self.target)

    @property
    def schema_by_name(self) -> dict[str, FeatureSchema]:
        return {f.name: f for f in self.features}

    @property
    def feature_names(self) -> list[str]:
        return [f.name for f in self.features]

    def feature_range(self, name: str) -> tuple[float, float]:
        """Scaling range of a continuous feature: declared if present, else observed."""
        schema = self.schema_by_name[name]
        if schema.kind != CONTINUOUS:
            raise SchemaError(f"{name!r} is not continuous")
        if schema.declared_range is not None:
            return schema.declared_range
        col = self.columns[name]
        return float(col.min()), float(col.max())

    def scaled_column(self, name: str) -> np.ndarray:
        """Continuous column min-max scaled to [0,1]; zero-range maps to 0."""
        lo, hi = self.feature_range(name)
        col = self.columns[name]
        if hi == lo:
            return np.zeros_like(col, dtype=np.float64)
        return (col.astype(np.float64) - lo) / (hi - lo)

    def raw_value(self, name: str, i: int):
        """Raw cell value: float for continuous, level string for categorical."""
        schema = self.schema_by_name[name]
        if schema.kind == CONTINUOUS:
            return float(self.columns[name][i])
        return schema.categories[int(self.columns[name][i])]

    def repartition(self, sensitive: str, protected_value: str) -> "Dataset":
        """Same table, different sensitive attribute / protected group."""
        if sensitive == self.sensitive_attribute and protected_value == self.protected_value:
            return self
        return Dataset(
            features=self.features,
            columns=self.columns,
            target=self.target,
            sensitive_attribute=sensitive,
            protected_value=protected_value,
        )


@dataclass(frozen=True)
class FeatureView:
    """A feature-subset projection of a dataset as a numeric matrix.

    Continuous columns are scaled to [0,1] (declared range if given, else the
    observed one); categorical columns keep their integer level codes. The
    pairwise Gower matrix is computed once on first use and cached.
    """

    dataset: Dataset
    names: tuple[str, ...]
    matrix: np.ndarray  # n x p, float64; read-only
    kinds: tuple[str, ...]
    sensitive_included: bool
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def p(self) -> int:
        return self.matrix.shape[1]

    def column_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownFeature(f"feature {name!r} not in view") from None

    def gower_matrix(self) -> np.ndarray:
        """Pairwise Gower distances over the selected features (cached)."""
        got = self._cache.get("gower")
        if got is None:
            got = _gower_matrix(self.matrix, self.kinds)
            got.setflags(write=False)
            self._cache["gower"] = got
        return got

    def with_column(self, name: str, values: np.ndarray) -> "FeatureView":
        """Copy of this view with one matrix column replaced (same scaling)."""
        j = self.column_index(name)
        m = self.matrix.copy()
        m[:, j] = values
        m.setflags(write=False)
        return FeatureView(
            dataset=self.dataset,
            names=self.names,
            matrix=m,
            kinds=self.kinds,
            sensitive_included=self.sensitive_included,
        )


def _gower_matrix(matrix: np.ndarray, kinds: Sequence[str]) -> np.ndarray:
    n, p = matrix.shape
    acc = np.zeros((n, n), dtype=np.float64)
    for j, kind in enumerate(kinds):
        col = matrix[:, j]
        if kind == CONTINUOUS:
            acc += np.abs(col[:, None] - col[None, :])
        else:
            acc += (col[:, None] != col[None, :]).astype(np.float64)
    acc /= p
    np.fill_diagonal(acc, 0.0)
    return acc


def select_features(dataset: Dataset, names: Iterable[str]) -> FeatureView:
    """Project the dataset onto ``names`` (order preserved, duplicates rejected)."""
    names = tuple(names)
    if not names:
        raise EmptySelection("feature selection is empty")
    if len(set(names)) != len(names):
        raise UnknownFeature(f"duplicate names in selection: {names}")
    schema_by_name = dataset.schema_by_name
    for name in names:
        if name not in schema_by_name:
            raise UnknownFeature(f"unknown feature {name!r}")
    cols = []
    kinds = []
    for name in names:
        schema = schema_by_name[name]
        kinds.append(schema.kind)
        if schema.kind == CONTINUOUS:
            cols.append(dataset.scaled_column(name))
        else:
            cols.append(dataset.columns[name].astype(np.float64))
    matrix = np.column_stack(cols)
    matrix.setflags(write=False)
    return FeatureView(
        dataset=dataset,
        names=names,
        matrix=matrix,
        kinds=tuple(kinds),
        sensitive_included=dataset.sensitive_attribute in names,
    )


def partition_groups(dataset: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Protected / non-protected id arrays (ascending)."""
    return dataset.s_plus, dataset.s_minus


def load_dataset(
    csv_source: bytes | io.IOBase,
    schema: Sequence[FeatureSchema],
    target_column: str,
    sensitive: str,
    protected_value: str,
) -> Dataset:
    """Parse an RFC-4180 UTF-8 CSV (header required) against a declared schema.

    The header must contain exactly the schema names plus the target column,
    in any order. Every cell must parse under its declared kind; rows with
    missing values are rejected.
    """
    if isinstance(csv_source, (bytes, bytearray)):
        text = bytes(csv_source).decode("utf-8")
    else:
        raw = csv_source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise MissingColumn("CSV is empty (no header row)") from None

    schema = tuple(schema)
    expected = {f.name for f in schema} | {target_column}
    seen = set(header)
    missing = expected - seen
    if missing:
        raise MissingColumn(f"missing columns: {sorted(missing)}")
    extra = seen - expected
    if extra:
        raise UnexpectedColumn(f"columns not in schema: {sorted(extra)}")
    if len(seen) != len(header):
        raise UnexpectedColumn("duplicate column names in header")
    col_idx = {name: header.index(name) for name in expected}

    by_name: dict[str, list] = {f.name: [] for f in schema}
    labels: list[int] = []
    schema_by_name = {f.name: f for f in schema}
    for row_no, row in enumerate(reader):
        if not row:
            continue  # trailing blank line
        if len(row) != len(header):
            raise RaggedRow(f"row {row_no} has {len(row)} cells, expected {len(header)}")
        cell = row[col_idx[target_column]].strip()
        if cell not in ("0", "1"):
            raise UnparseableCell(row_no, target_column, cell)
        labels.append(int(cell))
        for f in schema:
            cell = row[col_idx[f.name]].strip()
            if f.kind == CONTINUOUS:
                try:
                    by_name[f.name].append(float(cell))
                except ValueError:
                    raise UnparseableCell(row_no, f.name, cell) from None
            else:
                if cell not in f.categories:
                    raise UnknownCategoryLevel(
                        f"row {row_no}, column {f.name!r}: level {cell!r} not declared"
                    )
                by_name[f.name].append(f.categories.index(cell))

    if not labels:
        raise EmptyGroup("CSV has no data rows")

    columns: dict[str, np.ndarray] = {}
    for f in schema:
        dtype = np.float64 if f.kind == CONTINUOUS else np.int64
        arr = np.asarray(by_name[f.name], dtype=dtype)
        arr.setflags(write=False)
        columns[f.name] = arr
    target = np.asarray(labels, dtype=np.int64)
    target.setflags(write=False)

    return Dataset(
        features=schema,
        columns=columns,
        target=target,
        sensitive_attribute=sensitive,
        protected_value=protected_value,
    )


def parse_schema_json(blob: bytes | str) -> tuple[tuple[FeatureSchema, ...], str, str, str]:
    """Parse the JSON sidecar describing features, target, sensitive, protected.

    Shape: ``{"features": [{"name", "kind", "range"?, "categories"?}],
    "target": .., "sensitive": .., "protected": ..}``.
    """
    if isinstance(blob, (bytes, bytearray)):
        blob = bytes(blob).decode("utf-8")
    try:
        doc = json.loads(blob)
    except json.JSONDecodeError as e:
        raise SchemaError(f"schema sidecar is not valid JSON: {e}") from None
    try:
        feats = []
        for f in doc["features"]:
            rng = f.get("range")
            feats.append(
                FeatureSchema(
                    name=f["name"],
                    kind=f["kind"],
                    declared_range=tuple(rng) if rng is not None else None,
                    categories=tuple(f.get("categories") or ()),
                )
            )
        return tuple(feats), doc["target"], doc["sensitive"], doc["protected"]
    except KeyError as e:
        raise SchemaError(f"schema sidecar missing key: {e}") from None


def schema_to_json_dict(
    schema: Sequence[FeatureSchema], target: str, sensitive: str, protected: str
) -> dict:
    """Inverse of :func:`parse_schema_json` (used by the demo generator)."""
    feats = []
    for f in schema:
        entry: dict = {"name": f.name, "kind": f.kind}
        if f.declared_range is not None:
            entry["range"] = list(f.declared_range)
        if f.categories:
            entry["categories"] = list(f.categories)
        feats.append(entry)
    return {"features": feats, "target": target, "sensitive": sensitive, "protected": protected}
