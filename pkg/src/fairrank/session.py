"""Run lifecycle: pipeline orchestration, immutable run records, comparison.

A run executes feature selection -> (optional residualization) -> training ->
ranking -> (optional re-ranking) -> space pair -> measures -> feature audit ->
2-D embedding, then freezes everything into a RunRecord. Records are
append-only; their canonical JSON is cached at creation so re-reads are
byte-identical. The store is in-memory with optional snapshot-to-disk (one
JSON file per session).
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import audit as audit_mod
from . import model as model_mod
from .data import (
    CONTINUOUS,
    Dataset,
    FeatureSchema,
    load_dataset,
    parse_schema_json,
    select_features,
)
from .errors import (
    ConfigError,
    DatasetTooLarge,
    DistortionMatrixTooLarge,
    FairrankError,
    UnknownDataset,
    UnknownInstance,
    UnknownRun,
)
from .jsonutil import canonical_json
from .measures import build_measure_report, gfdcg, utility_at_k
from .rerank import RerankConfig, fair_rerank
from .spaces import DistanceMatrix, all_nearest_neighbors, build_space_pair, embed_2d

MAX_RUN_SIZE = 1000        # pipeline guard
MAX_SERVED_MATRIX = 500    # distortion matrix included in run JSON up to here


@dataclass(frozen=True)
class RunConfig:
    dataset_id: str
    features: tuple[str, ...]
    sensitive: str
    protected: str
    model_kind: str
    k: int
    h: int
    seed: int
    learning_rate: float
    epochs: int
    l2_penalty: float
    rerank: RerankConfig | None

    def to_dict(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "features": list(self.features),
            "sensitive": self.sensitive,
            "protected": self.protected,
            "model_kind": self.model_kind,
            "k": self.k,
            "h": self.h,
            "seed": self.seed,
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "l2_penalty": self.l2_penalty,
            "rerank": None if self.rerank is None else {"p": self.rerank.p, "seed": self.rerank.seed},
        }

    def train_config(self) -> model_mod.TrainConfig:
        return model_mod.TrainConfig(
            model_kind=self.model_kind,
            learning_rate=self.learning_rate,
            epochs=self.epochs,
            l2_penalty=self.l2_penalty,
            seed=self.seed,
        )


def resolve_config(raw: dict, dataset: Dataset, dataset_id: str) -> RunConfig:
    """Fill defaults and validate a raw config dict against the dataset."""
    known = {
        "dataset_id", "features", "sensitive", "protected", "model_kind",
        "k", "h", "seed", "learning_rate", "epochs", "l2_penalty", "rerank",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "k" not in raw:
        raise ConfigError("config requires 'k'")
    k = int(raw["k"])
    h = int(raw.get("h", 4))
    n = dataset.n
    if not (1 <= k <= n):
        raise ConfigError(f"k={k} out of range 1..{n}")
    if not (1 <= h <= n - 1):
        raise ConfigError(f"h={h} out of range 1..{n - 1}")
    model_kind = raw.get("model_kind", model_mod.LOGISTIC)
    if model_kind == "acf":  # CLI shorthand
        model_kind = model_mod.ACF_LOGISTIC
    if model_kind not in (model_mod.LOGISTIC, model_mod.ACF_LOGISTIC):
        raise ConfigError(f"unknown model_kind {model_kind!r}")
    rr = raw.get("rerank")
    rerank_cfg = None
    if rr is not None:
        # p defaults to the protected population share, which makes top-k
        # parity ~1 in expectation
        default_p = len(dataset.s_plus) / n
        rerank_cfg = RerankConfig(p=float(rr.get("p", default_p)), seed=int(rr.get("seed", 0)))
    features = tuple(raw.get("features") or dataset.feature_names)
    defaults = model_mod.TrainConfig()
    return RunConfig(
        dataset_id=dataset_id,
        features=features,
        sensitive=raw.get("sensitive", dataset.sensitive_attribute),
        protected=raw.get("protected", dataset.protected_value),
        model_kind=model_kind,
        k=k,
        h=h,
        seed=int(raw.get("seed", 0)),
        learning_rate=float(raw.get("learning_rate", defaults.learning_rate)),
        epochs=int(raw.get("epochs", defaults.epochs)),
        l2_penalty=float(raw.get("l2_penalty", defaults.l2_penalty)),
        rerank=rerank_cfg,
    )


@dataclass(frozen=True)
class RunRecord:
    run_id: int
    created_at: str
    config: RunConfig
    document: dict       # full serializable payload (includes run_id/created_at)
    view: object | None  # FeatureView kept for instance endpoints (not serialized)
    neighbor_ids: np.ndarray | None
    instance_rnn: np.ndarray | None
    instance_rnn_gain: np.ndarray | None


class _PhaseTag:
    """Context manager that stamps engine errors with a pipeline phase."""

    def __init__(self, phase: str):
        self.phase = phase

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if isinstance(exc, FairrankError) and exc.phase is None:
            exc.phase = self.phase
        return False


def execute_run(dataset: Dataset, cfg: RunConfig, run_id: int, created_at: str) -> RunRecord:
    """Run the full pipeline and freeze the result."""
    with _PhaseTag("data"):
        if dataset.n > MAX_RUN_SIZE:
            raise DatasetTooLarge(f"n={dataset.n} exceeds the {MAX_RUN_SIZE}-row limit")
        working = dataset.repartition(cfg.sensitive, cfg.protected)
        view = select_features(working, cfg.features)
        s_plus, s_minus = working.s_plus, working.s_minus
        labels = working.target

    with _PhaseTag("model"):
        train_cfg = cfg.train_config()
        design, encoding = model_mod.encode(view)
        acf_baseline = None
        if cfg.model_kind == model_mod.ACF_LOGISTIC:
            design, acf_baseline = model_mod.acf_transform(view, design, s_plus, s_minus)
        fitted = model_mod.train(design, labels, train_cfg,
                                 encoding=encoding, acf_baseline=acf_baseline)
        ranking = model_mod.rank(fitted, design, k=cfg.k)

    with _PhaseTag("outcome"):
        model_measures = {
            "gfdcg": gfdcg(ranking, cfg.k, labels, s_plus, s_minus),
            "utility": utility_at_k(ranking, cfg.k, labels),
        }
        if cfg.rerank is not None:
            ranking = fair_rerank(ranking, s_plus, s_minus, cfg.rerank)
        pair = build_space_pair(view, ranking)
        neighbor_ids = all_nearest_neighbors(view, cfg.h)
        report = build_measure_report(view, pair, ranking, labels, s_plus, s_minus, neighbor_ids)
        # the audit perturbs and retrains the model, so its baseline is the
        # pre-rerank model measures
        audit = audit_mod.build_audit_report(view, pair, labels, s_plus, s_minus,
                                             train_cfg, cfg.k, baseline=model_measures)
        embedding = embed_2d(DistanceMatrix(view.gower_matrix(), normalized=False))

    n = view.n
    is_plus = np.zeros(n, dtype=bool)
    is_plus[s_plus] = True
    document = {
        "run_id": run_id,
        "created_at": created_at,
        "config": cfg.to_dict(),
        "n": n,
        "ranking": {
            "k": ranking.k,
            "reranked": ranking.reranked,
            "order": ranking.order.tolist(),
            "rank": ranking.rank.tolist(),
            "scores": [float(s) for s in ranking.scores],
            "protected": [bool(b) for b in is_plus],
            "labels": [int(y) for y in labels],
        },
        "groups": {"s_plus": s_plus.tolist(), "s_minus": s_minus.tolist()},
        "measures": report.to_dict(),
        "audit": audit,
        "model": fitted.to_dict(),
        "embedding": [[float(x), float(y)] for x, y in embedding.coords],
        "neighbors": neighbor_ids.tolist(),
        "distortion": None if n > MAX_SERVED_MATRIX
        else [float(v) for v in pair.distortion.reshape(-1)],
    }
    return RunRecord(
        run_id=run_id,
        created_at=created_at,
        config=cfg,
        document=document,
        view=view,
        neighbor_ids=neighbor_ids,
        instance_rnn=report.instance_rnn,
        instance_rnn_gain=report.instance_rnn_gain,
    )


def run_payload(document: dict) -> dict:
    """Record content without run_id / created_at (the determinism surface)."""
    return {k: v for k, v in document.items() if k not in ("run_id", "created_at")}


def _dataset_fingerprint(csv_bytes: bytes, schema_doc: dict) -> str:
    digest = hashlib.sha256()
    digest.update(csv_bytes)
    digest.update(canonical_json(schema_doc).encode("utf-8"))
    return digest.hexdigest()[:12]


class SessionStore:
    """Datasets and append-only run records for one session.

    Run creation is serialized per dataset; reads never block. Snapshots
    persist run documents (not raw datasets), so a store restored from disk
    can list and compare runs but instance endpoints need the dataset
    re-registered.
    """

    def __init__(self, state_dir: str | Path | None = None):
        self._datasets: dict[str, Dataset] = {}
        self._schema_docs: dict[str, dict] = {}
        self._runs: dict[int, RunRecord] = {}
        self._run_json: dict[int, str] = {}
        self._next_run_id = 1
        self._id_lock = threading.Lock()
        self._dataset_locks: dict[str, threading.Lock] = {}
        self.state_dir = Path(state_dir) if state_dir else None
        if self.state_dir:
            self._load_snapshot()

    # -- datasets ---------------------------------------------------------

    def add_dataset(self, csv_bytes: bytes, schema_blob: bytes | str) -> str:
        schema, target, sensitive, protected = parse_schema_json(schema_blob)
        schema_doc = json.loads(schema_blob if isinstance(schema_blob, str)
                                else schema_blob.decode("utf-8"))
        dataset = load_dataset(csv_bytes, schema, target, sensitive, protected)
        dataset_id = _dataset_fingerprint(csv_bytes, schema_doc)
        with self._id_lock:
            self._datasets[dataset_id] = dataset
            self._schema_docs[dataset_id] = schema_doc
            self._dataset_locks.setdefault(dataset_id, threading.Lock())
        return dataset_id

    def dataset(self, dataset_id: str) -> Dataset:
        try:
            return self._datasets[dataset_id]
        except KeyError:
            raise UnknownDataset(f"unknown dataset {dataset_id!r}") from None

    def dataset_ids(self) -> list[str]:
        return sorted(self._datasets)

    def dataset_features(self, dataset_id: str, sensitive: str | None = None,
                         protected: str | None = None) -> dict:
        """Per-feature schema, per-group histograms and correlation scores."""
        dataset = self.dataset(dataset_id)
        if sensitive or protected:
            dataset = dataset.repartition(sensitive or dataset.sensitive_attribute,
                                          protected or dataset.protected_value)
        features = []
        for f in dataset.features:
            histogram = _group_histogram(dataset, f)
            if f.name == dataset.sensitive_attribute:
                corr = None
            else:
                corr = audit_mod.feature_correlation(f.name, dataset)
            entry = {
                "name": f.name,
                "kind": f.kind,
                "is_sensitive": f.name == dataset.sensitive_attribute,
                "correlation": corr,
                "histogram": histogram,
            }
            if f.kind == CONTINUOUS:
                entry["range"] = list(dataset.feature_range(f.name))
            else:
                entry["categories"] = list(f.categories)
            features.append(entry)
        return {
            "dataset_id": dataset_id,
            "n": dataset.n,
            "target_positive_rate": float(np.mean(dataset.target)),
            "sensitive": dataset.sensitive_attribute,
            "protected": dataset.protected_value,
            "s_plus_size": int(len(dataset.s_plus)),
            "s_minus_size": int(len(dataset.s_minus)),
            "features": features,
        }

    # -- runs ---------------------------------------------------------------

    def create_run(self, raw_config: dict) -> RunRecord:
        dataset_id = raw_config.get("dataset_id")
        if dataset_id is None:
            err = ConfigError("config requires 'dataset_id'")
            err.phase = "data"
            raise err
        with _PhaseTag("data"):
            dataset = self.dataset(dataset_id)
            cfg = resolve_config(raw_config, dataset, dataset_id)
        lock = self._dataset_locks.setdefault(dataset_id, threading.Lock())
        with lock:
            with self._id_lock:
                run_id = self._next_run_id
                self._next_run_id += 1
            created_at = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
            record = execute_run(dataset, cfg, run_id, created_at)
            # json before record: readers resolve through _runs, so a
            # published run always has its canonical bytes ready
            self._run_json[run_id] = canonical_json(record.document)
            self._runs[run_id] = record
            if self.state_dir:
                self._save_snapshot()
        return record

    def run(self, run_id: int) -> RunRecord:
        try:
            return self._runs[run_id]
        except KeyError:
            raise UnknownRun(f"unknown run {run_id}") from None

    def run_json(self, run_id: int) -> str:
        self.run(run_id)
        return self._run_json[run_id]

    def run_ids(self) -> list[int]:
        return sorted(self._runs)

    def summaries(self) -> list[dict]:
        return [self._summary_row(self._runs[i]) for i in self.run_ids()]

    @staticmethod
    def _summary_row(record: RunRecord) -> dict:
        doc = record.document
        m = doc["measures"]
        return {
            "run_id": doc["run_id"],
            "created_at": doc["created_at"],
            "config": doc["config"],
            "n": doc["n"],
            "parity": m["parity"],
            "rnn_mean": m["rnn_mean"],
            "utility": m["utility"],
            "ideal_parity": 1.0,
            "ideal_rnn_mean": 1.0,
            "ideal_utility": 1.0,
        }

    def compare_runs(self, run_ids: list[int]) -> list[dict]:
        """Gauge rows (parity / rnn_mean / utility vs their ideals), by run_id."""
        if not run_ids:
            raise UnknownRun("no run ids given")
        rows = [self._summary_row(self.run(i)) for i in sorted(set(run_ids))]
        return rows

    def instance_detail(self, run_id: int, i: int) -> dict:
        record = self.run(run_id)
        doc = record.document
        n = doc["n"]
        if not (0 <= i < n):
            raise UnknownInstance(f"instance {i} out of range 0..{n - 1}")
        if record.view is None:
            raise UnknownDataset(
                "run was restored from a snapshot; re-register its dataset to "
                "inspect instances"
            )
        view = record.view
        dataset = view.dataset
        neighbors = [int(x) for x in record.neighbor_ids[i]]
        s_plus = doc["groups"]["s_plus"]
        s_minus = doc["groups"]["s_minus"]
        features = []
        for name in view.names:
            schema = dataset.schema_by_name[name]
            if schema.kind == CONTINUOUS:
                col = dataset.columns[name]
                features.append({
                    "name": name,
                    "kind": schema.kind,
                    "own": float(col[i]),
                    "neighbors_mean": float(np.mean(col[neighbors])),
                    "group_means": {
                        "s_plus": float(np.mean(col[s_plus])),
                        "s_minus": float(np.mean(col[s_minus])),
                    },
                })
            else:
                codes = dataset.columns[name]
                def freq(ids):
                    counts = np.bincount(codes[ids], minlength=len(schema.categories))
                    return {
                        level: float(c) / len(ids)
                        for level, c in zip(schema.categories, counts)
                    }
                features.append({
                    "name": name,
                    "kind": schema.kind,
                    "own": schema.categories[int(codes[i])],
                    "neighbors_freq": freq(neighbors),
                    "group_freq": {
                        "s_plus": freq(s_plus),
                        "s_minus": freq(s_minus),
                    },
                })
        rk = doc["ranking"]
        return {
            "id": i,
            "rnn": float(record.instance_rnn[i]),
            "rnn_gain": float(record.instance_rnn_gain[i]),
            "gain_delta": float(record.instance_rnn_gain[i]) - 1.0,
            "rank": rk["rank"][i],
            "score": rk["scores"][i],
            "protected": rk["protected"][i],
            "label": rk["labels"][i],
            "neighbors": neighbors,
            "features": features,
        }

    def curves(self, run_id: int) -> dict:
        return self.run(run_id).document["measures"]["curves"]

    def audit_report(self, run_id: int) -> dict:
        return self.run(run_id).document["audit"]

    def distortion_matrix(self, run_id: int) -> dict:
        doc = self.run(run_id).document
        if doc["distortion"] is None:
            raise DistortionMatrixTooLarge(
                f"distortion matrix is served only for n <= {MAX_SERVED_MATRIX}"
            )
        return {"n": doc["n"], "values": doc["distortion"]}

    # -- snapshots ------------------------------------------------------------

    def _snapshot_path(self) -> Path:
        return self.state_dir / "session.json"

    def _save_snapshot(self) -> None:
        self.state_dir.mkdir(parents=True, exist_ok=True)
        docs = [self._runs[i].document for i in self.run_ids()]
        payload = {"version": 1, "next_run_id": self._next_run_id, "runs": docs}
        tmp = self._snapshot_path().with_suffix(".tmp")
        tmp.write_text(canonical_json(payload), encoding="utf-8")
        tmp.replace(self._snapshot_path())

    def _load_snapshot(self) -> None:
        path = self._snapshot_path()
        if not path.exists():
            return
        payload = json.loads(path.read_text(encoding="utf-8"))
        self._next_run_id = payload["next_run_id"]
        for doc in payload["runs"]:
            rid = doc["run_id"]
            self._runs[rid] = RunRecord(
                run_id=rid,
                created_at=doc["created_at"],
                config=None,  # archived record; config lives in the document
                document=doc,
                view=None,
                neighbor_ids=np.asarray(doc["neighbors"], dtype=np.int64),
                instance_rnn=np.asarray(
                    [row["rnn"] for row in doc["measures"]["instances"]]),
                instance_rnn_gain=np.asarray(
                    [row["rnn_gain"] for row in doc["measures"]["instances"]]),
            )
            self._run_json[rid] = canonical_json(doc)


def _group_histogram(dataset: Dataset, schema: FeatureSchema) -> dict:
    if schema.kind == CONTINUOUS:
        lo, hi = dataset.feature_range(schema.name)
        if hi == lo:
            hi = lo + 1.0
        edges = np.linspace(lo, hi, 11)
        col = dataset.columns[schema.name]
        plus, _ = np.histogram(col[dataset.s_plus], bins=edges)
        minus, _ = np.histogram(col[dataset.s_minus], bins=edges)
        return {
            "kind": CONTINUOUS,
            "bin_edges": [float(e) for e in edges],
            "s_plus": plus.tolist(),
            "s_minus": minus.tolist(),
        }
    codes = dataset.columns[schema.name]
    n_levels = len(schema.categories)
    plus = np.bincount(codes[dataset.s_plus], minlength=n_levels)
    minus = np.bincount(codes[dataset.s_minus], minlength=n_levels)
    return {
        "kind": "categorical",
        "levels": list(schema.categories),
        "s_plus": plus.tolist(),
        "s_minus": minus.tolist(),
    }
