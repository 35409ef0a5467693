"""Fair-ranking decision engine.

Rank candidates with a trained scoring model, quantify bias in the data /
mapping / outcome phases, locate feature-level sources of bias, and mitigate
via feature exclusion, counterfactually-fair training, or randomized
re-ranking. Exposed as a library, a CLI (``fairrank``), a JSON HTTP service,
and a companion web UI.
"""

from .data import (
    Dataset,
    FeatureSchema,
    FeatureView,
    load_dataset,
    parse_schema_json,
    partition_groups,
    select_features,
)
from .measures import (
    MeasureReport,
    Ranking,
    build_measure_report,
    gfdcg,
    group_separation,
    group_skew,
    precision_at_k,
    rnn,
    rnn_gain,
    rnn_group,
    rnn_mean,
    statistical_parity,
    utility_at_k,
    within_ranking_curves,
)
from .model import TrainConfig, ScoringModel, acf_transform, encode, rank, train
from .rerank import RerankConfig, SplitMix64, fair_rerank
from .session import RunConfig, RunRecord, SessionStore
from .spaces import (
    DistanceMatrix,
    Embedding2D,
    SpacePair,
    build_space_pair,
    embed_2d,
    gower_distance,
    nearest_neighbors,
)

__version__ = "0.1.0"

__all__ = [
    "Dataset", "FeatureSchema", "FeatureView", "load_dataset",
    "parse_schema_json", "partition_groups", "select_features",
    "MeasureReport", "Ranking", "build_measure_report", "gfdcg",
    "group_separation", "group_skew", "precision_at_k", "rnn", "rnn_gain",
    "rnn_group", "rnn_mean", "statistical_parity", "utility_at_k",
    "within_ranking_curves",
    "TrainConfig", "ScoringModel", "acf_transform", "encode", "rank", "train",
    "RerankConfig", "SplitMix64", "fair_rerank",
    "RunConfig", "RunRecord", "SessionStore",
    "DistanceMatrix", "Embedding2D", "SpacePair", "build_space_pair",
    "embed_2d", "gower_distance", "nearest_neighbors",
    "__version__",
]
