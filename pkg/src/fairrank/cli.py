"""Command-line entry points mirroring the HTTP API.

stdout carries exactly one JSON document; all diagnostics go to stderr.
Exit codes: 0 success, 2 configuration/input error, 3 pipeline error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import audit as audit_mod
from .data import load_dataset, parse_schema_json, select_features
from .errors import ConfigError, FairrankError
from .jsonutil import canonical_json
from .session import SessionStore, resolve_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PIPELINE = 3

STATE_DIR_ENV = "FAIRSIGHT_STATE_DIR"


def _parse_rerank(text: str) -> dict:
    """Parse 'p=0.5,seed=1' into {"p": 0.5, "seed": 1}.

    p may be omitted; the engine then defaults it to the protected
    population share.
    """
    out: dict = {}
    for part in text.split(","):
        if "=" not in part:
            raise ConfigError(f"bad --rerank fragment {part!r}, expected key=value")
        key, value = part.split("=", 1)
        key = key.strip()
        if key == "p":
            out["p"] = float(value)
        elif key == "seed":
            out["seed"] = int(value)
        else:
            raise ConfigError(f"unknown --rerank key {key!r}")
    return out


def _comma_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", required=True, help="candidate CSV (RFC-4180, header row)")
    p.add_argument("--schema", required=True, help="JSON schema sidecar")
    p.add_argument("--features", help="comma list of features to use (default: all)")
    p.add_argument("--exclude", help="comma list of features to drop from the selection")


def _add_run_flags(p: argparse.ArgumentParser, k_required: bool) -> None:
    p.add_argument("--model", choices=["logistic", "acf"], default="logistic")
    p.add_argument("--k", type=int, required=k_required, help="top-k threshold")
    p.add_argument("--h", type=int, default=4, help="neighbor count (default 4)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lr", type=float, help="learning rate (default 0.1)")
    p.add_argument("--epochs", type=int, help="training epochs (default 2000)")
    p.add_argument("--l2", type=float, help="L2 penalty (default 1e-3)")
    p.add_argument("--rerank", help="post-process: p=<float>[,seed=<int>]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairrank",
        description="Rank candidates, measure and mitigate bias across the pipeline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one pipeline run, print its record")
    _add_data_flags(p_run)
    _add_run_flags(p_run, k_required=True)
    p_run.add_argument("--state-dir", help=f"session snapshot dir (env {STATE_DIR_ENV})")

    p_audit = sub.add_parser("audit", help="feature correlation table for a dataset")
    _add_data_flags(p_audit)

    p_pert = sub.add_parser("perturb", help="perturb one feature, retrain, report drops")
    _add_data_flags(p_pert)
    _add_run_flags(p_pert, k_required=True)
    p_pert.add_argument("--feature", required=True, help="feature to perturb")

    p_cmp = sub.add_parser("compare", help="comparison rows from a session state dir")
    p_cmp.add_argument("--state-dir", help=f"session snapshot dir (env {STATE_DIR_ENV})")
    p_cmp.add_argument("--ids", help="comma list of run ids (default: all)")

    p_serve = sub.add_parser("serve", help="start the JSON HTTP service")
    p_serve.add_argument("--state-dir", help=f"session snapshot dir (env {STATE_DIR_ENV})")
    p_serve.add_argument("--port", type=int, default=8714, help="0 picks a free port")
    p_serve.add_argument("--ui-dir", help="static UI assets (default: ./frontend/dist if present)")

    return parser


def _load_files(args) -> tuple[bytes, bytes]:
    data_path = Path(args.data)
    schema_path = Path(args.schema)
    if not data_path.is_file():
        raise ConfigError(f"no such file: {data_path}")
    if not schema_path.is_file():
        raise ConfigError(f"no such file: {schema_path}")
    return data_path.read_bytes(), schema_path.read_bytes()


def _selection(args, all_names: list[str]) -> list[str]:
    names = _comma_list(args.features) if args.features else list(all_names)
    if args.exclude:
        dropped = set(_comma_list(args.exclude))
        names = [n for n in names if n not in dropped]
    return names


def _state_dir(args) -> str | None:
    explicit = getattr(args, "state_dir", None)
    return explicit or os.environ.get(STATE_DIR_ENV) or None


def _run_config(args, dataset_id: str, features: list[str]) -> dict:
    cfg: dict = {
        "dataset_id": dataset_id,
        "features": features,
        "model_kind": args.model,
        "k": args.k,
        "h": args.h,
        "seed": args.seed,
    }
    if args.lr is not None:
        cfg["learning_rate"] = args.lr
    if args.epochs is not None:
        cfg["epochs"] = args.epochs
    if args.l2 is not None:
        cfg["l2_penalty"] = args.l2
    if args.rerank:
        cfg["rerank"] = _parse_rerank(args.rerank)
    return cfg


def cmd_run(args) -> int:
    csv_bytes, schema_bytes = _load_files(args)
    store = SessionStore(state_dir=_state_dir(args))
    dataset_id = store.add_dataset(csv_bytes, schema_bytes)
    dataset = store.dataset(dataset_id)
    features = _selection(args, dataset.feature_names)
    record = store.create_run(_run_config(args, dataset_id, features))
    print(store.run_json(record.run_id))
    return EXIT_OK


def cmd_audit(args) -> int:
    csv_bytes, schema_bytes = _load_files(args)
    schema, target, sensitive, protected = parse_schema_json(schema_bytes)
    dataset = load_dataset(csv_bytes, schema, target, sensitive, protected)
    names = [n for n in _selection(args, dataset.feature_names) if n != sensitive]
    rows = [
        {
            "name": name,
            "kind": dataset.schema_by_name[name].kind,
            "correlation": audit_mod.feature_correlation(name, dataset),
        }
        for name in names
    ]
    rows.sort(key=lambda r: -r["correlation"])
    print(canonical_json({
        "sensitive": sensitive,
        "protected": protected,
        "features": rows,
    }))
    return EXIT_OK


def cmd_perturb(args) -> int:
    csv_bytes, schema_bytes = _load_files(args)
    store = SessionStore()
    dataset_id = store.add_dataset(csv_bytes, schema_bytes)
    dataset = store.dataset(dataset_id)
    features = _selection(args, dataset.feature_names)
    cfg = resolve_config(_run_config(args, dataset_id, features), dataset, dataset_id)
    view = select_features(dataset, cfg.features)
    report = audit_mod.perturbation_report(
        view, args.feature, dataset.target, dataset.s_plus, dataset.s_minus,
        cfg.train_config(), cfg.k,
    )
    print(canonical_json({
        "feature": report["feature"],
        "gfdcg_drop": report["gfdcg_drop"],
        "utility_drop": report["utility_drop"],
        "baseline": report["baseline"],
        "perturbed": report["perturbed"],
        "ranking": report["perturbed_ranking"].order.tolist(),
    }))
    return EXIT_OK


def cmd_compare(args) -> int:
    state_dir = _state_dir(args)
    if not state_dir:
        raise ConfigError("compare requires --state-dir (or the env fallback)")
    store = SessionStore(state_dir=state_dir)
    if args.ids:
        ids = [int(part) for part in _comma_list(args.ids)]
    else:
        ids = store.run_ids()
    print(canonical_json(store.compare_runs(ids)))
    return EXIT_OK


def cmd_serve(args) -> int:
    import socket

    import uvicorn

    from .service import create_app

    ui_dir = args.ui_dir
    if ui_dir is None and Path("frontend/dist").is_dir():
        ui_dir = "frontend/dist"
    store = SessionStore(state_dir=_state_dir(args))
    app = create_app(store, static_dir=ui_dir)

    port = args.port
    if port == 0:
        probe = socket.socket()
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
        probe.close()
    print(canonical_json({"port": port, "url": f"http://127.0.0.1:{port}"}), flush=True)
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
    return EXIT_OK


_HANDLERS = {
    "run": cmd_run,
    "audit": cmd_audit,
    "perturb": cmd_perturb,
    "compare": cmd_compare,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except FairrankError as e:
        tag = f" [{e.phase}]" if e.phase else ""
        print(f"error: {e.error_code}{tag}: {e}", file=sys.stderr)
        return EXIT_PIPELINE


if __name__ == "__main__":
    raise SystemExit(main())
