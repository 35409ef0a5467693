"""Seeded generator for a desk-scale credit-scoring demo dataset.

Produces a 250-row, 10-feature table in the style of classic credit-risk
data: balanced male/female groups, a marital-status column that perfectly
proxies the group, qualification signals (account status, savings,
employment) that carry a male shift and are attenuated for women, and
historically biased labels. Rankings trained naively on it favor the
non-protected group, which is what the mitigation walkthrough in the README
(and the scenario tests) then repair step by step.

Writes CSV + schema sidecar when run as a module:
    python3 -m fairrank.demo OUTDIR
"""

from __future__ import annotations

import io
import json
import sys
from pathlib import Path

import numpy as np

from .data import Dataset, FeatureSchema, load_dataset, schema_to_json_dict
from .jsonutil import canonical_json

DEFAULT_SEED = 20240815

SCHEMA = (
    FeatureSchema("sex", "categorical", categories=("male", "female")),
    FeatureSchema("marital_status", "categorical", categories=("single", "married", "divorced")),
    FeatureSchema("account_status", "categorical", categories=("none", "low", "medium", "high")),
    FeatureSchema("savings", "categorical", categories=("little", "moderate", "rich")),
    FeatureSchema("employment_years", "categorical", categories=("<1", "1-4", "4-7", ">7")),
    FeatureSchema("credit_amount", "continuous"),
    FeatureSchema("duration_months", "continuous"),
    FeatureSchema("age", "continuous"),
    FeatureSchema("housing", "categorical", categories=("rent", "own", "free")),
    FeatureSchema("job", "categorical", categories=("unskilled", "skilled", "management")),
)

TARGET = "creditworthy"
SENSITIVE = "sex"
PROTECTED = "female"

# baseline run in the walkthrough: nine features, "job" left out
BASELINE_FEATURES = tuple(f.name for f in SCHEMA if f.name != "job")


def _bin(latent: np.ndarray, thresholds: list[float], levels: tuple[str, ...]) -> list[str]:
    idx = np.searchsorted(np.asarray(thresholds), latent, side="right")
    return [levels[i] for i in idx]


def generate_credit_rows(n: int = 250, seed: int = DEFAULT_SEED) -> tuple[list[str], list[list[str]]]:
    """Header and string rows for the demo CSV."""
    if n % 2 != 0:
        raise ValueError("n must be even (balanced groups)")
    rng = np.random.default_rng(seed)
    male = np.zeros(n, dtype=bool)
    male[rng.permutation(n)[: n // 2]] = True
    quality = rng.normal(0.0, 1.0, n)

    sex = np.where(male, "male", "female")
    marital = np.where(
        male, "single", np.where(rng.random(n) < 0.7, "married", "divorced")
    )
    # women's recorded qualification signals say less about their actual
    # quality (attenuated loading), a classic measurement bias
    signal = quality * np.where(male, 1.0, 0.35)
    account = _bin(
        signal + 0.9 * male + rng.normal(0, 0.5, n),
        [-0.8, 0.2, 1.2],
        ("none", "low", "medium", "high"),
    )
    savings = _bin(
        0.8 * signal + 0.5 * male + rng.normal(0, 0.6, n),
        [-0.3, 0.9],
        ("little", "moderate", "rich"),
    )
    employment = _bin(
        0.7 * signal + 0.4 * male + rng.normal(0, 0.7, n),
        [-1.0, 0.0, 1.0],
        ("<1", "1-4", "4-7", ">7"),
    )
    housing = _bin(
        0.4 * quality + 0.25 * male + rng.normal(0, 0.8, n),
        [-0.4, 0.7],
        ("rent", "own", "free"),
    )
    job = _bin(
        0.5 * quality + 0.3 * male + rng.normal(0, 0.8, n),
        [-0.5, 0.8],
        ("unskilled", "skilled", "management"),
    )
    amount = np.clip(3200 - 1100 * quality + rng.normal(0, 700, n), 250, None)
    duration = np.clip(24 - 6 * quality + rng.normal(0, 5, n), 6, 60)
    age = np.clip(34 + 4 * male + 2.5 * quality + rng.normal(0, 7, n), 19, 75)

    logit = 1.7 * quality + 1.1 * male - 0.25
    label = (rng.random(n) < 1.0 / (1.0 + np.exp(-logit))).astype(int)

    header = [f.name for f in SCHEMA] + [TARGET]
    rows = []
    for i in range(n):
        rows.append([
            sex[i],
            marital[i],
            account[i],
            savings[i],
            employment[i],
            f"{amount[i]:.1f}",
            f"{duration[i]:.1f}",
            f"{age[i]:.1f}",
            housing[i],
            job[i],
            str(label[i]),
        ])
    return header, rows


def generate_credit_csv(n: int = 250, seed: int = DEFAULT_SEED) -> bytes:
    header, rows = generate_credit_rows(n, seed)
    buf = io.StringIO()
    buf.write(",".join(header) + "\r\n")
    for row in rows:
        buf.write(",".join(row) + "\r\n")
    return buf.getvalue().encode("utf-8")


def schema_json() -> str:
    return canonical_json(schema_to_json_dict(SCHEMA, TARGET, SENSITIVE, PROTECTED))


def load_demo_dataset(n: int = 250, seed: int = DEFAULT_SEED) -> Dataset:
    return load_dataset(generate_credit_csv(n, seed), SCHEMA, TARGET, SENSITIVE, PROTECTED)


def main(argv: list[str]) -> int:
    out = Path(argv[0]) if argv else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    (out / "credit.csv").write_bytes(generate_credit_csv())
    (out / "credit.schema.json").write_text(schema_json(), encoding="utf-8")
    print(json.dumps({"csv": str(out / "credit.csv"),
                      "schema": str(out / "credit.schema.json")}))
    return 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
