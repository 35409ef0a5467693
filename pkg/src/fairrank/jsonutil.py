"""Canonical JSON serialization.

All engine outputs (CLI stdout, HTTP bodies, session snapshots) go through
``canonical_json`` so that identical payloads serialize to identical bytes:
insertion-ordered keys, no whitespace variation, and floats rendered at 12
significant digits. Non-finite floats are rendered as ``null``; callers that
need to distinguish them carry an explicit flag field.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np


def fmt_float(x: float) -> str:
    """Render a finite float at 12 significant digits (shortest form)."""
    if x == 0.0:
        return "0"
    s = format(x, ".12g")
    # ".12g" can emit forms like "1e+06"; JSON accepts them as-is.
    return s


def _serialize(obj: Any, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        out.append(fmt_float(x) if math.isfinite(x) else "null")
    elif isinstance(obj, str):
        import json as _json

        out.append(_json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        out.append("[")
        for i, item in enumerate(seq):
            if i:
                out.append(",")
            _serialize(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            if not isinstance(k, str):
                raise TypeError(f"non-string dict key: {k!r}")
            _serialize(k, out)
            out.append(":")
            _serialize(v, out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj: Any) -> str:
    """Serialize ``obj`` to a canonical JSON string (deterministic bytes)."""
    out: list[str] = []
    _serialize(obj, out)
    return "".join(out)
