"""Small shared helpers: deterministic formatting, JSON/CSV emission, worker pool."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, Sequence

ENV_SEED = "BEWIT_SEED"
ENV_WORKERS = "BEWIT_WORKERS"
ENV_EIG_TOL = "BEWIT_EIG_TOL"

DEFAULT_SEED = 20240824
DEFAULT_EIG_TOL = 1e-10


def fmt_float(v: float) -> str:
    """Render a float with 17 significant digits (exact integral values as n.0).

    Negative zero is normalized so that byte-level comparisons of reports are
    stable across code paths.
    """
    v = float(v)
    if v == 0.0:
        v = 0.0
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    if v == int(v) and abs(v) < 1e16:
        return f"{v:.1f}"
    return f"{v:.17g}"


def to_json(obj: Any) -> str:
    """Deterministic JSON with fmt_float applied to every float."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    if isinstance(obj, dict):
        items = ", ".join(f"{to_json(str(k))}: {to_json(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def write_matrix_csv(path: str, mat) -> None:
    """Matrix entries as CSV, row-major, 17 significant digits."""
    with open(path, "w", newline="") as fh:
        for row in mat:
            fh.write(",".join(fmt_float(v) for v in row))
            fh.write("\n")


def parallel_map(fn: Callable, items: Sequence | Iterable, workers: int = 1) -> list:
    """Order-preserving map; results are identical for any worker count."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    return int(raw)


def env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    return float(raw)
