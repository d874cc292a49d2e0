"""
Reading input files and writing canonical JSON.
"""

import csv
import dataclasses
import json
import logging
import math
from collections.abc import Mapping
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, TypeVar

import numpy as np
import pydantic

from gaiakit.errors import FormatError

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=pydantic.BaseModel)

INF_TOKEN = "inf"


def load_json(path: str | Path) -> Any:
    """
    Parse a JSON file.

    Raises:
        FormatError: With the line and column of the first syntax error
        OSError: If the file cannot be read
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: {e.msg}", e.lineno, e.colno) from None


def load_model(path: str | Path, model: type[M], raw: Any = None) -> M:
    """Parse and validate a file against a model; ``raw`` skips re-reading it."""
    raw = load_json(path) if raw is None else raw
    try:
        return model.model_validate(raw)
    except pydantic.ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "<root>"
        raise FormatError(f"{path}: {where}: {first['msg']}") from None


def load_dataset(path: str | Path, n_in: int, n_out: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """
    Read a CSV of numeric rows, each ``n_in`` inputs followed by ``n_out`` targets.

    Blank lines and lines starting with ``#`` are skipped.
    """
    pairs = []
    with open(path, newline="", encoding="utf-8") as f:
        for line, row in enumerate(csv.reader(f), start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if len(row) != n_in + n_out:
                raise FormatError(
                    f"{path}: expected {n_in + n_out} values, found {len(row)}", line, 1
                )
            values = []
            for column, cell in enumerate(row, start=1):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise FormatError(f"{path}: '{cell}' is not a number", line, column) from None
            pairs.append((np.array(values[:n_in]), np.array(values[n_in:])))
    logger.debug(f"read {len(pairs)} rows from {path}")
    return pairs


def detect_kind(raw: Any) -> str:
    """Guess what a JSON document describes from its top-level keys."""
    if not isinstance(raw, Mapping):
        raise FormatError("expected a JSON object at the top level", 1, 1)
    keys = set(raw)
    if {"source", "target"} <= keys:
        return "functor"
    if {"schema", "tables"} <= keys:
        return "instance"
    if keys & {"levels", "shape", "nerve_of"}:
        return "simplicial"
    if "transitions" in keys or "states" in keys:
        return "coalgebra"
    if "kind" in keys or "table" in keys:
        return "space"
    if keys & {"objects", "chain", "poset", "free"}:
        return "category"
    raise FormatError(f"cannot tell what the file describes from keys {sorted(keys)}")


# --- Output ---


def jsonable(value: Any) -> Any:
    """
    Convert results to plain JSON values.

    Fractions become ``"p/q"`` strings (integers stay integers), infinities the
    ``"inf"`` token, sets sorted lists and tuple keys ``"(a,b)"`` strings.
    """
    match value:
        case Enum():
            return value.value
        case None | bool() | str():
            return value
        case np.bool_():
            return bool(value)
        case Fraction():
            return value.numerator if value.denominator == 1 else str(value)
        case int() | np.integer():
            return int(value)
        case float() | np.floating():
            value = float(value)
            if math.isinf(value):
                return INF_TOKEN if value > 0 else "-" + INF_TOKEN
            return value
        case np.ndarray():
            return jsonable(value.tolist())
        case Mapping():
            return {_key(k): jsonable(v) for k, v in value.items()}
        case set() | frozenset():
            return sorted((jsonable(v) for v in value), key=_order)
        case list() | tuple():
            return [jsonable(v) for v in value]
        case _ if dataclasses.is_dataclass(value):
            return jsonable(
                {f.name: getattr(value, f.name) for f in dataclasses.fields(value)}
            )
        case pydantic.BaseModel():
            return value.model_dump(by_alias=True, exclude_none=True)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _key(key: Any) -> str:
    if isinstance(key, tuple):
        return "(" + ",".join(str(part) for part in key) + ")"
    return str(jsonable(key))


def _order(value: Any) -> str:
    return json.dumps(value, sort_keys=True)


def dumps(value: Any) -> str:
    """Canonical, byte-stable JSON: sorted keys, no whitespace, shortest float repr."""
    return json.dumps(jsonable(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
