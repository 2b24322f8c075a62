"""Result envelope and a JSON writer with 17-significant-digit floats."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

import numpy as np

ARTIFACT_VERSION = "0.1.0"


@dataclass
class ResultEnvelope:
    subcommand: str
    inputs: dict[str, Any]
    outputs: dict[str, Any]
    error_estimates: dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0
    field: str | None = None
    artifact_version: str = ARTIFACT_VERSION

    def as_dict(self) -> dict[str, Any]:
        out = {
            "artifact_version": self.artifact_version,
            "subcommand": self.subcommand,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "error_estimates": self.error_estimates,
            "wall_time": self.wall_time,
        }
        if self.field is not None:
            out["field"] = self.field
        return out


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def _emit(obj, indent: int, level: int, parts: list[str]):
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        parts.append("true" if obj else "false")
    elif obj is None:
        parts.append("null")
    elif isinstance(obj, (int, np.integer)):
        parts.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        parts.append(format_float(obj) if math.isfinite(obj) else "null")
    elif isinstance(obj, str):
        parts.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            parts.append("{}")
            return
        parts.append("{")
        for i, (key, value) in enumerate(obj.items()):
            parts.append(("," if i else "") + pad + json.dumps(str(key)) + ": ")
            _emit(value, indent, level + 1, parts)
        parts.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            parts.append("[]")
            return
        parts.append("[")
        for i, value in enumerate(items):
            parts.append(("," if i else "") + pad)
            _emit(value, indent, level + 1, parts)
        parts.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    parts: list[str] = []
    _emit(obj, indent, 0, parts)
    return "".join(parts) + "\n"


def load_schema() -> dict:
    text = resources.files("bellqft").joinpath("result_envelope.schema.json").read_text()
    return json.loads(text)
