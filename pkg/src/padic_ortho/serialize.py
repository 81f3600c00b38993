"""JSON instance and corpus formats.

Rationals are encoded as strings "a/b" in lowest terms ("a" for integers),
never as JSON numbers, so files are exact and language-agnostic.  Corpus
files are written canonically (sorted keys, fixed separators), which makes
generation byte-reproducible.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import InvalidParameters
from .linalg import QMatrix, QVector
from .norms import WeightedCoordinateNorm
from .oracle import Instance

INSTANCE_FORMAT = "padic-ortho/instance-v1"
CORPUS_FORMAT = "padic-ortho/corpus-v1"
REPORT_FORMAT = "padic-ortho/report-v1"


def scalar_to_str(x: Fraction) -> str:
    return str(x)


def scalar_from_str(s: Union[str, int]) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InvalidParameters(f"bad rational literal: {s!r}") from exc


def vector_to_obj(v: QVector) -> list:
    return [scalar_to_str(x) for x in v]


def vector_from_obj(obj) -> QVector:
    if not isinstance(obj, list):
        raise InvalidParameters("vector must be a JSON array")
    return tuple(scalar_from_str(x) for x in obj)


def matrix_to_obj(m: QMatrix) -> list:
    return [vector_to_obj(row) for row in m]


def matrix_from_obj(obj) -> QMatrix:
    if not isinstance(obj, list):
        raise InvalidParameters("matrix must be a JSON array of rows")
    return tuple(vector_from_obj(row) for row in obj)


def norm_to_obj(norm: WeightedCoordinateNorm) -> dict:
    return {
        "p": norm.p,
        "matrix": matrix_to_obj(norm.matrix),
        "weights": vector_to_obj(norm.weights),
        "weight_denominator": norm.weight_denominator,
    }


def norm_from_obj(obj) -> WeightedCoordinateNorm:
    if not isinstance(obj, dict):
        raise InvalidParameters("norm must be a JSON object")
    try:
        return WeightedCoordinateNorm(
            p=int(obj["p"]),
            matrix=matrix_from_obj(obj["matrix"]),
            weights=vector_from_obj(obj["weights"]),
            weight_denominator=int(obj.get("weight_denominator", 1)),
        )
    except KeyError as exc:
        raise InvalidParameters(f"norm object missing field {exc}") from exc


def instance_to_obj(instance: Instance) -> dict:
    return {
        "format": INSTANCE_FORMAT,
        "p": instance.p,
        "n": instance.n,
        "seed": instance.seed,
        "params": instance.params,
        "norm": norm_to_obj(instance.norm),
        "norm2": norm_to_obj(instance.norm2) if instance.norm2 else None,
        "basis": [vector_to_obj(b) for b in instance.basis],
        "target": vector_to_obj(instance.target) if instance.target else None,
    }


def instance_from_obj(obj) -> Instance:
    if not isinstance(obj, dict):
        raise InvalidParameters("instance must be a JSON object")
    if obj.get("format", INSTANCE_FORMAT) != INSTANCE_FORMAT:
        raise InvalidParameters(f"unknown instance format {obj.get('format')!r}")
    try:
        basis = tuple(vector_from_obj(b) for b in obj["basis"])
        return Instance(
            p=int(obj["p"]),
            n=int(obj["n"]),
            norm=norm_from_obj(obj["norm"]),
            basis=basis,
            seed=int(obj.get("seed", 0)),
            params=dict(obj.get("params") or {}),
            norm2=norm_from_obj(obj["norm2"]) if obj.get("norm2") else None,
            target=vector_from_obj(obj["target"]) if obj.get("target") else None,
        )
    except KeyError as exc:
        raise InvalidParameters(f"instance missing field {exc}") from exc


def corpus_to_obj(instances: Sequence[Instance]) -> dict:
    return {
        "format": CORPUS_FORMAT,
        "instances": [instance_to_obj(i) for i in instances],
    }


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def instance_digest(instance: Instance) -> str:
    payload = canonical_dumps(instance_to_obj(instance)).encode("utf-8")
    return "sha256:" + hashlib.sha256(payload).hexdigest()


def loads_instances(text: str) -> list[Instance]:
    """Parse either a single instance object or a corpus file."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidParameters(f"not valid JSON: {exc}") from exc
    if isinstance(obj, dict) and obj.get("format") == CORPUS_FORMAT:
        entries = obj.get("instances")
        if not isinstance(entries, list) or not entries:
            raise InvalidParameters("corpus has no instances")
        return [instance_from_obj(e) for e in entries]
    return [instance_from_obj(obj)]


def load_instances(path: str) -> list[Instance]:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_instances(fh.read())


def pick_instance(instances: list[Instance], index: int) -> Instance:
    if not 0 <= index < len(instances):
        raise InvalidParameters(
            f"instance index {index} out of range (corpus has {len(instances)})"
        )
    return instances[index]
