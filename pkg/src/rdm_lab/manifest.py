"""Experiment manifests and deterministic file output.

A manifest is the complete parameter set of one experiment; its sha256 over
canonical JSON identifies the experiment, so a result file can always be
traced to (and re-run from) the exact inputs that produced it.  Volatile
knobs that cannot change results (thread count, output paths, assertion
mode) stay outside the hash.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import pathlib

import numpy as np

SCHEMA_VERSION = 1

_VOLATILE = ("threads", "out", "format", "assert_mode")


def jsonable(obj):
    """Recursively coerce numpy scalars/arrays and dataclasses to JSON types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "to_dict"):
            return jsonable(obj.to_dict())
        return jsonable(dataclasses.asdict(obj))
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    return obj


def canonical_json(obj):
    """Key-sorted, whitespace-free JSON; the byte form that gets hashed."""
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"))


def build_manifest(command, params):
    """Manifest dict for one experiment run."""
    return {
        "schema_version": SCHEMA_VERSION,
        "command": str(command),
        "params": jsonable(params),
    }


def manifest_sha256(manifest):
    """Hash of the manifest with volatile keys removed."""
    trimmed = dict(manifest)
    params = dict(trimmed.get("params", {}))
    for key in _VOLATILE:
        params.pop(key, None)
    trimmed["params"] = params
    return hashlib.sha256(canonical_json(trimmed).encode()).hexdigest()


def load_manifest(path):
    """Manifest from a file: bare, written by build_manifest, or a meta.json."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "manifest" in data and isinstance(data["manifest"], dict):
        data = data["manifest"]
    if "params" in data:
        return data
    return {"schema_version": SCHEMA_VERSION, "command": None, "params": data}


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (np.integer,)):
        return str(int(value))
    return str(value)


def write_csv(path, columns, rows, sha=None):
    """CSV with an embedded manifest hash comment; floats keep full precision."""
    path = pathlib.Path(path)
    lines = []
    if sha is not None:
        lines.append(f"# manifest_sha256={sha}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_json(path, obj):
    path = pathlib.Path(path)
    path.write_text(
        json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return path


def write_jsonl(path, records):
    """One canonical-JSON record per line (Monte Carlo logs)."""
    path = pathlib.Path(path)
    path.write_text(
        "".join(canonical_json(rec) + "\n" for rec in records), encoding="utf-8"
    )
    return path
