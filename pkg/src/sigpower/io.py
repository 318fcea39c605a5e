"""File formats shared by the command line and the library.

* network JSON: ``{"n": 3, "edges": [[0, 1, 1], [1, 2, -1]], "labels": [...]}``
* edge-list CSV: header ``i,j,sign``
* powers CSV: header ``node,power`` with an optional ``label`` column
* matrix JSON: a list of rows, or an object with an ``"X"`` field
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .core import SignedNetwork

__all__ = [
    "InputError",
    "network_to_dict",
    "network_from_dict",
    "write_network",
    "read_network",
    "write_powers",
    "read_powers",
    "write_matrix",
    "read_matrix",
]


class InputError(ValueError):
    """A user-supplied file is missing, malformed or inconsistent."""


def network_to_dict(net: SignedNetwork, labels: list[str] | None = None) -> dict:
    out = {"n": net.n, "edges": [list(e) for e in net.edges()]}
    if labels is not None:
        out["labels"] = list(labels)
    return out


def network_from_dict(data: dict) -> tuple[SignedNetwork, list[str] | None]:
    try:
        n = int(data["n"])
        edges = [(int(i), int(j), int(s)) for i, j, s in data.get("edges", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad network description: {exc}") from exc
    labels = data.get("labels")
    if labels is not None and len(labels) != n:
        raise InputError(f"{len(labels)} labels for {n} nodes")
    try:
        return SignedNetwork.from_edges(n, edges), labels
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def write_network(path, net: SignedNetwork, labels: list[str] | None = None) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["i", "j", "sign"])
            w.writerows(net.edges())
        return
    path.write_text(json.dumps(network_to_dict(net, labels)) + "\n", encoding="utf-8")


def _open_csv(path):
    try:
        return open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def read_network(path, n: int | None = None) -> tuple[SignedNetwork, list[str] | None]:
    """Read a network JSON, or an edge-list CSV (``n`` defaults to the largest id + 1)."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        edges = []
        with _open_csv(path) as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"i", "j", "sign"} <= set(reader.fieldnames):
                raise InputError(f"{path}: expected header i,j,sign")
            for line, row in enumerate(reader, start=2):
                try:
                    edges.append((int(row["i"]), int(row["j"]), int(row["sign"])))
                except (TypeError, ValueError) as exc:
                    raise InputError(f"{path}:{line}: {exc}") from exc
        size = n if n is not None else 1 + max((max(i, j) for i, j, _ in edges), default=-1)
        try:
            return SignedNetwork.from_edges(size, edges), None
        except ValueError as exc:
            raise InputError(f"{path}: {exc}") from exc
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return network_from_dict(data)


def write_powers(path, p, labels: list[str] | None = None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["node", "power", "label"] if labels else ["node", "power"])
        for k, v in enumerate(p):
            w.writerow([k, int(v), labels[k]] if labels else [k, int(v)])


def read_powers(path) -> tuple[np.ndarray, list[str] | None]:
    """Powers ordered by node id; ids must be exactly ``0..n-1``."""
    rows = {}
    labels = {}
    with _open_csv(path) as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"node", "power"} <= set(reader.fieldnames):
            raise InputError(f"{path}: expected header node,power[,label]")
        for line, row in enumerate(reader, start=2):
            try:
                k, v = int(row["node"]), int(row["power"])
            except (TypeError, ValueError) as exc:
                raise InputError(f"{path}:{line}: {exc}") from exc
            if v < 0:
                raise InputError(f"{path}:{line}: negative power {v}")
            rows[k] = v
            if row.get("label"):
                labels[k] = row["label"]
    if sorted(rows) != list(range(len(rows))):
        raise InputError(f"{path}: node ids must be 0..{len(rows) - 1}")
    p = np.array([rows[k] for k in range(len(rows))], dtype=np.int64)
    return p, ([labels.get(k, str(k)) for k in range(len(rows))] if labels else None)


def write_matrix(path, X, **extra) -> None:
    Path(path).write_text(json.dumps({**extra, "X": np.asarray(X).tolist()}, indent=1), encoding="utf-8")


def read_matrix(path) -> np.ndarray:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("X")
    try:
        X = np.array(data, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: matrix entries must be integers") from exc
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise InputError(f"{path}: expected a square matrix")
    return X
