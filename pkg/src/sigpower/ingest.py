"""Build networks and powers from dyadic event counts and capability scores.

Relations CSV header: ``country_a,country_b,year,cooperation_count,conflict_count``.
A pair is friendly when cooperation outnumbers conflict in the chosen year,
hostile when conflict outnumbers cooperation, and unlinked on a tie.
Repeated rows for a pair are summed first. Countries get ids in sorted
label order.

Capabilities CSV header: ``country,year,capability`` with capability in
``[0, 1]``; power is ``max(min_power, round(capability * scale))`` with
halves rounded up.
"""

from __future__ import annotations

import csv
import logging
from collections import defaultdict
from decimal import ROUND_HALF_UP, Decimal, InvalidOperation

import numpy as np

from .core import SignedNetwork
from .io import InputError

__all__ = ["load_relations", "load_powers", "RELATION_FIELDS", "CAPABILITY_FIELDS"]

log = logging.getLogger(__name__)

RELATION_FIELDS = ("country_a", "country_b", "year", "cooperation_count", "conflict_count")
CAPABILITY_FIELDS = ("country", "year", "capability")


def _rows(path, fields):
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not set(fields) <= {f.strip() for f in reader.fieldnames}:
            raise InputError(f"{path}: expected header {','.join(fields)}")
        for line, row in enumerate(reader, start=2):
            yield line, {k.strip(): (v.strip() if isinstance(v, str) else v) for k, v in row.items() if k}


def _count(path, line, value, name) -> int:
    try:
        v = int(value)
    except (TypeError, ValueError):
        raise InputError(f"{path}:{line}: {name} must be a non-negative integer, got {value!r}") from None
    if v < 0:
        raise InputError(f"{path}:{line}: {name} must be a non-negative integer, got {v}")
    return v


def load_relations(path, year: int, tie: int = 0) -> tuple[SignedNetwork, list[str]]:
    """Signed network for ``year`` and its labels (index = node id).

    ``tie`` sets the sign given to pairs with equal counts: 0 for no edge,
    +1 or -1 to force one.
    """
    if tie not in (-1, 0, 1):
        raise ValueError("tie must be -1, 0 or 1")
    totals: dict[tuple[str, str], list[int]] = defaultdict(lambda: [0, 0])
    for line, row in _rows(path, RELATION_FIELDS):
        a, b = row["country_a"], row["country_b"]
        if not a or not b:
            raise InputError(f"{path}:{line}: empty country name")
        if a == b:
            raise InputError(f"{path}:{line}: a country cannot relate to itself")
        y = _count(path, line, row["year"], "year")
        coop = _count(path, line, row["cooperation_count"], "cooperation_count")
        conf = _count(path, line, row["conflict_count"], "conflict_count")
        if y != year:
            continue
        key = (a, b) if a < b else (b, a)
        totals[key][0] += coop
        totals[key][1] += conf
    if not totals:
        log.warning("no relations recorded for year %s in %s", year, path)
    labels = sorted({c for pair in totals for c in pair})
    ids = {c: k for k, c in enumerate(labels)}
    edges = []
    for (a, b), (coop, conf) in sorted(totals.items()):
        sign = 1 if coop > conf else -1 if conf > coop else tie
        if sign:
            edges.append((ids[a], ids[b], sign))
    return SignedNetwork.from_edges(len(labels), edges), labels


def _quantize(capability: Decimal, scale: int) -> int:
    return int((capability * scale).quantize(Decimal(1), rounding=ROUND_HALF_UP))


def load_powers(path, year: int, labels: list[str], scale: int = 1000, min_power: int = 1) -> np.ndarray:
    """Powers for the countries in ``labels`` (in that order).

    Countries missing from the file for ``year`` get ``min_power`` with a
    warning; rows for countries outside ``labels`` are ignored.
    """
    caps: dict[str, Decimal] = {}
    for line, row in _rows(path, CAPABILITY_FIELDS):
        y = _count(path, line, row["year"], "year")
        try:
            c = Decimal(row["capability"])
        except (InvalidOperation, TypeError):
            raise InputError(f"{path}:{line}: capability must be a number, got {row['capability']!r}") from None
        if not c.is_finite() or c < 0 or c > 1:
            raise InputError(f"{path}:{line}: capability must lie in [0, 1], got {row['capability']}")
        if y == year:
            if row["country"] in caps:
                raise InputError(f"{path}:{line}: second capability for {row['country']} in {year}")
            caps[row["country"]] = c
    out = np.empty(len(labels), dtype=np.int64)
    for k, name in enumerate(labels):
        if name not in caps:
            log.warning("no capability for %s in %s; using %d", name, year, min_power)
            out[k] = min_power
        else:
            out[k] = max(min_power, _quantize(caps[name], scale))
    return out
