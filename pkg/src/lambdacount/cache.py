"""On-disk cache of exact count tables.

One JSON file holds a list of entries, one per family and parameter.  Counts
are stored as decimal strings.  Writes go to a temporary file in the same
directory which is then renamed over the target.

Loading re-verifies a random 1% of the stored indices (and always the top
index) by recomputing each from its cached predecessors with the family's
own recurrence, so a corrupted digit anywhere in a checked value, or in a
predecessor it depends on, is caught.
"""

from __future__ import annotations

import json
import math
import os
import random
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__
from .sequences import (
    CountTable,
    Family,
    catalan,
    closed_list,
    count_table,
    motzkin_leaf_bounded,
    motzkin_list,
    phi_list,
    q_poly,
)
from .sequences.bci import bci_index, bci_size
from .sequences.closed import _sym_conv
from .sequences.delta import DeltaCache, delta_rows

FORMAT_VERSION = 1
CACHE_ENV = "LAMBDACOUNT_CACHE_DIR"
CACHE_FILE = "tables.json"


class CacheError(RuntimeError):
    pass


class CacheSpotCheckError(CacheError):
    def __init__(self, family: Family, index: int, stored: int, recomputed: int):
        self.family, self.index = family, index
        super().__init__(
            f"cache spot check failed for {family} at index {index}: "
            "stored value does not match recomputation from its predecessors"
        )


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "lambdacount"


@dataclass
class CacheEntry:
    family: Family
    route: str
    values: dict[int, int]
    tool_version: str = __version__

    def to_json(self) -> dict:
        idx = sorted(self.values)
        return {
            "family": self.family.tag,
            "p": self.family.p,
            "route": self.route,
            "tool_version": self.tool_version,
            "indices": idx,
            "values": [str(self.values[i]) for i in idx],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CacheEntry":
        try:
            fam = Family(obj["family"], obj.get("p"))
            idx, vals = obj["indices"], obj["values"]
            if len(idx) != len(vals) or not all(isinstance(v, str) for v in vals):
                raise CacheError(f"malformed entry for {fam}")
            values = {int(i): int(v) for i, v in zip(idx, vals)}
            return cls(fam, str(obj["route"]), values, str(obj.get("tool_version", "?")))
        except (KeyError, TypeError, ValueError) as e:
            raise CacheError(f"malformed cache entry: {e}") from e

    def as_table(self) -> CountTable:
        return CountTable(self.family, self.route, dict(self.values))


@dataclass
class CacheFile:
    entries: list[CacheEntry] = field(default_factory=list)
    format_version: int = FORMAT_VERSION

    def find(self, family: Family) -> Optional[CacheEntry]:
        for e in self.entries:
            if e.family == family:
                return e
        return None

    def put(self, entry: CacheEntry) -> None:
        self.entries = [e for e in self.entries if e.family != entry.family] + [entry]


def cache_store(path, cache: CacheFile) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"format_version": cache.format_version, "entries": [e.to_json() for e in cache.entries]}
    fd, tmp = tempfile.mkstemp(prefix=".tables-", suffix=".json", dir=path.parent)
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cache_load(path, spot_check: bool = True, rng: Optional[random.Random] = None) -> CacheFile:
    """Read a cache file; a missing file is an empty cache."""
    path = Path(path)
    if not path.exists():
        return CacheFile()
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise CacheError(f"corrupt cache file {path}: {e}") from e
    if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
        got = doc.get("format_version") if isinstance(doc, dict) else None
        raise CacheError(f"unsupported cache format version {got!r} (expected {FORMAT_VERSION})")
    cache = CacheFile([CacheEntry.from_json(e) for e in doc.get("entries", [])])
    if spot_check:
        rng = rng or random.Random()
        for e in cache.entries:
            spot_check_entry(e, rng)
    return cache


# ------------------------------------------------------------- spot checks


def _dense(values: dict, n_max: int) -> list[int]:
    return [values.get(i, 0) for i in range(n_max + 1)]


def _recompute_closed(values: dict, targets: list[int]) -> dict[int, int]:
    n_top = max(targets)
    lam = _dense(values, n_top)
    motz = motzkin_list(n_top)
    want = set(targets)
    out = {}
    for n, row in delta_rows(n_top):
        if n in want:
            acc = motz[n - 1] + _sym_conv(lam, n - 1)
            acc += sum(int(row[l]) * lam[l] for l in range(1, n) if lam[l])
            out[n] = acc
    if 1 in want:
        out[1] = 0
    return out


def _recompute_bck(p: int, values: dict, targets: list[int]) -> dict[int, int]:
    n_top = max(targets)
    f = _dense(values, n_top)
    motz = motzkin_leaf_bounded(p, n_top)
    delta = DeltaCache(p_cap=p)
    out = {}
    for n in targets:
        if n < 2:
            out[n] = 0
            continue
        acc = motz[n - 1] + _sym_conv(f, n - 1)
        out[n] = acc + sum(delta(n, l) * f[l] for l in range(1, n) if f[l])
    return out


def _recompute_bci(p: int, values: dict, targets: list[int]) -> dict[int, int]:
    j_top = max(bci_index(p, n) or 0 for n in targets)
    phi = [0] + [values.get(bci_size(p, j), 0) for j in range(1, j_top + 1)]
    out = {}
    for n in targets:
        j = bci_index(p, n)
        if j is None:
            out[n] = 0
        elif j == 1:
            out[n] = catalan(p - 1)
        else:
            out[n] = _sym_conv(phi, j) + q_poly(p, j - 1) * phi[j - 1]
    return out


def _recompute_linearized(p: int, values: dict, targets: list[int]) -> dict[int, int]:
    out = {}
    for n in targets:
        j = bci_index(p, n)
        if j is None:
            out[n] = 0
        elif j == 1:
            out[n] = catalan(p - 1)
        else:
            out[n] = values.get(bci_size(p, j - 1), 0) * q_poly(p, j - 1)
    return out


def _recompute_motzkin(values: dict, targets: list[int]) -> dict[int, int]:
    out = {}
    for n in targets:
        if n <= 2:
            out[n] = 1 if n >= 1 else 0
        else:
            out[n] = ((2 * n - 1) * values.get(n - 1, 0) + 3 * (n - 2) * values.get(n - 2, 0)) // (n + 1)
    return out


def recompute(family: Family, values: dict, targets: list[int]) -> dict[int, int]:
    """Recompute each target index from the predecessors in ``values``."""
    tag, p = family.tag, family.p
    if tag == "catalan":
        return {n: catalan(n) for n in targets}
    if tag == "motzkin":
        return _recompute_motzkin(values, targets)
    if tag == "motzkin-leaf-bounded":
        full = motzkin_leaf_bounded(p, max(targets))
        return {n: full[n] for n in targets}
    if tag == "bci":
        return _recompute_bci(p, values, targets)
    if tag == "linearized":
        return _recompute_linearized(p, values, targets)
    if tag == "bck":
        return _recompute_bck(p, values, targets)
    return _recompute_closed(values, targets)


def spot_check_entry(entry: CacheEntry, rng: random.Random, fraction: float = 0.01) -> list[int]:
    """Verify a random ``fraction`` of the stored indices plus the top one."""
    idx = sorted(entry.values)
    if not idx:
        return []
    k = max(1, math.ceil(fraction * len(idx)))
    targets = sorted(set(rng.sample(idx, min(k, len(idx)))) | {idx[-1]})
    got = recompute(entry.family, entry.values, targets)
    for n in targets:
        if got[n] != entry.values[n]:
            raise CacheSpotCheckError(entry.family, n, entry.values[n], got[n])
    return targets


# ------------------------------------------------------------ cached tables


def cached_table(family: Family, max_size: int, cache_dir=None, rng: Optional[random.Random] = None) -> CountTable:
    """Counts up to ``max_size``, reusing and then extending the cache.

    Cached prefixes seed the closed-term and BCI recurrences, so a longer
    request resumes where the stored table ends.
    """
    path = Path(cache_dir or default_cache_dir()) / CACHE_FILE
    cache = cache_load(path, rng=rng)
    entry = cache.find(family)
    if entry is not None and entry.values and max(entry.values) >= max_size:
        t = entry.as_table()
        return CountTable(family, t.route, {n: v for n, v in t.values.items() if n <= max_size})
    if entry is not None and entry.values:
        if family.tag == "closed":
            closed_list(max(entry.values), prefix=_dense(entry.values, max(entry.values)))
        elif family.tag == "bci":
            p = family.p
            j_top = bci_index(p, max(entry.values)) or 0
            phi_list(p, j_top, prefix=[0] + [entry.values.get(bci_size(p, j), 0) for j in range(1, j_top + 1)])
    table = count_table(family, max_size)
    cache.put(CacheEntry(family, table.route, dict(table.values)))
    cache_store(path, cache)
    return table
