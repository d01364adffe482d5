from __future__ import annotations

import json
import random

import pytest

from lambdacount.cache import (
    CACHE_FILE,
    CacheEntry,
    CacheError,
    CacheFile,
    CacheSpotCheckError,
    cache_load,
    cache_store,
    cached_table,
    default_cache_dir,
    spot_check_entry,
)
from lambdacount.sequences import Family, count_table


def _flip_digit(s: str, pos: int) -> str:
    return s[:pos] + str((int(s[pos]) + 1) % 10) + s[pos + 1 :]


def test_roundtrip_closed_500(tmp_path):
    t = count_table(Family("closed"), 500)
    path = tmp_path / CACHE_FILE
    cache_store(path, CacheFile([CacheEntry(t.family, t.route, dict(t.values))]))
    loaded = cache_load(path, rng=random.Random(0))
    assert loaded.find(Family("closed")).values == t.values
    raw = json.loads(path.read_text())
    assert raw["format_version"] == 1
    assert all(isinstance(v, str) for v in raw["entries"][0]["values"])


@pytest.mark.parametrize(
    "family,n",
    [(Family("closed"), 80), (Family("bci", 2), 60), (Family("bck", 2), 30), (Family("linearized", 1), 40),
     (Family("motzkin"), 50), (Family("catalan"), 30), (Family("motzkin-leaf-bounded", 3), 20)],
)
def test_flipped_digit_detected(tmp_path, family, n):
    t = count_table(family, n)
    top = max(t.values)
    values = dict(t.values)
    s = str(values[top])
    values[top] = int(_flip_digit(s, len(s) // 2))
    entry = CacheEntry(family, t.route, values)
    with pytest.raises(CacheSpotCheckError) as e:
        spot_check_entry(entry, random.Random(1))
    assert e.value.index == top


def test_flipped_digit_in_the_middle_of_closed_table(tmp_path):
    # lambda_top depends on every earlier lambda through the convolution
    t = count_table(Family("closed"), 200)
    values = dict(t.values)
    values[97] = int(_flip_digit(str(values[97]), 3))
    with pytest.raises(CacheSpotCheckError):
        spot_check_entry(CacheEntry(t.family, t.route, values), random.Random(3))


def test_version_and_corruption(tmp_path):
    path = tmp_path / CACHE_FILE
    path.write_text(json.dumps({"format_version": 2, "entries": []}))
    with pytest.raises(CacheError):
        cache_load(path)
    path.write_text("{not json")
    with pytest.raises(CacheError):
        cache_load(path)
    path.write_text(json.dumps({"format_version": 1, "entries": [{"family": "closed"}]}))
    with pytest.raises(CacheError):
        cache_load(path)


def test_empty_cache_cold_start(tmp_path):
    assert cache_load(tmp_path / "missing.json").entries == []
    t = cached_table(Family("closed"), 10, tmp_path)
    assert t[10] == 7558 and t[11] == 0
    assert (tmp_path / CACHE_FILE).exists()


def test_resume_extends_prefix(tmp_path):
    cached_table(Family("bci", 1), 50, tmp_path)
    t = cached_table(Family("bci", 1), 110, tmp_path)
    assert t.values == count_table(Family("bci", 1), 110).values
    entry = cache_load(tmp_path / CACHE_FILE).find(Family("bci", 1))
    assert max(entry.values) == 110
    # a shorter request is served from the cache
    assert cached_table(Family("bci", 1), 20, tmp_path).values == count_table(Family("bci", 1), 20).values


def test_env_override(monkeypatch, tmp_path):
    monkeypatch.setenv("LAMBDACOUNT_CACHE_DIR", str(tmp_path))
    assert default_cache_dir() == tmp_path


def test_store_is_atomic(tmp_path, monkeypatch):
    path = tmp_path / CACHE_FILE
    cache_store(path, CacheFile())
    before = path.read_text()

    def boom(*a, **k):
        raise OSError("disk full")

    monkeypatch.setattr(json, "dump", boom)
    with pytest.raises(OSError):
        cache_store(path, CacheFile([CacheEntry(Family("closed"), "x", {1: 0})]))
    assert path.read_text() == before
    assert [p.name for p in tmp_path.iterdir()] == [CACHE_FILE]
