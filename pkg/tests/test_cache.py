"""Tests for caching functionality."""

import asyncio

import pytest

from superprolong.cache import ComputationCache, ScopedCache


def test_cache_basic_operations():
    """Test basic cache get/set operations."""
    cache = ComputationCache(max_entries=5)

    # Test cache miss
    assert cache.get("prolong", label="p2I") is None

    # Test cache set and hit
    cache.set("prolong", {"levels": 3}, label="p2I")
    assert cache.get("prolong", label="p2I") == {"levels": 3}

    # Different arguments create different keys
    assert cache.get("prolong", label="p1I") is None
    assert len(cache) == 1


def test_cache_key_consistency():
    """Keys do not depend on keyword order."""
    cache = ComputationCache()
    cache.set("prolong", "data", label="p2I", mode="m", k=None)
    assert cache.get("prolong", k=None, label="p2I", mode="m") == "data"
    assert cache.get("prolong", mode="m", k=None, label="p2I") == "data"


def test_lru_eviction():
    """The least recently used entry goes first."""
    cache = ComputationCache(max_entries=2)
    cache.set("graded", 1, label="p1I")
    cache.set("graded", 2, label="p2I")
    assert cache.get("graded", label="p1I") == 1
    cache.set("graded", 3, label="p12I")

    assert cache.get("graded", label="p2I") is None
    assert cache.get("graded", label="p1I") == 1
    assert cache.get_stats()["evictions"] == 1


def test_invalid_bound():
    with pytest.raises(ValueError):
        ComputationCache(max_entries=0)
    with pytest.raises(ValueError):
        ComputationCache().cleanup(max_entries=0)


def test_cache_invalidation():
    """Test cache invalidation methods."""
    cache = ComputationCache()

    cache.set("prolong", {"data": 1}, label="a")
    cache.set("prolong", {"data": 2}, label="b")
    cache.set("cohomology", {"data": 3}, label="c")

    # Invalidate specific entry
    cache.invalidate("prolong", label="a")
    assert cache.get("prolong", label="a") is None
    assert cache.get("prolong", label="b") == {"data": 2}

    # Invalidate all entries for one method
    cache.invalidate("prolong")
    assert cache.get("prolong", label="b") is None
    assert cache.get("cohomology", label="c") == {"data": 3}

    # Clear all cache
    cache.invalidate()
    assert len(cache) == 0


def test_cache_stats():
    """Test cache statistics."""
    cache = ComputationCache()

    stats = cache.get_stats()
    assert stats["entries"] == 0
    assert stats["hits"] == 0

    cache.get("test")  # Miss
    cache.set("test", "data")
    cache.get("test")  # Hit
    cache.get("test")  # Hit
    cache.get("other")  # Miss

    stats = cache.get_stats()
    assert stats["entries"] == 1
    assert stats["hits"] == 2
    assert stats["misses"] == 2
    assert stats["hit_rate"] == 50.0
    assert stats["methods"] == {"test": 1}
    assert str(cache) == "Cache: 1 entries, 50.0% hit rate (2/4)"


def test_cleanup_shrinks():
    cache = ComputationCache(max_entries=10)
    for i in range(6):
        cache.set("grading", i, index=i)
    cache.cleanup(max_entries=4)
    assert len(cache) == 4
    assert cache.max_entries == 4
    assert cache.get("grading", index=0) is None
    assert cache.get("grading", index=5) == 5


def test_get_or_compute():
    cache = ComputationCache()
    calls = []

    def compute():
        calls.append(1)
        return "value"

    assert cache.get_or_compute("classify", compute) == "value"
    assert cache.get_or_compute("classify", compute) == "value"
    assert len(calls) == 1

    # None results are recomputed
    assert cache.get_or_compute("missing", lambda: None) is None
    assert len(cache) == 1


def test_scoped_cache_limits():
    """Each method keeps at most its own number of entries."""
    cache = ScopedCache()
    cache.scope_limits["cohomology"] = 2
    for i in range(4):
        cache.set("cohomology", i, label=str(i))
    cache.set("other", "kept")

    assert cache.get("cohomology", label="0") is None
    assert cache.get("cohomology", label="1") is None
    assert cache.get("cohomology", label="3") == 3
    assert cache.get("other") == "kept"
    assert cache.get_stats()["methods"] == {"cohomology": 2, "other": 1}


async def test_stats_during_concurrent_writes():
    """Statistics stay consistent while worker threads fill the cache."""
    cache = ComputationCache(max_entries=50)

    def fill(offset):
        for i in range(200):
            cache.set("cohomology", i, label=f"{offset}-{i}")

    def read():
        return [cache.get_stats() for _ in range(200)]

    results = await asyncio.gather(
        asyncio.to_thread(fill, 0),
        asyncio.to_thread(fill, 1),
        asyncio.to_thread(read),
    )

    for stats in results[2]:
        assert stats["entries"] == sum(stats["methods"].values())
        assert stats["entries"] <= 50
    assert len(cache) == 50
