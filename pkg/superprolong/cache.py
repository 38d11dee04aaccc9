"""Bounded memo cache for expensive exact computations."""

from __future__ import annotations

from collections import OrderedDict
from collections.abc import Callable
import hashlib
import json
import logging
import threading
import time
from typing import Any

from .const import DEFAULT_CACHE_ENTRIES

_LOGGER = logging.getLogger(__name__)


class ComputationCache:
    """LRU cache keyed by method name and arguments."""

    def __init__(self, max_entries: int = DEFAULT_CACHE_ENTRIES):
        """Initialize the cache.

        Args:
            max_entries: Number of entries kept before the least recently
                used one is evicted
        """
        if max_entries < 1:
            raise ValueError("max_entries must be positive")
        self._cache: OrderedDict[str, tuple[Any, str, float]] = OrderedDict()  # key -> (data, method, cached_at)
        self._max_entries = max_entries
        self._hit_count = 0
        self._miss_count = 0
        self._evictions = 0
        self._lock = threading.RLock()
        _LOGGER.debug("Cache initialized with %d entries", max_entries)

    @property
    def max_entries(self) -> int:
        return self._max_entries

    def _make_key(self, method: str, **kwargs: Any) -> str:
        """Create a cache key from method name and arguments."""
        sorted_kwargs = sorted(kwargs.items())
        key_data = f"{method}:{json.dumps(sorted_kwargs, sort_keys=True, default=str)}"
        return hashlib.sha256(key_data.encode()).hexdigest()

    def __contains__(self, key: str) -> bool:
        return key in self._cache

    def __len__(self) -> int:
        return len(self._cache)

    def get(self, method: str, **kwargs: Any) -> Any | None:
        """Return the cached result, or None on a miss."""
        key = self._make_key(method, **kwargs)
        with self._lock:
            if key in self._cache:
                data, _, cached_at = self._cache[key]
                self._cache.move_to_end(key)
                self._hit_count += 1
                _LOGGER.debug("Cache HIT for %s (age: %.1fs)", method, time.monotonic() - cached_at)
                return data
            self._miss_count += 1
        _LOGGER.debug("Cache MISS for %s", method)
        return None

    def set(self, method: str, data: Any, **kwargs: Any) -> None:
        """Store a result, evicting least recently used entries if full."""
        key = self._make_key(method, **kwargs)
        with self._lock:
            self._cache[key] = (data, method, time.monotonic())
            self._cache.move_to_end(key)
            self._evict()
        _LOGGER.debug("Cached %s", method)

    def get_or_compute(self, method: str, compute: Callable[[], Any], **kwargs: Any) -> Any:
        """Cached value, or ``compute()`` stored under the same key.

        None results are not cached.
        """
        data = self.get(method, **kwargs)
        if data is not None:
            return data
        data = compute()
        if data is not None:
            self.set(method, data, **kwargs)
        return data

    def _evict(self) -> None:
        while len(self._cache) > self._max_entries:
            _, (_, method, _) = self._cache.popitem(last=False)
            self._evictions += 1
            _LOGGER.debug("Evicted %s", method)

    def invalidate(self, method: str | None = None, **kwargs: Any) -> None:
        """Invalidate cache entries.

        Args:
            method: If specified, invalidate only entries for this method
            **kwargs: If specified with method, invalidate one entry
        """
        with self._lock:
            if method is None:
                count = len(self._cache)
                self._cache.clear()
                _LOGGER.info("Cache cleared (%d entries removed)", count)
            elif kwargs:
                key = self._make_key(method, **kwargs)
                if self._cache.pop(key, None) is not None:
                    _LOGGER.debug("Invalidated cache for %s with specific args", method)
            else:
                keys_to_delete = [key for key, (_, cached_method, _) in self._cache.items() if cached_method == method]
                for key in keys_to_delete:
                    del self._cache[key]
                if keys_to_delete:
                    _LOGGER.debug("Invalidated %d cache entries for %s", len(keys_to_delete), method)

    def cleanup(self, max_entries: int | None = None) -> None:
        """Shrink to ``max_entries`` (or the configured bound)."""
        with self._lock:
            if max_entries is not None:
                if max_entries < 1:
                    raise ValueError("max_entries must be positive")
                self._max_entries = max_entries
            before = len(self._cache)
            self._evict()
            removed = before - len(self._cache)
        if removed:
            _LOGGER.debug("Cleaned up %d cache entries", removed)

    def get_stats(self) -> dict[str, Any]:
        """Get cache statistics."""
        with self._lock:
            total_requests = self._hit_count + self._miss_count
            hit_rate = (self._hit_count / total_requests * 100) if total_requests > 0 else 0
            methods: dict[str, int] = {}
            for _, method, _ in self._cache.values():
                methods[method] = methods.get(method, 0) + 1
            return {
                "entries": len(self._cache),
                "max_entries": self._max_entries,
                "hits": self._hit_count,
                "misses": self._miss_count,
                "evictions": self._evictions,
                "hit_rate": hit_rate,
                "total_requests": total_requests,
                "methods": methods,
            }

    def __str__(self) -> str:
        stats = self.get_stats()
        return f"Cache: {stats['entries']} entries, {stats['hit_rate']:.1f}% hit rate ({stats['hits']}/{stats['total_requests']})"


class ScopedCache(ComputationCache):
    """Cache with a separate size limit per method."""

    def __init__(self, max_entries: int = DEFAULT_CACHE_ENTRIES) -> None:
        super().__init__(max_entries=max_entries)

        # Entries kept per method; cohomology tables are the largest objects
        self.scope_limits = {
            "graded": 32,
            "prolong": 64,
            "cohomology": 16,
            "grading": 32,
        }

    def set(self, method: str, data: Any, **kwargs: Any) -> None:
        super().set(method, data, **kwargs)
        limit = self.scope_limits.get(method)
        if limit is None:
            return
        with self._lock:
            same = [key for key, (_, cached_method, _) in self._cache.items() if cached_method == method]
            for key in same[: max(0, len(same) - limit)]:
                del self._cache[key]
                self._evictions += 1
                _LOGGER.debug("Evicted %s (scope limit %d)", method, limit)
