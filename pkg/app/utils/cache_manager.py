"""
In-memory caching for the derivative oracles.
Derivative chains of StrataSets and Regions are memoized so that point ranks,
spectra and rank checks on the same input reuse a single iteration.
"""

import hashlib
import threading
from collections import OrderedDict
from typing import Any, Callable, Dict, Hashable, List, TypeVar

from loguru import logger

T = TypeVar("T")


class DerivativeCache:
    """Bounded LRU cache of derivative chains [s, ∂s, ∂²s, ...]."""

    def __init__(self, max_entries: int = 512):
        self.max_entries = max_entries
        self._chains: "OrderedDict[str, List[Any]]" = OrderedDict()
        self._lock = threading.Lock()
        self._stats = {"hits": 0, "misses": 0, "extensions": 0, "evictions": 0}

    def _generate_cache_key(self, key: Hashable) -> str:
        """Stable digest of a hashable key built from values with exact printers."""
        data = f"{type(key).__name__}:{key!s}"
        return hashlib.md5(data.encode()).hexdigest()

    def chain(self, key: Hashable, first: T, step: Callable[[T], T], bound: int) -> List[T]:
        """
        Return [first, step(first), ...] up to and including the first empty
        value, or bound + 1 entries when no empty value is reached.
        """
        digest = self._generate_cache_key(key)
        with self._lock:
            cached = self._chains.get(digest)
            if cached is not None:
                self._chains.move_to_end(digest)

        if cached is not None and (_is_empty(cached[-1]) or len(cached) >= bound + 1):
            self._stats["hits"] += 1
            return cached[: bound + 1]

        if cached is None:
            self._stats["misses"] += 1
            values = [first]
        else:
            self._stats["extensions"] += 1
            values = list(cached)

        while len(values) < bound + 1 and not _is_empty(values[-1]):
            values.append(step(values[-1]))
        logger.debug(f"derivative chain {digest[:8]}: {len(values)} stages (bound {bound})")

        with self._lock:
            self._chains[digest] = values
            self._chains.move_to_end(digest)
            while len(self._chains) > self.max_entries:
                self._chains.popitem(last=False)
                self._stats["evictions"] += 1
        return values

    def clear(self):
        with self._lock:
            self._chains.clear()
            self._stats = dict.fromkeys(self._stats, 0)

    def get_stats(self) -> Dict[str, int]:
        return dict(self._stats, entries=len(self._chains))


def _is_empty(value: Any) -> bool:
    return bool(getattr(value, "is_empty", False))


# Global cache instance
derivative_cache = DerivativeCache()
