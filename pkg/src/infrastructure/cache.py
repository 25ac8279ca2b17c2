"""
In-Memory Result Cache
"""
from functools import lru_cache
from threading import Lock
from typing import Any, Callable, Hashable, Optional

from src.config.settings import get_settings
from src.utilities.logger import get_logger

logger = get_logger(__name__)

# Key prefixes
CACHE_PDF_X = "pdf_x"
CACHE_PDF_Y = "pdf_y"


class InMemoryCacheManager:
    """Thread-safe in-memory cache for immutable numerical results"""

    def __init__(self, enabled: bool = True):
        self.enabled = enabled
        self.cache = {}
        self._lock = Lock()
        self.hits = 0
        self.misses = 0

    @staticmethod
    def _key(key: Hashable, prefix: Optional[str]) -> Hashable:
        return (prefix, key) if prefix else key

    def get(self, key: Hashable, prefix: Optional[str] = None) -> Optional[Any]:
        """Get value from cache, optionally with prefix"""
        if not self.enabled:
            return None
        with self._lock:
            value = self.cache.get(self._key(key, prefix))
            if value is None:
                self.misses += 1
            else:
                self.hits += 1
            return value

    def set(self, key: Hashable, value: Any, prefix: Optional[str] = None) -> None:
        """Set value in cache, optionally with prefix"""
        if not self.enabled:
            return
        with self._lock:
            self.cache[self._key(key, prefix)] = value

    def get_or_compute(self, key: Hashable, compute: Callable[[], Any], prefix: Optional[str] = None) -> Any:
        """Cached value, computing and storing it on a miss"""
        cached = self.get(key, prefix=prefix)
        if cached is not None:
            logger.debug(f"Cache hit for {prefix}:{key}")
            return cached
        value = compute()
        self.set(key, value, prefix=prefix)
        return value

    def delete(self, key: Hashable, prefix: Optional[str] = None) -> None:
        """Delete a key from cache"""
        with self._lock:
            self.cache.pop(self._key(key, prefix), None)

    def clear(self) -> None:
        """Clear all cache"""
        with self._lock:
            self.cache.clear()
            self.hits = 0
            self.misses = 0

    def __len__(self) -> int:
        return len(self.cache)


@lru_cache()
def get_cache() -> InMemoryCacheManager:
    """Get the process-wide cache"""
    return InMemoryCacheManager(enabled=get_settings().cache_enabled)
