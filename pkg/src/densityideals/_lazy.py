"""Index-addressable memo of a pure generator function."""

from __future__ import annotations

import threading
from bisect import bisect_left, bisect_right

from .errors import ValidationError


class LazyIntervals:
    """Caches ``fn(j)`` for ``j = start, start+1, ...`` keyed by a left endpoint.

    ``fn`` must be pure and return items whose ``key(item)`` is strictly
    increasing in ``j``.  ``stop`` (exclusive) bounds finite families.
    The memo is append-only and guarded by a lock, so concurrent readers
    observe the same values a fresh instance would produce.
    """

    def __init__(self, fn, key, start=0, stop=None, check=None, weight=None):
        self._fn = fn
        self._key = key
        self._start = start
        self._stop = stop
        self._check = check
        self._weight = weight
        self._items = []
        self._keys = []
        self._cum = [0]
        self._lock = threading.RLock()

    @property
    def start(self):
        return self._start

    @property
    def stop(self):
        return self._stop

    def _extend_one(self):
        j = self._start + len(self._items)
        if self._stop is not None and j >= self._stop:
            return False
        item = self._fn(j)
        k = self._key(item)
        if self._keys and k <= self._keys[-1]:
            raise ValidationError(f"generator keys must increase: index {j} has key {k}")
        if self._check is not None and self._items:
            self._check(self._items[-1], item, j)
        self._items.append(item)
        self._keys.append(k)
        if self._weight is not None:
            self._cum.append(self._cum[-1] + self._weight(item))
        return True

    def item(self, j):
        """Return ``fn(j)``; raises IndexError past ``stop``."""
        if j < self._start:
            raise IndexError(j)
        with self._lock:
            while len(self._items) <= j - self._start:
                if not self._extend_one():
                    raise IndexError(j)
            return self._items[j - self._start]

    def cover(self, bound):
        """Materialize every item with key < bound (plus the first one >= bound).

        Returns ``(items, keys, cum)`` where ``cum[i]`` is the total weight of
        the first ``i`` items (only maintained when ``weight`` was given).
        """
        with self._lock:
            while not self._keys or self._keys[-1] < bound:
                if not self._extend_one():
                    break
            return self._items, self._keys, self._cum

    def count_below(self, bound):
        """Number of items whose key is < bound."""
        keys = self.cover(bound)[1]
        return bisect_left(keys, bound)

    def index_at_or_below(self, x):
        """Offset (0-based) of the last item with key <= x, or -1."""
        keys = self.cover(x + 1)[1]
        return bisect_right(keys, x) - 1

    def __len__(self):
        return len(self._items)
