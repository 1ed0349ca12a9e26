"""Finitely presented maps omega -> omega.

Maps are piecewise: on a source interval ``[a, b)`` a piece either
translates (``i -> c + (i - a)``) or reflects (``i -> c + (b - 1 - i)``);
points outside every piece are fixed.  This keeps images and preimages of
intervals computable in time proportional to the number of pieces touched,
so maps over factorial-sized blocks stay cheap.
"""

from __future__ import annotations

from bisect import bisect_right

from ._lazy import LazyIntervals
from .errors import ValidationError
from .sets import OmegaSubset

__all__ = [
    "IndexMap",
    "PiecewiseMap",
    "FunctionMap",
    "IDENTITY",
    "identity_map",
    "swap_blocks",
    "reverse_within",
    "translate_blocks",
]


def _image(piece, a, b):
    """Image of ``[a, b)`` (inside the piece's source) as an interval."""
    lo, hi, c, reflect = piece
    if reflect:
        return c + (hi - b), c + (hi - a)
    return c + (a - lo), c + (b - lo)


class IndexMap:
    descriptor = None

    def __call__(self, i: int) -> int:
        raise NotImplementedError

    def pieces_in(self, lo: int, hi: int):
        """Pieces ``(a, b, c, reflect)`` covering ``[lo, hi)`` exactly, identity gaps included."""
        raise NotImplementedError

    def image_runs(self, lo, hi):
        return [_image(p, p[0], p[1]) for p in self.pieces_in(lo, hi)]

    def preimage_count(self, A: OmegaSubset, lo: int, hi: int) -> int:
        """``|{i in [lo, hi) : phi(i) in A}|``."""
        total = 0
        for p in self.pieces_in(lo, hi):
            x, y = _image(p, p[0], p[1])
            total += A.count_range(x, y)
        return total

    def preimage_runs(self, A: OmegaSubset, lo: int, hi: int):
        """Members of ``phi^{-1}[A] ∩ [lo, hi)`` as sorted intervals."""
        out = []
        for a, b, c, reflect in self.pieces_in(lo, hi):
            x, y = _image((a, b, c, reflect), a, b)
            for u, v in A.runs(x, y):
                if reflect:
                    out.append((c + b - v, c + b - u))
                else:
                    out.append((a + (u - c), a + (v - c)))
        out.sort()
        return out

    def describe(self):
        if self.descriptor is None:
            raise ValidationError(f"{type(self).__name__} has no JSON descriptor")
        return self.descriptor


class PiecewiseMap(IndexMap):
    """Lazily generated pieces; ``group_fn(j)`` returns a nonempty list of pieces.

    Groups must be ordered by source position and their sources disjoint.
    """

    def __init__(self, group_fn, start=0, stop=None, descriptor=None, name=None):
        self._groups = LazyIntervals(self._norm(group_fn), key=lambda g: g[0][0], start=start,
                                     stop=stop, check=self._check)
        self.descriptor = descriptor
        self.name = name
        self._flat = []
        self._flat_keys = []
        self._seen = 0

    @staticmethod
    def _norm(group_fn):
        def fn(j):
            g = []
            for p in group_fn(j):
                a, b, c = int(p[0]), int(p[1]), int(p[2])
                reflect = bool(p[3]) if len(p) > 3 else False
                if b <= a or c < 0:
                    raise ValidationError(f"bad map piece {p}")
                if g and a < g[-1][1]:
                    raise ValidationError("map pieces must be ordered and disjoint")
                g.append((a, b, c, reflect))
            if not g:
                raise ValidationError(f"map group {j} is empty")
            return tuple(g)
        return fn

    @staticmethod
    def _check(prev, cur, j):
        if prev[-1][1] > cur[0][0]:
            raise ValidationError(f"map group {j} overlaps the previous group")

    def _sync(self, bound):
        groups, _, _ = self._groups.cover(bound)
        while self._seen < len(groups):
            for p in groups[self._seen]:
                self._flat.append(p)
                self._flat_keys.append(p[0])
            self._seen += 1

    def _piece_at(self, i):
        self._sync(i + 1)
        k = bisect_right(self._flat_keys, i) - 1
        if k >= 0 and i < self._flat[k][1]:
            return self._flat[k]
        return None

    def __call__(self, i):
        p = self._piece_at(i)
        if p is None:
            return i
        a, b, c, reflect = p
        return c + (b - 1 - i) if reflect else c + (i - a)

    def pieces_in(self, lo, hi):
        if hi <= lo:
            return []
        self._sync(hi)
        k = max(bisect_right(self._flat_keys, lo) - 1, 0)
        out, pos = [], lo
        while k < len(self._flat) and self._flat[k][0] < hi:
            a, b, c, reflect = self._flat[k]
            k += 1
            if b <= pos:
                continue
            if a > pos:
                out.append((pos, a, pos, False))
            s, e = max(a, pos), min(b, hi)
            if reflect:
                out.append((s, e, c + (b - e), True))
            else:
                out.append((s, e, c + (s - a), False))
            pos = e
        if pos < hi:
            out.append((pos, hi, pos, False))
        return out


class FunctionMap(IndexMap):
    """Pointwise map from a Python callable; interval queries enumerate up to ``cap`` points."""

    def __init__(self, fn, cap=10 ** 6, name=None):
        self._fn = fn
        self.cap = cap
        self.name = name

    def __call__(self, i):
        return int(self._fn(i))

    def pieces_in(self, lo, hi):
        if hi - lo > self.cap:
            raise ValidationError(f"pointwise map cannot enumerate {hi - lo} points (cap {self.cap})")
        out = []
        for i in range(lo, hi):
            v = self(i)
            if out and not out[-1][3] and out[-1][1] == i and out[-1][2] + (i - out[-1][0]) == v:
                out[-1] = (out[-1][0], i + 1, out[-1][2], False)
            else:
                out.append((i, i + 1, v, False))
        return out


class _Identity(IndexMap):
    descriptor = {"kind": "identity"}

    def __call__(self, i):
        return i

    def pieces_in(self, lo, hi):
        return [(lo, hi, lo, False)] if hi > lo else []


IDENTITY = _Identity()


def identity_map():
    return IDENTITY


def swap_blocks(pair_fn, start=0, stop=None, descriptor=None):
    """Swap ``[a, a+L)`` with ``[c, c+L)`` for each ``pair_fn(j) = (a, c, L)`` with ``a + L <= c``."""

    def group(j):
        a, c, L = pair_fn(j)
        if a + L > c:
            raise ValidationError("swapped intervals must be disjoint and ordered")
        return [(a, a + L, c, False), (c, c + L, a, False)]

    return PiecewiseMap(group, start, stop, descriptor, name="swap")


def reverse_within(block_fn, start=0, stop=None, descriptor=None):
    """Reflect each interval ``block_fn(j) = (a, b)`` onto itself."""
    return PiecewiseMap(lambda j: [(*block_fn(j), block_fn(j)[0], True)], start, stop, descriptor,
                        name="reverse")


def translate_blocks(block_fn, start=0, stop=None, descriptor=None):
    """Move ``[a, b)`` to start at ``c`` for ``block_fn(j) = (a, b, c)``; not injective in general."""
    return PiecewiseMap(lambda j: [(*block_fn(j), False)], start, stop, descriptor, name="translate")
