"""Finitely presented subsets of the natural numbers.

Every set answers ``contains(n)`` and ``count_range(lo, hi)`` (the number of
members in ``[lo, hi)``) without walking large intervals: block families are
counted by summing clipped block lengths, periodic sets by residue
arithmetic, and Boolean combinations by inclusion-exclusion over the
intersections of their leaves.  All intervals are half-open ``[a, b)``.
"""

from __future__ import annotations

import heapq
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from ._lazy import LazyIntervals
from .errors import DegenerateInputError, ValidationError

__all__ = [
    "OmegaSubset",
    "FiniteSet",
    "Interval",
    "Progressions",
    "BlockFamily",
    "Periodic",
    "Union",
    "Intersection",
    "Difference",
    "Complement",
    "EMPTY",
    "FULL",
    "contains",
    "prefix_count",
    "dominates_prefixwise",
    "DominationResult",
    "split_mod",
    "SplitResult",
    "register_blocks",
    "block_catalog",
    "catalog_blocks",
]


# -- run-stream helpers -----------------------------------------------------
# A run stream is an iterator of sorted, disjoint half-open intervals.


def _coalesce(runs):
    cur = None
    for a, b in runs:
        if a >= b:
            continue
        if cur is None:
            cur = [a, b]
        elif a <= cur[1]:
            if b > cur[1]:
                cur[1] = b
        else:
            yield cur[0], cur[1]
            cur = [a, b]
    if cur is not None:
        yield cur[0], cur[1]


def _union_runs(x, y):
    return _coalesce(heapq.merge(x, y))


def _intersect_runs(x, y):
    x, y = iter(x), iter(y)
    a = next(x, None)
    b = next(y, None)
    while a is not None and b is not None:
        lo = max(a[0], b[0])
        hi = min(a[1], b[1])
        if lo < hi:
            yield lo, hi
        if a[1] <= b[1]:
            a = next(x, None)
        else:
            b = next(y, None)


def _complement_runs(x, lo, hi):
    pos = lo
    for a, b in x:
        if a > pos:
            yield pos, a
        pos = max(pos, b)
    if pos < hi:
        yield pos, hi


def _subtract_runs(x, y, lo, hi):
    return _intersect_runs(x, _complement_runs(y, lo, hi))


# -- base class -------------------------------------------------------------


class OmegaSubset:
    """A subset of omega with exact membership and interval counting."""

    descriptor = None

    def contains(self, n: int) -> bool:
        raise NotImplementedError

    def count_range(self, lo: int, hi: int) -> int:
        """Number of members in ``[lo, hi)``."""
        raise NotImplementedError

    def runs(self, lo: int, hi: int):
        """Yield the members of ``[lo, hi)`` as sorted disjoint intervals."""
        raise NotImplementedError

    def __contains__(self, n):
        return self.contains(n)

    def prefix_count(self, n: int) -> int:
        if n <= 0:
            return 0
        return self.count_range(0, n)

    def elements(self, lo: int, hi: int):
        for a, b in self.runs(lo, hi):
            yield from range(a, b)

    def nth(self, j: int, cap: int | None = None) -> int:
        """The j-th member (0-based) in increasing order."""
        hi = 1
        while self.prefix_count(hi) <= j:
            hi *= 2
            if cap is not None and hi > 2 * cap:
                raise DegenerateInputError(f"set has at most {self.prefix_count(cap)} members below {cap}")
        lo = hi // 2
        # least n with prefix_count(n + 1) > j
        while lo < hi:
            mid = (lo + hi) // 2
            if self.prefix_count(mid + 1) > j:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def describe(self) -> dict:
        if self.descriptor is None:
            raise ValidationError(f"{type(self).__name__} built ad hoc has no JSON descriptor")
        return self.descriptor

    def __or__(self, other):
        return Union(self, other)

    def __and__(self, other):
        return Intersection(self, other)

    def __sub__(self, other):
        return Difference(self, other)

    def complement(self):
        return Complement(self)


def contains(A: OmegaSubset, n: int) -> bool:
    return A.contains(n)


def prefix_count(A: OmegaSubset, n: int) -> int:
    """``|A ∩ [0, n)|``."""
    return A.prefix_count(n)


# -- leaves -----------------------------------------------------------------


class FiniteSet(OmegaSubset):
    def __init__(self, elements):
        els = sorted(set(int(e) for e in elements))
        if els and els[0] < 0:
            raise ValidationError("elements must be natural numbers")
        self._els = tuple(els)

    @property
    def members(self):
        return self._els

    @property
    def descriptor(self):
        return {"kind": "finite", "elements": [str(e) for e in self._els]}

    def contains(self, n):
        i = bisect_left(self._els, n)
        return i < len(self._els) and self._els[i] == n

    def count_range(self, lo, hi):
        if hi <= lo:
            return 0
        return bisect_left(self._els, hi) - bisect_left(self._els, lo)

    def runs(self, lo, hi):
        i = bisect_left(self._els, lo)
        j = bisect_left(self._els, hi)
        return _coalesce((e, e + 1) for e in self._els[i:j])

    def __repr__(self):
        return f"FiniteSet({list(self._els)!r})"


class Interval(OmegaSubset):
    """``[lo, hi)``."""

    def __init__(self, lo, hi):
        self.lo, self.hi = int(lo), max(int(lo), int(hi))
        if self.lo < 0:
            raise ValidationError("interval must lie in omega")

    @property
    def descriptor(self):
        return {"kind": "interval", "lo": str(self.lo), "hi": str(self.hi)}

    def contains(self, n):
        return self.lo <= n < self.hi

    def count_range(self, lo, hi):
        return max(0, min(hi, self.hi) - max(lo, self.lo))

    def runs(self, lo, hi):
        a, b = max(lo, self.lo), min(hi, self.hi)
        return iter([(a, b)] if a < b else [])

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"


class Progressions(OmegaSubset):
    """Finite union of segments ``{t + floor(l*w) + 1 : l0 <= l < l1}`` with rational ``w >= 1``.

    Segments must be ordered with each one ending before the next begins.
    With ``w = 1`` a segment is the interval ``[t + l0 + 1, t + l1 + 1)``.
    """

    def __init__(self, segments):
        segs = []
        for t, w, l0, l1 in segments:
            t, w, l0, l1 = int(t), Fraction(w), int(l0), int(l1)
            if w < 1 or l1 <= l0 or l0 < 0:
                raise ValidationError("progression segment needs w >= 1 and l0 < l1")
            seg = (t, w, l0, l1)
            if segs and self._at(segs[-1], segs[-1][3] - 1) >= self._at(seg, l0):
                raise ValidationError("progression segments must be ordered and disjoint")
            if self._at(seg, l0) < 0:
                raise ValidationError("progression points must be natural numbers")
            segs.append(seg)
        self.segments = tuple(segs)
        self._firsts = [self._at(s, s[2]) for s in segs]
        self._cum = [0]
        for s in segs:
            self._cum.append(self._cum[-1] + s[3] - s[2])

    @staticmethod
    def _at(seg, l):
        t, w, _, _ = seg
        return t + (l * w.numerator) // w.denominator + 1

    @staticmethod
    def _below(seg, x):
        """Members of the segment that are < x."""
        # l counts iff l*w < x - t - 1
        t, w, l0, l1 = seg
        c = -(-(x - t - 1) * w.denominator // w.numerator)
        return 0 if c <= l0 else min(c, l1) - l0

    @property
    def descriptor(self):
        return {"kind": "progressions", "segments": [
            [str(t), str(w.numerator), str(w.denominator), str(l0), str(l1)] for t, w, l0, l1 in self.segments]}

    def __len__(self):
        return self._cum[-1]

    def _prefix(self, x):
        k = bisect_left(self._firsts, x)
        if k == 0:
            return 0
        return self._cum[k - 1] + self._below(self.segments[k - 1], x)

    prefix_count = _prefix

    def count_range(self, lo, hi):
        if hi <= lo:
            return 0
        return self._prefix(hi) - self._prefix(lo)

    def contains(self, n):
        k = bisect_right(self._firsts, n) - 1
        if k < 0:
            return False
        seg = self.segments[k]
        l = seg[2] + self._below(seg, n)
        return l < seg[3] and self._at(seg, l) == n

    def runs(self, lo, hi):
        def gen():
            k = max(bisect_right(self._firsts, lo) - 1, 0)
            for seg in self.segments[k:]:
                if self._at(seg, seg[2]) >= hi:
                    break
                l = seg[2] + self._below(seg, lo)
                if seg[1] == 1:
                    a, b = self._at(seg, l), self._at(seg, seg[3] - 1) + 1
                    if l < seg[3] and a < hi:
                        yield a, min(b, hi)
                    continue
                while l < seg[3]:
                    p = self._at(seg, l)
                    if p >= hi:
                        break
                    yield p, p + 1
                    l += 1

        return _coalesce(gen())

    def last(self):
        s = self.segments[-1]
        return self._at(s, s[3] - 1) if s else None

    def checkpoints(self):
        """Positions just after the first, second and last member of each segment."""
        out = set()
        for s in self.segments:
            for l in {s[2], min(s[2] + 1, s[3] - 1), s[3] - 1}:
                out.add(self._at(s, l) + 1)
        return sorted(out)

    def __repr__(self):
        return f"Progressions({len(self.segments)} segments, {len(self)} points)"


class BlockFamily(OmegaSubset):
    """Union of disjoint blocks ``fn(j) = (a_j, b_j)`` or ``(a_j, b_j, step)``.

    A block with a step holds ``a_j, a_j + step, ...`` below ``b_j``.  Starts
    must increase strictly and blocks must not overlap; ``stop`` makes the
    family finite.  Membership of ``n`` only materializes blocks with
    ``a_j <= n``.
    """

    def __init__(self, fn, start=0, stop=None, descriptor=None, name=None):
        self._fn = fn
        self._name = name
        self.descriptor = descriptor
        self._blocks = LazyIntervals(
            self._norm, key=lambda blk: blk[0], start=start, stop=stop,
            check=self._check, weight=lambda blk: -(-(blk[1] - blk[0]) // blk[2]),
        )

    def _norm(self, j):
        blk = self._fn(j)
        if len(blk) == 2:
            a, b = blk
            step = 1
        else:
            a, b, step = blk
        a, b, step = int(a), int(b), int(step)
        if not 0 <= a < b or step < 1:
            raise ValidationError(f"block {j} = [{a}, {b}) step {step} is not a nonempty interval")
        return (a, b, step)

    @staticmethod
    def _check(prev, cur, j):
        if prev[1] > cur[0]:
            raise ValidationError(f"block {j} starts at {cur[0]} inside the previous block ending at {prev[1]}")

    def block(self, j):
        return self._blocks.item(j)

    @property
    def first_index(self):
        return self._blocks.start

    def blocks_below(self, bound):
        """Materialized blocks whose start is < bound."""
        items, keys, _ = self._blocks.cover(bound)
        return items[: bisect_left(keys, bound)]

    def contains(self, n):
        items, keys, _ = self._blocks.cover(n + 1)
        k = bisect_right(keys, n) - 1
        if k < 0:
            return False
        a, b, step = items[k]
        return n < b and (n - a) % step == 0

    def _prefix(self, n):
        if n <= 0:
            return 0
        items, keys, cum = self._blocks.cover(n)
        k = bisect_left(keys, n)
        if k == 0:
            return 0
        a, b, step = items[k - 1]
        top = min(b, n)
        return cum[k - 1] + (-(-(top - a) // step))

    prefix_count = _prefix

    def count_range(self, lo, hi):
        if hi <= lo:
            return 0
        return self._prefix(hi) - self._prefix(lo)

    def runs(self, lo, hi):
        def gen():
            for a, b, step in self.blocks_below(hi):
                if b <= lo:
                    continue
                if step == 1:
                    yield max(a, lo), min(b, hi)
                else:
                    first = a if a >= lo else a + -(-(lo - a) // step) * step
                    for p in range(first, min(b, hi), step):
                        yield p, p + 1

        return _coalesce(gen())

    def __repr__(self):
        return f"BlockFamily({self._name or self._fn!r})"


class Periodic(OmegaSubset):
    """``{n : n mod modulus in residues}``."""

    def __init__(self, modulus, residues):
        modulus = int(modulus)
        if modulus < 1:
            raise ValidationError("modulus must be >= 1")
        res = sorted(set(int(r) % modulus for r in residues))
        self.modulus = modulus
        self.residues = tuple(res)

    @property
    def descriptor(self):
        return {"kind": "periodic", "modulus": str(self.modulus), "residues": [str(r) for r in self.residues]}

    def contains(self, n):
        return n % self.modulus in self.residues

    def _prefix(self, n):
        if n <= 0:
            return 0
        q, r = divmod(n, self.modulus)
        return q * len(self.residues) + bisect_left(self.residues, r)

    prefix_count = _prefix

    def count_range(self, lo, hi):
        if hi <= lo:
            return 0
        return self._prefix(hi) - self._prefix(lo)

    def runs(self, lo, hi):
        m = self.modulus

        def gen():
            base = (lo // m) * m
            while base < hi:
                for r in self.residues:
                    p = base + r
                    if p >= hi:
                        break
                    if p >= lo:
                        yield p, p + 1
                base += m

        return _coalesce(gen())

    def __repr__(self):
        return f"Periodic({self.modulus}, {list(self.residues)})"


EMPTY = FiniteSet(())
FULL = Periodic(1, (0,))


# -- Boolean combinations ---------------------------------------------------


class _Binary(OmegaSubset):
    kind = ""

    def __init__(self, left, right):
        self.left = left
        self.right = right

    @property
    def descriptor(self):
        return {"kind": self.kind, "left": self.left.describe(), "right": self.right.describe()}

    def describe(self):
        return self.descriptor

    def prefix_count(self, n):
        if n <= 0:
            return 0
        return sum(c * f(n) for c, f in _terms(self))


class Union(_Binary):
    kind = "union"

    def contains(self, n):
        return self.left.contains(n) or self.right.contains(n)

    def count_range(self, lo, hi):
        return _count_intersection((self,), lo, hi)

    def runs(self, lo, hi):
        return _union_runs(self.left.runs(lo, hi), self.right.runs(lo, hi))


class Intersection(_Binary):
    kind = "intersection"

    def contains(self, n):
        return self.left.contains(n) and self.right.contains(n)

    def count_range(self, lo, hi):
        return _count_intersection((self,), lo, hi)

    def runs(self, lo, hi):
        return _intersect_runs(self.left.runs(lo, hi), self.right.runs(lo, hi))


class Difference(_Binary):
    kind = "difference"

    def contains(self, n):
        return self.left.contains(n) and not self.right.contains(n)

    def count_range(self, lo, hi):
        return _count_intersection((self,), lo, hi)

    def runs(self, lo, hi):
        return _subtract_runs(self.left.runs(lo, hi), self.right.runs(lo, hi), lo, hi)


class Complement(OmegaSubset):
    def __init__(self, inner):
        self.inner = inner

    @property
    def descriptor(self):
        return {"kind": "complement", "of": self.inner.describe()}

    def describe(self):
        return self.descriptor

    def contains(self, n):
        return not self.inner.contains(n)

    def prefix_count(self, n):
        return 0 if n <= 0 else n - self.inner.prefix_count(n)

    def count_range(self, lo, hi):
        if hi <= lo:
            return 0
        return (hi - lo) - self.inner.count_range(lo, hi)

    def runs(self, lo, hi):
        return _complement_runs(self.inner.runs(lo, hi), lo, hi)


# -- counting intersections of leaves ----------------------------------------


def _expand(nodes, sign, acc):
    """Accumulate ``sign * |⋂ nodes|`` as signed intersections of leaves."""
    for i, node in enumerate(nodes):
        rest = nodes[:i] + nodes[i + 1:]
        if isinstance(node, Union):
            _expand(rest + (node.left,), sign, acc)
            _expand(rest + (node.right,), sign, acc)
            _expand(rest + (node.left, node.right), -sign, acc)
            return
        if isinstance(node, Intersection):
            _expand(rest + (node.left, node.right), sign, acc)
            return
        if isinstance(node, Difference):
            _expand(rest + (node.left,), sign, acc)
            _expand(rest + (node.left, node.right), -sign, acc)
            return
        if isinstance(node, Complement):
            _expand(rest, sign, acc)
            _expand(rest + (node.inner,), -sign, acc)
            return
    key = tuple(sorted(dict.fromkeys(nodes), key=id))
    acc[key] = acc.get(key, 0) + sign


def _counter(leaves):
    """Prefix-count function for the intersection of ``leaves``."""
    if not leaves:
        return lambda n: max(n, 0)
    if len(leaves) == 1:
        return leaves[0].prefix_count
    return _leaf_index(leaves)._prefix


def _terms(node):
    """Signed leaf intersections of a Boolean node, computed once per node."""
    t = node.__dict__.get("_terms")
    if t is None:
        acc = {}
        _expand((node,), 1, acc)
        t = tuple((c, _counter(k)) for k, c in acc.items() if c)
        node._terms = t
    return t


def _count_intersection(nodes, lo, hi):
    """``|⋂ nodes ∩ [lo, hi)|`` by inclusion-exclusion down to leaves."""
    if hi <= lo:
        return 0
    if len(nodes) == 1 and isinstance(nodes[0], _Binary):
        terms = _terms(nodes[0])
    else:
        acc = {}
        _expand(tuple(nodes), 1, acc)
        terms = tuple((c, _counter(k)) for k, c in acc.items() if c)
    return sum(c * (f(hi) - f(lo)) for c, f in terms)


def _merge_periodic(ps):
    m, res = 1, (0,)
    for p in ps:
        new_m = m * p.modulus // gcd(m, p.modulus)
        pres = set(p.residues)
        cur = set(res)
        res = tuple(r for r in range(new_m) if r % m in cur and r % p.modulus in pres)
        m = new_m
    return Periodic(m, res)


@lru_cache(maxsize=4096)
def _leaf_index(leaves):
    return _LeafIntersection(leaves)


class _LeafIntersection:
    """Prefix index of ``S ∩ P`` where S intersects sparse leaves, P is periodic.

    The runs of S are materialized lazily (few per prefix for the catalog
    families) together with cumulative counts of P inside them, so each
    query costs one bisection plus one closed-form periodic count.
    """

    def __init__(self, leaves):
        periodic = [x for x in leaves if isinstance(x, Periodic)]
        self._sparse = [x for x in leaves if not isinstance(x, Periodic)]
        self._p = _merge_periodic(periodic) if periodic else None
        self._covered = 0
        self._starts = []
        self._ends = []
        self._cum = [0]
        import threading

        self._lock = threading.Lock()

    def _p_count(self, a, b):
        return b - a if self._p is None else self._p.count_range(a, b)

    def _extend(self, bound):
        if bound <= self._covered:
            return
        new = max(bound, 2 * self._covered, 64)
        stream = self._sparse[0].runs(self._covered, new)
        for leaf in self._sparse[1:]:
            stream = _intersect_runs(stream, leaf.runs(self._covered, new))
        for a, b in stream:
            self._starts.append(a)
            self._ends.append(b)
            self._cum.append(self._cum[-1] + self._p_count(a, b))
        self._covered = new

    def _prefix(self, n):
        if n <= 0:
            return 0
        if self._p is not None and not self._sparse:
            return self._p.prefix_count(n)
        if n <= self._covered:
            # lists are append-only and every run below _covered is final
            k = bisect_left(self._starts, n)
            if k == 0:
                return 0
            return self._cum[k - 1] + self._p_count(self._starts[k - 1], min(self._ends[k - 1], n))
        with self._lock:
            self._extend(n)
            k = bisect_left(self._starts, n)
            if k == 0:
                return 0
            a, b = self._starts[k - 1], self._ends[k - 1]
            return self._cum[k - 1] + self._p_count(a, min(b, n))

    def count_range(self, lo, hi):
        return self._prefix(hi) - self._prefix(lo)


# -- prefix domination and splitting ----------------------------------------


@dataclass(frozen=True)
class DominationResult:
    holds: bool
    first_failure: int | None
    horizon: int
    checked_points: int

    def __bool__(self):
        return self.holds


def dominates_prefixwise(C: OmegaSubset, B: OmegaSubset, horizon: int) -> DominationResult:
    """Check ``|C ∩ n| <= |B ∩ n|`` for every ``n <= horizon``.

    The difference of the two counts is piecewise linear with slope
    +1, 0 or -1 between consecutive run endpoints of C and B, so only those
    breakpoints are visited; the least violating ``n`` is solved for exactly.
    """
    if horizon < 1:
        raise ValidationError("horizon must be >= 1")
    c_runs = list(C.runs(0, horizon))
    b_runs = list(B.runs(0, horizon))
    points = {0, horizon}
    for a, b in c_runs:
        points.add(a)
        points.add(b)
    for a, b in b_runs:
        points.add(a)
        points.add(b)
    points = sorted(points)
    c_starts = [a for a, _ in c_runs]
    b_starts = [a for a, _ in b_runs]

    def inside(starts, runs, x):
        k = bisect_right(starts, x) - 1
        return k >= 0 and x < runs[k][1]

    diff = 0
    for p, q in zip(points, points[1:]):
        slope = inside(c_starts, c_runs, p) - inside(b_starts, b_runs, p)
        if slope > 0 and diff + (q - p) > 0:
            # diff(p) <= 0 here, else an earlier segment would have failed
            return DominationResult(False, p + 1 - diff, horizon, len(points))
        diff += slope * (q - p)
    return DominationResult(True, None, horizon, len(points))


@dataclass(frozen=True)
class SplitResult:
    classes: tuple
    leftover: FiniteSet
    horizon: int


def split_mod(C: OmegaSubset, d: int, horizon: int) -> SplitResult:
    """Deal the members of C below ``horizon`` into d interleaved classes.

    With ``c_0 < c_1 < ...`` enumerating C, class k is ``{c_{k+i*d} : i >= 1}``
    and ``c_0..c_{d-1}`` are returned as the leftover.
    """
    if d < 1:
        raise ValidationError("d must be >= 1")
    els = list(C.elements(0, horizon))
    if len(els) < d + 1:
        raise DegenerateInputError(f"need at least {d + 1} members below {horizon}, found {len(els)}")
    classes = tuple(FiniteSet(els[k + d::d]) for k in range(d))
    return SplitResult(classes, FiniteSet(els[:d]), horizon)


# -- block generator catalog -------------------------------------------------

_BLOCK_CATALOG = {}


def register_blocks(name):
    """Register ``factory(**params) -> BlockFamily`` under ``name``."""

    def deco(factory):
        _BLOCK_CATALOG[name] = factory
        return factory

    return deco


def block_catalog():
    return sorted(_BLOCK_CATALOG)


def catalog_blocks(name, **params) -> BlockFamily:
    try:
        factory = _BLOCK_CATALOG[name]
    except KeyError:
        raise ValidationError(f"unknown block generator {name!r}") from None
    fam = factory(**params)
    fam.descriptor = {"kind": "blocks", "generator": name, "params": _jsonify(params)}
    return fam


def _jsonify(v):
    # big integers travel as decimal strings
    if isinstance(v, bool):
        return v
    if isinstance(v, OmegaSubset):
        return v.describe()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, dict):
        return {k: _jsonify(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonify(x) for x in v]
    return v


@lru_cache(maxsize=None)
def _fact(k):
    return 1 if k <= 1 else k * _fact(k - 1)


@register_blocks("factorial_scaled")
def _factorial_scaled(lo_mult=2, hi_mult=3, k_start=1):
    """Blocks ``(lo_mult*k!, hi_mult*k!]`` for ``k >= k_start``."""
    lo_mult, hi_mult = int(lo_mult), int(hi_mult)
    return BlockFamily(lambda k: (lo_mult * _fact(k) + 1, hi_mult * _fact(k) + 1),
                       start=int(k_start), name=f"({lo_mult}k!,{hi_mult}k!]")


@register_blocks("factorial_eu_blocks")
def _factorial_eu_blocks():
    return _factorial_scaled(2, 3, 1)


@register_blocks("factorial_light_blocks")
def _factorial_light_blocks():
    return _factorial_scaled(1, 2, 1)


@register_blocks("powers")
def _powers(base=2):
    base = int(base)
    return BlockFamily(lambda j: (base ** j, base ** j + 1), name=f"powers of {base}")


@register_blocks("explicit")
def _explicit(intervals=()):
    ivs = [(int(a), int(b)) for a, b in intervals]
    return BlockFamily(lambda j: ivs[j], stop=len(ivs), name="explicit")


@register_blocks("arithmetic_blocks")
def _arithmetic_blocks(offset=0, period=10, length=3):
    """``[offset + j*period, offset + j*period + length)`` for every j."""
    offset, period, length = int(offset), int(period), int(length)
    if not 0 < length <= period:
        raise ValidationError("need 0 < length <= period")
    return BlockFamily(lambda j: (offset + j * period, offset + j * period + length), name="arithmetic")
