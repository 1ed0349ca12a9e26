"""Random set presentations paired with an independent brute-force oracle.

Each generator returns ``(presentation, members)`` where ``members`` is a
bytearray flagging membership below ``LIMIT``, computed directly from the raw
parameters without going through the library's counting code.
"""

import random
from fractions import Fraction

from densityideals import (BlockFamily, Complement, Difference, FiniteSet, Intersection, Interval, Periodic,
                           Progressions, Union)

LIMIT = 10 ** 4


def _mask(pred, limit=LIMIT):
    return bytearray(1 if pred(i) else 0 for i in range(limit))


def _finite(rng):
    els = sorted(rng.sample(range(LIMIT + 50), rng.randint(0, 40)))
    s = set(els)
    return FiniteSet(els), _mask(s.__contains__)


def _interval(rng):
    lo = rng.randrange(LIMIT)
    hi = lo + rng.randint(1, LIMIT // 2)
    return Interval(lo, hi), _mask(lambda i: lo <= i < hi)


def _periodic(rng):
    m = rng.randint(1, 30)
    res = rng.sample(range(m), rng.randint(1, m))
    r = set(res)
    return Periodic(m, res), _mask(lambda i: i % m in r)


def _blocks(rng):
    blocks, pos = [], rng.randint(0, 20)
    # grow until past the limit so the family looks infinite from below
    while pos < LIMIT + 100:
        length = rng.randint(1, 400)
        step = rng.choice([1, 1, 1, 2, 3, 7])
        blocks.append((pos, pos + length, step))
        pos += length + rng.randint(0, 600)
    mask = bytearray(LIMIT)
    for a, b, step in blocks:
        for i in range(a, min(b, LIMIT), step):
            mask[i] = 1
    fam = BlockFamily(lambda j: blocks[j], stop=len(blocks))
    return fam, mask


def _progressions(rng):
    segs, start = [], rng.randint(-1, 50)
    for _ in range(rng.randint(1, 5)):
        w = Fraction(rng.randint(4, 40), rng.randint(1, 4))
        if w < 1:
            w = Fraction(1)
        l0 = rng.randint(0, 3)
        l1 = l0 + rng.randint(1, 60)
        segs.append((start, w, l0, l1))
        last = start + (l1 - 1) * w.numerator // w.denominator + 1
        start = last + rng.randint(0, 300)
    mask = bytearray(LIMIT)
    for t, w, l0, l1 in segs:
        for l in range(l0, l1):
            p = t + (l * w.numerator) // w.denominator + 1
            if p < LIMIT:
                mask[p] = 1
    return Progressions(segs), mask


LEAVES = [_finite, _interval, _periodic, _blocks, _progressions]


def random_presentation(rng, depth=2):
    """A leaf or a Boolean combination of depth at most ``depth``."""
    if depth == 0 or rng.random() < 0.4:
        return rng.choice(LEAVES)(rng)
    op = rng.choice(["union", "intersection", "difference", "complement"])
    A, ma = random_presentation(rng, depth - 1)
    if op == "complement":
        return Complement(A), bytearray(1 - x for x in ma)
    B, mb = random_presentation(rng, depth - 1)
    if op == "union":
        return Union(A, B), bytearray(x | y for x, y in zip(ma, mb))
    if op == "intersection":
        return Intersection(A, B), bytearray(x & y for x, y in zip(ma, mb))
    return Difference(A, B), bytearray(x & (1 - y) for x, y in zip(ma, mb))


def presentations(count, seed=20240601):
    rng = random.Random(seed)
    return [random_presentation(rng) for _ in range(count)]


def brute_prefix(mask):
    """``out[n] = |{i < n : mask[i]}|`` for n up to ``len(mask)``."""
    out = [0]
    for x in mask:
        out.append(out[-1] + x)
    return out


def brute_dominates(pc, pb, horizon):
    """Least n <= horizon with pc[n] > pb[n], or None."""
    for n in range(horizon + 1):
        if pc[n] > pb[n]:
            return n
    return None
