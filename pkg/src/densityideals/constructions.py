"""Conversions between weights and measure sequences.

``measures_from_weight`` cuts omega at the points where g doubles.  The
normalizations ``doubling_regroup`` and ``monotone_rearrange`` bring a
probability sequence into the shape ``weight_from_measures`` expects, and
the latter rebuilds a weight from the blocks together with a trace of every
intermediate choice.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegenerateInputError, PreconditionError, ScanBoundError, SynthesisError, ValidationError
from .indexmaps import PiecewiseMap
from .measures import MeasureBlock, MeasureSequence, require_flags
from .sets import Interval, OmegaSubset
from .weights import PiecewiseWeight, WeightFunction, require_certificate

__all__ = [
    "DEFAULT_SCAN_BOUND",
    "measures_from_weight",
    "doubling_regroup",
    "monotone_rearrange",
    "normalize",
    "BucketDecomposition",
    "bucket_decomposition",
    "weight_from_measures",
    "WeightSynthesisTrace",
    "BlockTrace",
    "check_trace",
    "lem3_witness_scan",
    "WitnessScan",
]

DEFAULT_SCAN_BOUND = 10 ** 9


# -- weight -> measures -------------------------------------------------------


def _first_reaching(g, start, target, scan_bound):
    """Least n > start with g(n) >= target, for nondecreasing g."""
    step, lo, hi = 1, start, start + 1
    g_lo = g(start)
    while True:
        if hi > scan_bound:
            raise ScanBoundError(f"g stays below {target} up to the scan bound {scan_bound}; g may be bounded")
        v = g(hi)
        if v < g_lo:
            raise ValidationError(f"g decreases between {lo} and {hi}")
        if v >= target:
            break
        lo, g_lo = hi, v
        step *= 2
        hi = start + step
    # g(lo) < target <= g(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        v = g(mid)
        if v >= target:
            hi = mid
        else:
            if v < g_lo:
                raise ValidationError(f"g decreases near {mid}")
            lo, g_lo = mid, v
    return hi


def measures_from_weight(g: WeightFunction, K: int, scan_bound=DEFAULT_SCAN_BOUND) -> MeasureSequence:
    """First K blocks ``[n_k, n_{k+1})`` with atoms ``1/g(n_k)``, where
    ``n_0 = 1`` and ``n_{k+1}`` is the least n with ``g(n) >= 2 g(n_k)``."""
    if K < 1:
        raise ValidationError("K must be >= 1")
    require_certificate(g, "measures_from_weight")
    cuts = [1]
    for _ in range(K):
        n = cuts[-1]
        cuts.append(_first_reaching(g, n, 2 * g(n), scan_bound))
    blocks = [MeasureBlock.uniform(a, b, Fraction(1, g(a))) for a, b in zip(cuts, cuts[1:])]
    prob = all(b.total_mass == 1 for b in blocks)
    M = MeasureSequence(blocks.__getitem__, 0, K, consecutive_intervals=True, covers_omega=True,
                        probability=prob, nonincreasing=True, origin=1, name="from_weight")
    M.cuts = tuple(cuts)
    try:
        M.descriptor = {"kind": "from_weight", "weight": g.describe(), "blocks": str(K)}
    except ValidationError:
        pass
    return M


# -- normalizations -------------------------------------------------------------


def doubling_regroup(M: MeasureSequence, K: int) -> MeasureSequence:
    """Merge consecutive blocks so that supports at least double; atoms are averaged."""
    require_flags(M, "doubling_regroup", "consecutive_intervals", "covers_omega", "probability")
    if K < 1:
        raise ValidationError("K must be >= 1")
    out = []
    n = M.first
    size = None
    for _ in range(K):
        group = []
        total = 0
        while True:
            try:
                blk = M.block(n)
            except ValidationError:
                raise DegenerateInputError(f"input ran out of blocks while regrouping block {len(out)}") from None
            group.append(blk)
            total += blk.d
            n += 1
            if size is None or total >= 2 * size:
                break
        size = total
        c = len(group)
        pieces = [(lo, hi, w / c) for blk in group for lo, hi, w in blk.pieces]
        out.append(MeasureBlock(pieces, (group[0].domain[0], group[-1].domain[1])))
    R = MeasureSequence(out.__getitem__, 0, K, consecutive_intervals=True, covers_omega=True,
                        probability=True, doubling=True, origin=M.origin, name="regrouped")
    return R


def _rearranged(blk: MeasureBlock):
    """Nonincreasing relayout of a block onto its support positions, and map pieces."""
    order = sorted(range(len(blk.pieces)), key=lambda i: -blk.pieces[i][2])  # stable
    slots = [(lo, hi) for lo, hi, _ in blk.pieces]
    new_pieces, map_pieces = [], []
    si, pos = 0, slots[0][0]
    for i in order:
        lo, hi, w = blk.pieces[i]
        src = lo
        while src < hi:
            s_lo, s_hi = slots[si]
            take = min(hi - src, s_hi - pos)
            new_pieces.append((pos, pos + take, w))
            # new position pos+t carries the atom that sat at src+t
            map_pieces.append((pos, pos + take, src))
            src += take
            pos += take
            if pos == s_hi and si + 1 < len(slots):
                si += 1
                pos = slots[si][0]
    return MeasureBlock(new_pieces, blk.domain), map_pieces


def monotone_rearrange(M: MeasureSequence, K: int):
    """Sort atoms nonincreasingly inside each support.

    Returns ``(M', phi)`` with ``M'_n({i}) = M_n({phi(i)})``; phi fixes every
    support setwise and is the identity off the supports.
    """
    stop = M.first + K if M.stop is None else min(M.stop, M.first + K)

    def gen(n):
        return _rearranged(M.block(n))[0]

    def group(n):
        blk = M.block(n)
        moved = [p for p in _rearranged(blk)[1] if p[0] != p[2]]
        return moved or [(blk.support_min, blk.support_min + 1, blk.support_min)]

    R = MeasureSequence(gen, M.first, stop, consecutive_intervals=M.consecutive_intervals,
                        probability=M.probability, covers_omega=M.covers_omega, nonincreasing=True,
                        doubling=M.doubling, origin=M.origin, name="rearranged")
    return R, PiecewiseMap(group, M.first, stop, name="monotone")


def normalize(M: MeasureSequence, K: int) -> MeasureSequence:
    """Regroup to doubling supports, then sort atoms; K output blocks."""
    return monotone_rearrange(doubling_regroup(M, K), K)[0]


# -- buckets ------------------------------------------------------------------


def _side(w: Fraction, d: int):
    """('L', k) with k/d <= w < (k+1)/d, or ('R', k) with 1/((k+1)d) <= w < 1/(kd)."""
    wd = w * d
    if wd >= 1:
        return "L", wd.numerator // wd.denominator
    inv = 1 / wd
    return "R", -(-inv.numerator // inv.denominator) - 1


def _h(side, k, d):
    """Exact h and its floor."""
    if side == "L":
        return Fraction(d, k), d // k
    return Fraction((k + 1) * d), (k + 1) * d


@dataclass(frozen=True)
class BucketDecomposition:
    n: int
    d: int
    L: dict  # k -> list of [lo, hi) runs
    R: dict

    def size(self, side, k):
        runs = (self.L if side == "L" else self.R).get(k, ())
        return sum(b - a for a, b in runs)

    def bucket_of(self, i):
        for side, table in (("L", self.L), ("R", self.R)):
            for k, runs in table.items():
                if any(a <= i < b for a, b in runs):
                    return side, k
        return None


def bucket_decomposition(M: MeasureSequence, n: int) -> BucketDecomposition:
    blk = M.block(n)
    d = blk.d
    L, R = {}, {}
    for lo, hi, w in blk.pieces:
        side, k = _side(w, d)
        tab = L if side == "L" else R
        runs = tab.setdefault(k, [])
        if runs and runs[-1][1] == lo:
            runs[-1] = (runs[-1][0], hi)
        else:
            runs.append((lo, hi))
    return BucketDecomposition(n, d, dict(sorted(L.items())), dict(sorted(R.items())))


# -- measures -> weight ---------------------------------------------------------


class _BlockView:
    """Position-level h and prefix mass over one block's pieces."""

    def __init__(self, blk: MeasureBlock):
        self.blk = blk
        self.lo, self.hi = blk.domain
        self.d = blk.d
        self.starts = [p[0] for p in blk.pieces]
        self.info = []
        for lo, hi, w in blk.pieces:
            side, k = _side(w, self.d)
            hx, hf = _h(side, k, self.d)
            self.info.append((side, k, hx, hf))

    def piece_at(self, pos):
        return bisect_right(self.starts, pos) - 1

    def h(self, pos):
        return self.info[self.piece_at(pos)][3]

    def h_right(self, r):
        """h(min R) when R is the final r points."""
        return self.h(self.hi - r)

    def h_left(self, l):
        """h(max L) when L is the first l points."""
        return self.h(self.lo + l - 1)

    def max_left(self):
        """Largest l with mass of the first l-1 points < 1/2."""
        half = Fraction(1, 2)
        acc, t = Fraction(0), 0
        for lo, hi, w in self.blk.pieces:
            m = (hi - lo) * w
            if acc + m < half:
                acc += m
                t += hi - lo
                continue
            q = (half - acc) / w
            t += -(-q.numerator // q.denominator) - 1
            break
        return t + 1


def _least(pred, lo, hi):
    """Least x in [lo, hi] with pred(x), for monotone pred; None when pred(hi) fails."""
    if lo > hi or not pred(hi):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


@dataclass
class BlockTrace:
    n: int
    domain: tuple
    d: int
    buckets: list  # (lo, hi, weight, side, k, h_exact, h_floor)
    L: tuple | None  # [lo, hi) of L_n, None for the first block
    R: tuple
    branch: str
    h_min_R: int
    h_max_L_next: int
    r: int
    g_pieces: list = field(default_factory=list)

    def as_dict(self):
        def fr(x):
            return [str(x.numerator), str(x.denominator)]

        return {
            "n": str(self.n),
            "domain": [str(self.domain[0]), str(self.domain[1])],
            "d": str(self.d),
            "buckets": [{"lo": str(a), "hi": str(b), "weight": fr(w), "side": s, "k": str(k),
                         "h_exact": fr(hx), "h_floor": str(hf)} for a, b, w, s, k, hx, hf in self.buckets],
            "L": None if self.L is None else [str(self.L[0]), str(self.L[1])],
            "R": [str(self.R[0]), str(self.R[1])],
            "branch": self.branch,
            "h_min_R": str(self.h_min_R),
            "h_max_L_next": str(self.h_max_L_next),
            "r": str(self.r),
            "g": [[str(a), str(b), str(v)] for a, b, v in self.g_pieces],
        }


@dataclass
class WeightSynthesisTrace:
    blocks: list
    floor_policy: str = "floor"

    def as_dict(self):
        return {"floor_policy": self.floor_policy, "blocks": [b.as_dict() for b in self.blocks]}


def _choose_boundaries(cur: _BlockView, nxt: _BlockView, l_cur: int, n: int):
    cap_r = min(cur.d // 2, cur.d - l_cur)
    cap_l = min(nxt.max_left(), nxt.d - 1)
    if cap_r < 1 or cap_l < 1:
        raise SynthesisError(f"no room for boundary sets at block {n}", block=n)
    cmax = min(cap_r, cap_l)
    c = _least(lambda x: cur.h_right(x) <= nxt.h_left(x), 1, cmax)
    if c is not None:
        return c, c, "equal"
    if cap_r <= cap_l:
        l = _least(lambda x: nxt.h_left(x) >= cur.d, 1, cap_l)
        if l is None:
            raise SynthesisError(f"L_{n + 1} cannot reach h >= d_{n} at block {n}", block=n)
        return cap_r, l, "fallback_R_capped"
    target = nxt.h_left(cap_l)
    r = _least(lambda x: cur.h_right(x) <= target, 1, cap_r)
    if r is None:
        raise SynthesisError(f"R_{n} cannot reach h(min R) <= h(max L) at block {n}", block=n)
    return r, cap_l, "fallback_L_capped"


def weight_from_measures(M: MeasureSequence, K: int):
    """Synthesize a nondecreasing weight from K normalized probability blocks.

    Block K is materialized only to place ``L_K``; the emitted weight is
    defined up to the end of block ``K-1``.
    """
    require_flags(M, "weight_from_measures", "consecutive_intervals", "covers_omega", "probability",
                  "nonincreasing", "doubling")
    if K < 1:
        raise ValidationError("K must be >= 1")
    views = []
    for n in range(M.first, M.first + K + 1):
        blk = M.block(n)
        if blk.support_size != blk.d:
            raise PreconditionError(f"block {n} has zero-weight points; supports must be the intervals")
        views.append(_BlockView(blk))
    traces = []
    pieces = []
    l_cur = 0
    for idx in range(K):
        n = M.first + idx
        cur, nxt = views[idx], views[idx + 1]
        r_size, l_next, branch = _choose_boundaries(cur, nxt, l_cur, n)
        hR, hL = cur.h_right(r_size), nxt.h_left(l_next)
        r = hL // cur.d - 1
        if r < 0:
            raise SynthesisError(f"h(max L_{n + 1}) = {hL} is below d_{n} = {cur.d}", block=n)
        gp = []
        if l_cur:
            gp.append((cur.lo, cur.lo + l_cur, cur.h_left(l_cur)))
        mid_lo, mid_hi = cur.lo + l_cur, cur.hi - r_size
        for (a, b, _), (_, _, _, hf) in zip(cur.blk.pieces, cur.info):
            a, b = max(a, mid_lo), min(b, mid_hi)
            if a < b:
                gp.append((a, b, hf))
        gp.append((mid_hi, cur.hi, (r + 1) * cur.d))
        traces.append(BlockTrace(
            n=n, domain=cur.blk.domain, d=cur.d,
            buckets=[(a, b, w, s, k, hx, hf) for (a, b, w), (s, k, hx, hf) in zip(cur.blk.pieces, cur.info)],
            L=(cur.lo, cur.lo + l_cur) if idx else None, R=(mid_hi, cur.hi), branch=branch,
            h_min_R=hR, h_max_L_next=hL, r=r, g_pieces=gp,
        ))
        for a, b, v in gp:
            if pieces and pieces[-1][2] == v and pieces[-1][1] == a:
                pieces[-1] = (pieces[-1][0], b, v)
            else:
                pieces.append((a, b, v))
        l_cur = l_next
    for (_, _, u), (a, _, v) in zip(pieces, pieces[1:]):
        if v < u:
            raise SynthesisError(f"synthesized weight decreases at {a}", block=M.block_index_at(a))
    return PiecewiseWeight(pieces), WeightSynthesisTrace(traces)


def check_trace(trace: WeightSynthesisTrace, M: MeasureSequence):
    """Re-verify boundary conditions (a)-(d); returns a list of failure strings."""
    fails = []
    half = Fraction(1, 2)
    for i, bt in enumerate(trace.blocks):
        lo, hi = bt.domain
        rlo, rhi = bt.R
        if not (lo <= rlo < rhi == hi):
            fails.append(f"(a) block {bt.n}: R is not a nonempty final segment")
        if 2 * (rhi - rlo) > bt.d:
            fails.append(f"(c) block {bt.n}: |R| > d/2")
        if bt.L is not None:
            llo, lhi = bt.L
            if not (llo == lo < lhi <= hi):
                fails.append(f"(b) block {bt.n}: L is not a nonempty initial segment")
            if lhi > rlo:
                fails.append(f"(d) block {bt.n}: R meets L")
            blk = M.block(bt.n)
            body = Interval(llo, lhi - 1)
            if blk.mass(body) >= half:
                fails.append(f"(c) block {bt.n}: mass of L minus its max is >= 1/2")
    return fails


# -- witness scan -----------------------------------------------------------------


@dataclass(frozen=True)
class WitnessScan:
    delta: Fraction
    witnesses: tuple  # (block n, point l, value)
    per_block: tuple  # (block n, best l, best value)


def lem3_witness_scan(M: MeasureSequence, g: WeightFunction, B: OmegaSubset, horizon: int,
                      max_runs=100_000):
    """Largest delta with ``|B ∩ D_n ∩ l| / g(l) >= delta`` at three or more blocks.

    Candidate points l are the ends of B's runs inside each block and the
    block's last point.  Returns None when fewer than three blocks score.
    """
    per_block = []
    n = M.first
    while M.stop is None or n < M.stop:
        blk = M.block(n)
        lo, hi = blk.domain
        if lo > horizon:
            break
        top = min(hi, horizon + 1)
        best, best_l = Fraction(0), None
        count = 0
        runs = 0
        for a, b in B.runs(lo, top):
            runs += 1
            if runs > max_runs:
                break
            count_to = count + (b - a)
            l = min(b, top - 1)
            c = count + (l - a) if l < b else count_to
            if l > lo:
                v = Fraction(c, g(l))
                if v > best:
                    best, best_l = v, l
            count = count_to
        if best > 0:
            per_block.append((n, best_l, best))
        n += 1
    if len(per_block) < 3:
        return None
    delta = sorted((v for _, _, v in per_block), reverse=True)[2]
    wit = tuple(x for x in per_block if x[2] >= delta)
    return WitnessScan(delta, wit, tuple(per_block))
