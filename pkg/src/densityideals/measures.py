"""Finite-support rational measures and the statistics built on them.

A :class:`MeasureBlock` is a piecewise-constant measure: a list of disjoint
intervals ``[lo, hi)`` each carrying a positive atom weight, living inside a
declared domain interval ``D_n``.  ``d`` is the size of that domain, which
may include zero-weight points (the gallery's aud_not_ii block puts all of
its mass on the second half of ``D_n``).  A :class:`MeasureSequence` is a
lazily generated stream of blocks with increasing, disjoint domains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ._lazy import LazyIntervals
from .errors import ConsistencyError, PreconditionError, ValidationError
from .sets import OmegaSubset
from .weights import DEFAULT_TREND_THRESHOLD, DensityProfile, classify, final_window

__all__ = [
    "MeasureBlock",
    "MeasureSequence",
    "SigmaProfile",
    "StarParameters",
    "StarResult",
    "FarahReport",
    "ExhProfile",
    "block_mass",
    "exh_profile",
    "farah_check",
    "bounded_ratio_stat",
    "sigma_profile",
    "star_condition_check",
    "register_measures",
    "measure_catalog",
    "catalog_measures",
    "explicit_measures",
]


class MeasureBlock:
    """Atoms of constant weight on each piece ``(lo, hi, w)``."""

    __slots__ = ("pieces", "domain", "_mass", "_max")

    def __init__(self, pieces, domain=None):
        ps = []
        for lo, hi, w in pieces:
            lo, hi, w = int(lo), int(hi), Fraction(w)
            if hi <= lo:
                raise ValidationError(f"empty piece [{lo}, {hi})")
            if w <= 0:
                raise ValidationError("piece weights must be positive")
            if ps and lo < ps[-1][1]:
                raise ValidationError("pieces must be ordered and disjoint")
            if ps and lo == ps[-1][1] and w == ps[-1][2]:
                ps[-1] = (ps[-1][0], hi, w)
            else:
                ps.append((lo, hi, w))
        if not ps:
            raise ValidationError("a block needs at least one piece")
        if domain is None:
            domain = (ps[0][0], ps[-1][1])
        dlo, dhi = int(domain[0]), int(domain[1])
        if dlo > ps[0][0] or dhi < ps[-1][1]:
            raise ValidationError("domain must contain every piece")
        self.pieces = tuple(ps)
        self.domain = (dlo, dhi)
        self._mass = sum(((hi - lo) * w for lo, hi, w in ps), Fraction(0))
        self._max = max(w for _, _, w in ps)

    @classmethod
    def uniform(cls, lo, hi, weight=None):
        """Uniform block on ``[lo, hi)``; a probability measure unless ``weight`` is given."""
        w = Fraction(1, hi - lo) if weight is None else Fraction(weight)
        return cls([(lo, hi, w)])

    @property
    def d(self) -> int:
        return self.domain[1] - self.domain[0]

    @property
    def support_size(self) -> int:
        return sum(hi - lo for lo, hi, _ in self.pieces)

    @property
    def support_min(self):
        return self.pieces[0][0]

    @property
    def support_max(self):
        return self.pieces[-1][1] - 1

    @property
    def total_mass(self) -> Fraction:
        return self._mass

    @property
    def max_atom(self) -> Fraction:
        return self._max

    def atom(self, i) -> Fraction:
        for lo, hi, w in self.pieces:
            if lo <= i < hi:
                return w
            if i < lo:
                break
        return Fraction(0)

    def mass(self, A: OmegaSubset) -> Fraction:
        return sum((w * A.count_range(lo, hi) for lo, hi, w in self.pieces), Fraction(0))

    def is_nonincreasing(self):
        ws = [w for _, _, w in self.pieces]
        return all(a >= b for a, b in zip(ws, ws[1:]))

    def describe(self):
        out = {"pieces": [{"lo": str(lo), "hi": str(hi), "weight_num": str(w.numerator),
                           "weight_den": str(w.denominator)} for lo, hi, w in self.pieces]}
        if self.domain != (self.pieces[0][0], self.pieces[-1][1]):
            out["domain"] = [str(self.domain[0]), str(self.domain[1])]
        return out

    def __eq__(self, other):
        return isinstance(other, MeasureBlock) and self.pieces == other.pieces and self.domain == other.domain

    def __hash__(self):
        return hash((self.pieces, self.domain))

    def __repr__(self):
        return f"MeasureBlock(d={self.d}, pieces={len(self.pieces)}, mass={self._mass})"


def block_mass(mu: MeasureBlock, A: OmegaSubset) -> Fraction:
    return mu.mass(A)


class MeasureSequence:
    """Blocks ``gen(n)`` for ``n = first, first+1, ...`` (up to ``stop``, exclusive).

    Flags:
      consecutive_intervals -- each domain starts where the previous one ends
      probability           -- every block has total mass exactly 1
      covers_omega          -- additionally the first domain starts at ``origin``
                               (positions below it form a declared gap)
    """

    def __init__(self, gen, first=0, stop=None, *, consecutive_intervals=False, probability=False,
                 covers_omega=False, nonincreasing=False, doubling=False, origin=0, descriptor=None,
                 name=None):
        self._gen = gen
        self.first = int(first)
        self.stop = stop
        self.consecutive_intervals = consecutive_intervals
        self.probability = probability
        self.covers_omega = covers_omega
        self.nonincreasing = nonincreasing
        self.doubling = doubling
        self.origin = int(origin)
        self.descriptor = descriptor
        self.name = name
        self._blocks = LazyIntervals(self._make, key=lambda b: b.domain[0], start=self.first,
                                     stop=stop, check=self._check)

    def _make(self, n):
        blk = self._gen(n)
        if not isinstance(blk, MeasureBlock):
            blk = MeasureBlock(blk)
        if self.probability and blk.total_mass != 1:
            raise ValidationError(f"block {n} has mass {blk.total_mass}, expected 1")
        if self.covers_omega and n == self.first and blk.domain[0] != self.origin:
            raise ValidationError(f"first block starts at {blk.domain[0]}, expected {self.origin}")
        if self.nonincreasing and not blk.is_nonincreasing():
            raise ValidationError(f"block {n} atoms are not nonincreasing")
        return blk

    def _check(self, prev, cur, n):
        if prev.domain[1] > cur.domain[0]:
            raise ValidationError(f"block {n} overlaps block {n - 1}")
        if self.consecutive_intervals and prev.domain[1] != cur.domain[0]:
            raise ValidationError(f"block {n} does not abut block {n - 1}")
        if self.doubling and cur.d < 2 * prev.d:
            raise ValidationError(f"block {n} has {cur.d} points, less than twice {prev.d}")

    def block(self, n) -> MeasureBlock:
        try:
            return self._blocks.item(n)
        except IndexError:
            raise ValidationError(f"block {n} does not exist") from None

    def blocks(self, lo, hi):
        """Blocks with index in ``[lo, hi)`` as ``(n, block)`` pairs."""
        lo = max(lo, self.first)
        if self.stop is not None:
            hi = min(hi, self.stop)
        return [(n, self.block(n)) for n in range(lo, hi)]

    def upto(self, N):
        return self.blocks(self.first, N + 1)

    def block_index_at(self, pos):
        """Index of the block whose domain contains ``pos``, or None."""
        k = self._blocks.index_at_or_below(pos)
        if k < 0:
            return None
        n = self.first + k
        blk = self.block(n)
        return n if pos < blk.domain[1] else None

    def validate(self, N):
        """Materialize blocks up to N; generator checks raise on violation."""
        self.upto(N)
        return True

    def flags(self):
        return {"consecutive_intervals": self.consecutive_intervals, "probability": self.probability,
                "covers_omega": self.covers_omega, "nonincreasing": self.nonincreasing,
                "doubling": self.doubling}

    def describe(self):
        if self.descriptor is None:
            raise ValidationError(f"measure sequence {self.name or ''} has no JSON descriptor")
        return self.descriptor

    def __repr__(self):
        return f"MeasureSequence({self.name or self._gen!r}, first={self.first})"


# -- catalog ------------------------------------------------------------------

_MEASURE_CATALOG = {}


def register_measures(name):
    def deco(factory):
        _MEASURE_CATALOG[name] = factory
        return factory

    return deco


def measure_catalog():
    return sorted(_MEASURE_CATALOG)


def catalog_measures(name, **params) -> MeasureSequence:
    try:
        factory = _MEASURE_CATALOG[name]
    except KeyError:
        raise ValidationError(f"unknown measure sequence {name!r}") from None
    M = factory(**params)
    M.descriptor = {"kind": "catalog", "name": name, "params": {k: str(v) for k, v in params.items()}}
    return M


def explicit_measures(blocks, **flags) -> MeasureSequence:
    """Finite sequence from a list of MeasureBlocks or descriptor dicts."""
    bl = []
    for b in blocks:
        if isinstance(b, dict):
            pieces = [(int(p["lo"]), int(p["hi"]), Fraction(int(p["weight_num"]), int(p["weight_den"])))
                      for p in b["pieces"]]
            dom = b.get("domain")
            b = MeasureBlock(pieces, (int(dom[0]), int(dom[1])) if dom else None)
        bl.append(b)
    M = MeasureSequence(bl.__getitem__, 0, len(bl), name="explicit", **flags)
    M.descriptor = {"kind": "explicit", "blocks": [b.describe() for b in bl]}
    return M


@register_measures("uniform_doubling")
def _uniform_doubling():
    """Uniform probability on ``D_n = [2^(n+1) - 2, 2^(n+2) - 2)``; ``d_n = 2^(n+1)``."""
    return MeasureSequence(lambda n: MeasureBlock.uniform(2 ** (n + 1) - 2, 2 ** (n + 2) - 2),
                           consecutive_intervals=True, probability=True, covers_omega=True,
                           nonincreasing=True, doubling=True, name="uniform_doubling")


@register_measures("growing_mass")
def _growing_mass():
    """Block n >= 1 on ``[2^n, 2^(n+1))`` with atoms ``n/2^n``, so total mass n."""
    return MeasureSequence(lambda n: MeasureBlock.uniform(2 ** n, 2 ** (n + 1), Fraction(n, 2 ** n)),
                           first=1, consecutive_intervals=True, name="growing_mass")


# -- Exh profiles and Farah's conditions --------------------------------------


@dataclass(frozen=True)
class ExhProfile:
    profile: DensityProfile
    running_sup: tuple

    def verdict(self, delta, threshold=DEFAULT_TREND_THRESHOLD):
        return classify(self.profile, delta, threshold)


def exh_profile(M: MeasureSequence, A: OmegaSubset, N: int) -> ExhProfile:
    """``mu_n(A)`` for every block index up to N, with the running supremum."""
    if N < 1:
        raise ValidationError("exh_profile needs N >= 1")
    pairs = M.upto(N)
    if not pairs:
        raise ValidationError("no blocks up to N")
    vals = tuple(b.mass(A) for _, b in pairs)
    sup, run = Fraction(0), []
    for v in vals:
        sup = max(sup, v)
        run.append(sup)
    return ExhProfile(DensityProfile(tuple(n for n, _ in pairs), vals), tuple(run))


@dataclass(frozen=True)
class FarahReport:
    horizon: int
    d1: Fraction
    d1_violation: bool
    d2: DensityProfile
    d2_trend: str
    d3: Fraction
    d3_holds: bool
    masses: DensityProfile

    def as_dict(self):
        return {
            "horizon": str(self.horizon),
            "D1": _frac(self.d1), "D1_violation": self.d1_violation,
            "D2": [[str(n), *_frac(v)] for n, v in zip(self.d2.checkpoints, self.d2.values)],
            "D2_trend": self.d2_trend,
            "D3": _frac(self.d3), "D3_holds": self.d3_holds,
        }


def _frac(x):
    return [str(x.numerator), str(x.denominator)]


def farah_check(M: MeasureSequence, N: int, threshold=DEFAULT_TREND_THRESHOLD) -> FarahReport:
    """Finite-horizon statistics for the three conditions.

    D1 is flagged as violated when every mass in the final window exceeds
    twice the largest mass in the opening window (sustained growth).  D3
    holds when the final-window maximum is above ``threshold``.
    """
    if N < 2:
        raise ValidationError("farah_check needs N >= 2")
    pairs = M.upto(N)
    idx = tuple(n for n, _ in pairs)
    masses = tuple(b.total_mass for _, b in pairs)
    atoms = tuple(b.max_atom for _, b in pairs)
    w = final_window(len(masses))
    d1 = max(masses)
    d1_violation = len(masses) > w and min(masses[-w:]) > 2 * max(masses[:w])
    d2 = DensityProfile(idx, atoms)
    d2_trend = classify(d2, Fraction(1), threshold).classification.value
    d3 = max(masses[-w:])
    return FarahReport(N, d1, d1_violation, d2, d2_trend, d3, d3 > threshold, DensityProfile(idx, masses))


def bounded_ratio_stat(M: MeasureSequence, N: int) -> Fraction:
    """``max d_n * mu_n({i})`` over blocks up to N, read off the weight pieces."""
    if N < 1:
        raise ValidationError("bounded_ratio_stat needs N >= 1")
    return max(b.d * b.max_atom for _, b in M.upto(N))


# -- sigma profiles and condition (star) ---------------------------------------


@dataclass(frozen=True)
class SigmaProfile:
    n: int
    d: int
    values: dict
    counts: dict
    light: int = 0  # points of B in the support with atom < 1/d

    @property
    def maximum(self):
        return max(self.values.values(), default=Fraction(0))


def _bucket(w: Fraction, d: int) -> int:
    """k with ``k/d <= w < (k+1)/d``."""
    return (w.numerator * d) // w.denominator


def sigma_profile(M: MeasureSequence, B: OmegaSubset, n: int) -> SigmaProfile:
    blk = M.block(n)
    d = blk.d
    counts, light = {}, 0
    for lo, hi, w in blk.pieces:
        c = B.count_range(lo, hi)
        if not c:
            continue
        k = _bucket(w, d)
        if k == 0:
            light += c
        else:
            counts[k] = counts.get(k, 0) + c
    counts = dict(sorted(counts.items()))
    values = {k: Fraction(k * (k + 1) * c, d) for k, c in counts.items()}
    return SigmaProfile(n, d, values, counts, light)


@dataclass(frozen=True)
class StarParameters:
    """Level m and the block range ``(n_lo, n_hi]``."""

    m: int
    n_lo: int
    n_hi: int

    def __post_init__(self):
        if self.m < 1:
            raise ValidationError("level m must be >= 1")
        if self.n_lo >= self.n_hi:
            raise ValidationError("need n_lo < n_hi")


@dataclass(frozen=True)
class StarResult:
    holds: bool
    params: StarParameters
    first_violation: tuple | None = None  # (n, k); k = 0 marks a light point of B
    profiles: tuple = field(default_factory=tuple, repr=False)


def _star_by_counts(sp: SigmaProfile, m: int):
    if sp.light:
        return 0
    for k, c in sp.counts.items():
        # c <= d / (m k (k+1))
        if c * m * k * (k + 1) > sp.d:
            return k
    return None


def _star_by_sigma(sp: SigmaProfile, m: int):
    if sp.light:
        return 0
    bound = Fraction(1, m)
    for k, v in sp.values.items():
        if v > bound:
            return k
    return None


def star_condition_check(M: MeasureSequence, B: OmegaSubset, params: StarParameters) -> StarResult:
    """Check (star) at level m on every block in ``(n_lo, n_hi]``.

    The emptiness clause is read per block: only points of B inside the
    support of ``mu_n`` are tested against ``1/d_n``.  Bucket counts and the
    sigma maximum are computed independently and must agree.
    """
    profiles = []
    for n in range(max(params.n_lo + 1, M.first), params.n_hi + 1):
        sp = sigma_profile(M, B, n)
        profiles.append(sp)
        a, b = _star_by_counts(sp, params.m), _star_by_sigma(sp, params.m)
        if a != b:
            raise ConsistencyError(f"bucket-count and sigma routes disagree at block {n}: {a} vs {b}")
        if a is not None:
            return StarResult(False, params, (n, a), tuple(profiles))
    return StarResult(True, params, None, tuple(profiles))


def require_flags(M: MeasureSequence, what: str, *names):
    missing = [f for f in names if not getattr(M, f)]
    if missing:
        raise PreconditionError(f"{what} needs a sequence flagged {', '.join(missing)}")
