"""Weight functions, partial densities and finite-horizon verdicts.

A weight ``g`` is a nondecreasing map from omega to the positive integers.
Membership in the class H (``g -> oo`` and ``n/g(n)`` not tending to 0)
cannot be read off an evaluator, so it travels as an optional
:class:`HCertificate` that is checked pointwise.
"""

from __future__ import annotations

import enum
import warnings
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import mpmath

from .errors import MissingCertificateWarning, ValidationError
from .sets import FiniteSet, OmegaSubset

__all__ = [
    "WeightFunction",
    "AffineWeight",
    "LogFloorWeight",
    "RootFloorWeight",
    "PlateauWeight",
    "TableWeight",
    "PiecewiseWeight",
    "ScaledWeight",
    "HCertificate",
    "BaseSequence",
    "eval_weight",
    "partial_density",
    "ratio_profile",
    "density_profile",
    "verdict",
    "classify",
    "DensityProfile",
    "Verdict",
    "Trend",
    "ModulusFunction",
    "IdentityModulus",
    "LogModulus",
    "PowerModulus",
    "Tagged",
    "modulus_density",
    "check_nondecreasing",
    "require_certificate",
    "DEFAULT_TREND_THRESHOLD",
    "final_window",
    "iroot",
    "ilog",
]

DEFAULT_TREND_THRESHOLD = Fraction(1, 64)


def iroot(x: int, k: int) -> int:
    """Largest r with r**k <= x."""
    if x < 0 or k < 1:
        raise ValueError("iroot needs x >= 0, k >= 1")
    if k == 1 or x < 2:
        return x
    if k == 2:
        return isqrt(x)
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def ilog(x: int, base: int) -> int:
    """floor(log_base(x)) for x >= 1."""
    if x < 1:
        raise ValueError("ilog needs x >= 1")
    if base == 2:
        return x.bit_length() - 1
    k, p = 0, base
    while p <= x:
        p *= base
        k += 1
    return k


# -- weight functions ---------------------------------------------------------


@dataclass(frozen=True)
class HCertificate:
    """Evidence that ``n/g(n)`` does not tend to 0.

    ``witnesses(j)`` must be strictly increasing with
    ``witnesses(j) / g(witnesses(j)) >= constant``.
    """

    constant: Fraction
    witnesses: object

    def point(self, j):
        w = self.witnesses
        return int(w[j] if isinstance(w, (list, tuple)) else w(j))

    def validate(self, g, count=32):
        prev = None
        n_pts = min(count, len(self.witnesses)) if isinstance(self.witnesses, (list, tuple)) else count
        for j in range(n_pts):
            n = self.point(j)
            if prev is not None and n <= prev:
                raise ValidationError(f"certificate witnesses not increasing at j={j}")
            if Fraction(n, g(n)) < self.constant:
                raise ValidationError(f"certificate fails at n={n}: {n}/{g(n)} < {self.constant}")
            prev = n
        return True


class WeightFunction:
    """Nondecreasing ``omega -> {1, 2, ...}``; subclasses define ``_eval``."""

    descriptor = None
    h_certificate = None

    def _eval(self, n):
        raise NotImplementedError

    def __call__(self, n: int) -> int:
        if n < 0:
            raise ValidationError("weights are defined on naturals")
        return self._eval(n)

    def describe(self):
        if self.descriptor is None:
            raise ValidationError(f"{type(self).__name__} has no JSON descriptor")
        return self.descriptor

    def with_certificate(self, cert):
        self.h_certificate = cert
        return self


def eval_weight(g: WeightFunction, n: int) -> int:
    return g(n)


class AffineWeight(WeightFunction):
    """``floor((a*n + b) / c) + 1``."""

    def __init__(self, a=1, b=0, c=1):
        self.a, self.b, self.c = int(a), int(b), int(c)
        if self.a < 0 or self.b < 0 or self.c < 1:
            raise ValidationError("affine weight needs a >= 0, b >= 0, c >= 1")
        self.descriptor = {"kind": "affine", "a": str(self.a), "b": str(self.b), "c": str(self.c)}
        if self.a > 0:
            # n/g(n) -> c/a
            self.h_certificate = HCertificate(Fraction(self.c, 2 * self.a), lambda j: (self.b + self.c) * 2 ** (j + 2))

    def _eval(self, n):
        return (self.a * n + self.b) // self.c + 1


class LogFloorWeight(WeightFunction):
    """``floor(log_base(n + shift)) + 1``, with the log iterated ``depth`` times."""

    def __init__(self, base=2, shift=2, depth=1):
        self.base, self.shift, self.depth = int(base), int(shift), int(depth)
        if self.base < 2 or self.shift < 1 or self.depth < 1:
            raise ValidationError("log weight needs base >= 2, shift >= 1, depth >= 1")
        self.descriptor = {"kind": "log_floor", "base": str(self.base), "shift": str(self.shift),
                           "depth": str(self.depth)}

    def _eval(self, n):
        x = n + self.shift
        for _ in range(self.depth):
            x = ilog(max(x, 1), self.base)
        return x + 1


class RootFloorWeight(WeightFunction):
    """``floor(n ** (p/q)) + 1`` computed with integer roots."""

    def __init__(self, p=1, q=2):
        self.p, self.q = int(p), int(q)
        if not 0 < self.p <= self.q:
            raise ValidationError("root weight needs 0 < p <= q")
        self.descriptor = {"kind": "root_floor", "p": str(self.p), "q": str(self.q)}

    def _eval(self, n):
        return iroot(n ** self.p, self.q) + 1


class BaseSequence:
    """Increasing integer sequence ``n_i`` with ``n_{i+1} > i * n_i``."""

    def __init__(self, name="factorial_succ", values=None):
        self.name = name
        if name == "factorial_succ":
            self._fn = lambda i: _fact(i + 1)
        elif name == "explicit":
            vals = [int(v) for v in values]
            self._fn = vals.__getitem__
            self._values = vals
        else:
            raise ValidationError(f"unknown base sequence {name!r}")
        self.validate(min(40, len(values) - 1) if values is not None else 40)

    def __call__(self, i):
        return self._fn(i)

    def validate(self, upto):
        for i in range(upto):
            if not self(i + 1) > i * self(i):
                raise ValidationError(f"base sequence violates n_(i+1) > i*n_i at i={i}")
        return True

    def describe(self):
        d = {"name": self.name}
        if self.name == "explicit":
            d["values"] = [str(v) for v in self._values]
        return d


@lru_cache(maxsize=None)
def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


class PlateauWeight(WeightFunction):
    """``f_L``: equal to ``l*n_l`` on ``(n_l, l*n_l]`` for l in L, else n.

    At ``n = 0`` the value is 1 so that the weight stays positive.
    """

    def __init__(self, L, base=None):
        if not isinstance(L, OmegaSubset):
            L = FiniteSet(L)
        self.L = L
        self.base = base or BaseSequence()
        self.descriptor = None
        try:
            self.descriptor = {"kind": "plateau_fL", "base": self.base.describe(), "L": L.describe()}
        except ValidationError:
            pass
        self.h_certificate = HCertificate(Fraction(1), lambda j: j + 1)

    def _eval(self, n):
        if n == 0:
            return 1
        # only l with n_l < n can own a plateau containing n
        top = 0
        while self.base(top) < n:
            top += 1
        for l in self.L.elements(0, top):
            nl = self.base(l)
            if nl < n <= l * nl:
                return l * nl
        return n

    def plateaus(self, upto_index):
        """``(n_l, l*n_l]`` as half-open ``[n_l + 1, l*n_l + 1)`` for l in L below the index."""
        out = []
        for l in self.L.elements(0, upto_index):
            nl = self.base(l)
            if l * nl > nl:
                out.append((nl + 1, l * nl + 1, l * nl))
        return out


class TableWeight(WeightFunction):
    """Explicit values on a prefix followed by another weight."""

    def __init__(self, prefix, tail):
        self.prefix = tuple(int(v) for v in prefix)
        self.tail = tail
        self.descriptor = None
        try:
            self.descriptor = {"kind": "table", "prefix": [str(v) for v in self.prefix], "tail": tail.describe()}
        except ValidationError:
            pass

    def _eval(self, n):
        if n < len(self.prefix):
            return self.prefix[n]
        return self.tail(n)


class PiecewiseWeight(WeightFunction):
    """Constant values on consecutive intervals ``[lo, hi)``.

    Positions below the first piece take its value; positions at or past the
    last piece fall through to ``tail`` or raise.
    """

    def __init__(self, pieces, tail=None):
        ps = [(int(a), int(b), int(v)) for a, b, v in pieces]
        if not ps:
            raise ValidationError("piecewise weight needs at least one piece")
        for (a, b, _), (c, _, _) in zip(ps, ps[1:]):
            if b != c:
                raise ValidationError("pieces must be consecutive")
        self.pieces = tuple(ps)
        self._starts = [a for a, _, _ in ps]
        self.tail = tail
        self.end = ps[-1][1]
        self.descriptor = {"kind": "synthesized", "pieces": [[str(a), str(b), str(v)] for a, b, v in ps]}
        if tail is not None:
            self.descriptor["tail"] = tail.describe()

    def _eval(self, n):
        if n >= self.end:
            if self.tail is None:
                raise ValidationError(f"synthesized weight is only defined below {self.end}")
            return self.tail(n)
        k = bisect_right(self._starts, n) - 1
        return self.pieces[max(k, 0)][2]


class ScaledWeight(WeightFunction):
    def __init__(self, inner, factor):
        self.inner = inner
        self.factor = int(factor)
        if self.factor < 1:
            raise ValidationError("scale factor must be >= 1")
        self.descriptor = None
        try:
            self.descriptor = {"kind": "scaled", "factor": str(self.factor), "of": inner.describe()}
        except ValidationError:
            pass
        if inner.h_certificate is not None:
            c = inner.h_certificate
            self.h_certificate = HCertificate(c.constant / self.factor, c.witnesses)

    def _eval(self, n):
        return self.factor * self.inner(n)


def check_nondecreasing(g: WeightFunction, upto: int) -> int | None:
    """First n < upto with ``g(n+1) < g(n)`` or ``g(n) < 1``; None when clean."""
    prev = None
    for n in range(upto + 1):
        v = g(n)
        if v < 1:
            return n
        if prev is not None and v < prev:
            return n - 1
        prev = v
    return None


def require_certificate(g: WeightFunction, what: str):
    if g.h_certificate is None:
        warnings.warn(f"{what}: weight has no H-membership certificate; results assume g is in H",
                      MissingCertificateWarning, stacklevel=3)
    else:
        g.h_certificate.validate(g)


# -- profiles and verdicts ----------------------------------------------------


class Trend(str, enum.Enum):
    TREND_ZERO = "TrendZero"
    WITNESS_ABOVE_DELTA = "WitnessAboveDelta"
    INCONCLUSIVE = "Inconclusive"


def final_window(length: int) -> int:
    """Size of the trailing window: the last quarter of the checkpoints, at least one."""
    return max(1, -(-length // 4))


@dataclass(frozen=True)
class DensityProfile:
    checkpoints: tuple
    values: tuple

    def __post_init__(self):
        if len(self.checkpoints) != len(self.values):
            raise ValidationError("checkpoints and values differ in length")
        if not self.checkpoints:
            raise ValidationError("empty profile")

    @property
    def maximum(self):
        return max(self.values)

    @property
    def window_max(self):
        return max(self.values[-final_window(len(self.values)):])

    @property
    def final(self):
        return self.values[-1]

    def summary(self):
        return {"max": self.maximum, "window_max": self.window_max, "final": self.final}

    def tail(self):
        w = final_window(len(self.values))
        return list(zip(self.checkpoints[-w:], self.values[-w:]))


@dataclass(frozen=True)
class Verdict:
    classification: Trend
    evidence: DensityProfile
    delta: Fraction | None = None
    points: tuple = field(default_factory=tuple)
    threshold: Fraction = DEFAULT_TREND_THRESHOLD

    def __post_init__(self):
        if self.classification is Trend.WITNESS_ABOVE_DELTA:
            lookup = dict(zip(self.evidence.checkpoints, self.evidence.values))
            if not self.points or any(lookup[n] < self.delta for n in self.points):
                raise ValidationError("witness points must attain delta in the evidence")


def classify(profile: DensityProfile, delta, threshold=DEFAULT_TREND_THRESHOLD) -> Verdict:
    """WitnessAboveDelta if a trailing value reaches delta, TrendZero if the
    trailing window stays at or below ``threshold``, else Inconclusive."""
    delta = Fraction(delta)
    if delta <= 0:
        raise ValidationError("delta must be positive")
    tail = profile.tail()
    hits = tuple(n for n, v in tail if v >= delta)
    if hits:
        return Verdict(Trend.WITNESS_ABOVE_DELTA, profile, delta, hits, threshold)
    if max(v for _, v in tail) <= threshold:
        return Verdict(Trend.TREND_ZERO, profile, delta, (), threshold)
    return Verdict(Trend.INCONCLUSIVE, profile, delta, (), threshold)


def _check_checkpoints(checkpoints, minimum=0):
    cps = tuple(int(c) for c in checkpoints)
    if not cps:
        raise ValidationError("checkpoints must be nonempty")
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise ValidationError("checkpoints must be strictly increasing")
    if cps[0] < minimum:
        raise ValidationError(f"checkpoints must be >= {minimum}")
    return cps


def partial_density(A: OmegaSubset, g: WeightFunction, n: int) -> Fraction:
    """``|A ∩ n| / g(n)`` exactly."""
    if n < 1:
        raise ValidationError("partial density needs n >= 1")
    return Fraction(A.prefix_count(n), g(n))


def ratio_profile(g: WeightFunction, checkpoints) -> DensityProfile:
    cps = _check_checkpoints(checkpoints)
    return DensityProfile(cps, tuple(Fraction(n, g(n)) for n in cps))


def density_profile(A: OmegaSubset, g: WeightFunction, checkpoints) -> DensityProfile:
    cps = _check_checkpoints(checkpoints, minimum=1)
    return DensityProfile(cps, tuple(partial_density(A, g, n) for n in cps))


def verdict(A, g, checkpoints, delta, threshold=DEFAULT_TREND_THRESHOLD) -> Verdict:
    return classify(density_profile(A, g, checkpoints), delta, threshold)


# -- modulus functions --------------------------------------------------------

PRECISION_BITS = 64


@dataclass(frozen=True)
class Tagged:
    """A real known to lie in ``[lo, hi]``; exact when the bounds coincide."""

    lo: Fraction
    hi: Fraction
    precision_bits: int | None = None

    @property
    def exact(self):
        return self.lo == self.hi

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def compare(self, x) -> int | None:
        """Sign of ``self - x``, or None when x falls inside the tag."""
        x = Fraction(x)
        if self.lo > x:
            return 1
        if self.hi < x:
            return -1
        if self.exact:
            return 0
        return None

    def __truediv__(self, other):
        if other.lo <= 0:
            raise ZeroDivisionError("divisor interval touches 0")
        bits = [b for b in (self.precision_bits, other.precision_bits) if b is not None]
        return Tagged(self.lo / other.hi, self.hi / other.lo, min(bits) if bits else None)


class ModulusFunction:
    descriptor = None

    def value(self, x: int) -> Tagged:
        raise NotImplementedError

    def __call__(self, x):
        return self.value(x)

    def describe(self):
        return self.descriptor


class IdentityModulus(ModulusFunction):
    descriptor = {"kind": "identity"}

    def value(self, x):
        v = Fraction(x)
        return Tagged(v, v)


class LogModulus(ModulusFunction):
    """``log(x + 1)`` enclosed by dyadic bounds of ``PRECISION_BITS`` fractional bits."""

    descriptor = {"kind": "log1p"}

    def __init__(self, bits=PRECISION_BITS):
        self.bits = int(bits)
        self.descriptor = {"kind": "log1p", "bits": str(self.bits)}

    def value(self, x):
        if x == 0:
            return Tagged(Fraction(0), Fraction(0), self.bits)
        scale = 1 << self.bits
        with mpmath.workprec(2 * self.bits + 64):
            v = mpmath.log(mpmath.mpf(x) + 1) * scale
            lo = int(mpmath.floor(v)) - 1
            hi = int(mpmath.ceil(v)) + 1
        return Tagged(Fraction(max(lo, 0), scale), Fraction(hi, scale), self.bits)


class PowerModulus(ModulusFunction):
    """``x ** (p/q)`` for ``0 < p/q <= 1``; integer-root floor, tagged unless exact."""

    def __init__(self, p=1, q=2):
        self.p, self.q = int(p), int(q)
        if not 0 < self.p <= self.q:
            raise ValidationError("power modulus needs 0 < p/q <= 1")
        self.descriptor = {"kind": "power", "p": str(self.p), "q": str(self.q)}

    def value(self, x):
        y = x ** self.p
        r = iroot(y, self.q)
        if r ** self.q == y:
            return Tagged(Fraction(r), Fraction(r))
        return Tagged(Fraction(r), Fraction(r + 1))


def modulus_density(A: OmegaSubset, g: WeightFunction, f: ModulusFunction, n: int) -> Tagged:
    """``f(|A ∩ n|) / f(g(n))`` with its precision tag."""
    if n < 1:
        raise ValidationError("modulus density needs n >= 1")
    return f(A.prefix_count(n)) / f(g(n))
