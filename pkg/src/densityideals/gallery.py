"""Named example objects: measure sequences, weights and the witness sets
that go with them.

Each generator is pure and index-addressable; block n requested twice is
the same object.  Witness sets and sequences carry catalog descriptors so
they can be emitted as JSON and rebuilt.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm

from .errors import ValidationError
from .indexmaps import IDENTITY, IndexMap, swap_blocks
from .measures import MeasureBlock, MeasureSequence, catalog_measures, register_measures
from .sets import BlockFamily, OmegaSubset, _fact, catalog_blocks, register_blocks
from .weights import BaseSequence, PlateauWeight

__all__ = [
    "eu_not_ii",
    "almost_disjoint_family",
    "branch_set",
    "antichain_n",
    "antichain_eu_not_simple",
    "antichain_eu_simple",
    "ii_not_aud",
    "ii_not_aud_k",
    "ii_not_aud_size",
    "aud_not_ii",
    "iso_pair",
    "iso_swap",
    "iso_witnesses",
    "common_prefix_bound",
    "perm_breaks_ii",
    "GALLERY",
]


# -- eu_not_ii ---------------------------------------------------------------------


@register_measures("eu_not_ii")
def _eu_not_ii_measures():
    """Uniform ``1/k!`` on ``(2k!, 3k!]`` for ``k >= 1``."""
    return MeasureSequence(lambda k: MeasureBlock.uniform(2 * _fact(k) + 1, 3 * _fact(k) + 1),
                           first=1, probability=True, nonincreasing=True, name="eu_not_ii")


def eu_not_ii():
    """``(M, B, C)`` with ``C = ⋃(2k!, 3k!]`` and ``B = ⋃(k!, 2k!]``."""
    M = catalog_measures("eu_not_ii")
    return M, catalog_blocks("factorial_light_blocks"), catalog_blocks("factorial_eu_blocks")


# -- almost disjoint family ------------------------------------------------------------


def _bits(s: Fraction, k: int) -> int:
    """The k-th binary digit (k >= 1) of s in [0, 1), terminating expansion."""
    return (s.numerator * 2 ** k // s.denominator) % 2


@register_blocks("branch")
def branch_set(num=1, den=3):
    """Codes of the nonempty prefixes of the binary expansion of ``num/den``.

    A prefix ``sigma`` has code ``int('1' + sigma, 2) - 1``.  Distinct
    parameters share only the codes of their common prefix.
    """
    s = Fraction(int(num), int(den))
    if not 0 <= s < 1:
        raise ValidationError("branch parameter must lie in [0, 1)")

    @lru_cache(maxsize=None)
    def code(j):
        # prefix of length j + 1
        c = 1
        for k in range(1, j + 2):
            c = 2 * c + _bits(s, k)
        return c - 1

    return BlockFamily(lambda j: (code(j), code(j) + 1), name=f"branch({s})")


def almost_disjoint_family(count: int, params=None):
    """``count`` branch sets; default parameters ``j/(count+1)``."""
    if count < 2:
        raise ValidationError("count must be >= 2")
    ps = [Fraction(p) for p in params] if params else [Fraction(j, count + 1) for j in range(1, count + 1)]
    if len(ps) != count or len(set(ps)) != count:
        raise ValidationError("need count distinct parameters")
    return [catalog_blocks("branch", num=p.numerator, den=p.denominator) for p in ps]


def common_prefix_bound(s: Fraction, t: Fraction, limit=4096):
    """Length of the common binary prefix of two distinct parameters."""
    for k in range(1, limit + 1):
        if _bits(s, k) != _bits(t, k):
            return k - 1
    raise ValidationError("parameters agree on too long a prefix")


# -- first antichain: EU, not simple density -----------------------------------------


@lru_cache(maxsize=None)
def antichain_n(i: int) -> int:
    """``n_0 = 1``, ``n_{i+1} = n_i + i! + (i+1)!``."""
    if i == 0:
        return 1
    return antichain_n(i - 1) + _fact(i - 1) + _fact(i)


def _antichain_block(i):
    return MeasureBlock.uniform(antichain_n(i), antichain_n(i) + _fact(i))


@register_measures("antichain_blocks")
def _antichain_all():
    """Uniform ``1/i!`` on ``D_i = [n_i, n_i + i!)`` for every i."""
    return MeasureSequence(_antichain_block, probability=True, nonincreasing=True, name="antichain")


def _member_index(M: OmegaSubset):
    return lru_cache(maxsize=None)(lambda j: M.nth(j))


def _restricted(M: OmegaSubset):
    nth = _member_index(M)
    return MeasureSequence(lambda j: _antichain_block(nth(j)), probability=True, nonincreasing=True,
                           name="antichain_member")


def _positive_members(M: OmegaSubset):
    nth = _member_index(M)
    skip = 1 if M.contains(0) else 0
    return lambda j: nth(j + skip)


@register_blocks("antichain_C")
def _antichain_C(M=None):
    m = _positive_members(M)
    return BlockFamily(lambda j: (antichain_n(m(j)), antichain_n(m(j)) + _fact(m(j))), name="antichain C")


@register_blocks("antichain_B")
def _antichain_B(M=None):
    """The ``m!`` positions just before each ``n_m``."""
    m = _positive_members(M)
    return BlockFamily(lambda j: (antichain_n(m(j)) - _fact(m(j)), antichain_n(m(j))), name="antichain B")


def antichain_eu_not_simple(family, count=None):
    """For each M in the family: ``(measures indexed by M, (B, C))``."""
    fam = list(family)[: count if count is not None else None]
    out = []
    for M in fam:
        seq = _restricted(M)
        B, C = _antichain_B(M), _antichain_C(M)
        try:
            d = M.describe()
            seq.descriptor = {"kind": "antichain_member", "M": d}
            B.descriptor = {"kind": "blocks", "generator": "antichain_B", "params": {"M": d}}
            C.descriptor = {"kind": "blocks", "generator": "antichain_C", "params": {"M": d}}
        except ValidationError:
            pass
        out.append((seq, (B, C)))
    return out


# -- second antichain: EU simple density ideals ------------------------------------------


def antichain_eu_simple(family, base="factorial_succ", values=None):
    """Plateau weights ``f_L`` for each L in the family over a validated base sequence."""
    seq = BaseSequence(base, values)
    return [PlateauWeight(L, seq) for L in family]


# -- ii_not_aud ------------------------------------------------------------------------------


@lru_cache(maxsize=None)
def ii_not_aud_k(n: int) -> int:
    """Least k with ``(1/n) sum_{i=1}^k 1/(i+1) >= 1/2``."""
    if n < 1:
        raise ValidationError("blocks start at n = 1")
    s, k = Fraction(0), 0
    while 2 * s < n:
        k += 1
        s += Fraction(1, k + 1)
    return k


@lru_cache(maxsize=None)
def ii_not_aud_size(n: int) -> int:
    """Least multiple of ``lcm{n k (k+1) : k <= k_n}`` that is at least
    ``d_{n-1} n k_n (k_n + 1)``; ``d_1 = 2``."""
    k_n = ii_not_aud_k(n)
    step = 1
    for k in range(1, k_n + 1):
        step = lcm(step, n * k * (k + 1))
    need = ii_not_aud_size(n - 1) * n * k_n * (k_n + 1) if n > 1 else 1
    return -(-need // step) * step


@lru_cache(maxsize=None)
def _ii_start(n: int) -> int:
    return 0 if n == 1 else _ii_start(n - 1) + ii_not_aud_size(n - 1)


def _ii_layout(n):
    """``[(lo, hi, k)]`` for L_{k_n}, ..., L_1 then L_0."""
    d, lo = ii_not_aud_size(n), _ii_start(n)
    out = []
    for k in range(ii_not_aud_k(n), 0, -1):
        size = d // (n * k * (k + 1))
        out.append((lo, lo + size, k))
        lo += size
    out.append((lo, _ii_start(n) + d, 0))
    return out


def _ii_block(n):
    d = ii_not_aud_size(n)
    lay = _ii_layout(n)
    pieces = [(a, b, Fraction(k, d)) for a, b, k in lay[:-1]]
    used = sum((b - a) * w for a, b, w in pieces)
    a, b, _ = lay[-1]
    if b > a:
        pieces.append((a, b, (1 - used) / (b - a)))
    return MeasureBlock(pieces, (_ii_start(n), _ii_start(n) + d))


@register_measures("ii_not_aud")
def _ii_not_aud_measures():
    return MeasureSequence(_ii_block, first=1, consecutive_intervals=True, covers_omega=True,
                           probability=True, nonincreasing=True, name="ii_not_aud")


@register_blocks("ii_not_aud_B")
def _ii_not_aud_B():
    """``⋃_n ⋃_{k >= 1} L^n_k``: an initial segment of each block."""
    return BlockFamily(lambda n: (_ii_start(n), _ii_layout(n)[-1][0]), start=1, name="ii_not_aud B")


def ii_not_aud():
    return catalog_measures("ii_not_aud"), catalog_blocks("ii_not_aud_B")


# -- aud_not_ii ---------------------------------------------------------------------------------


def _dbl(n):
    return 2 ** (n + 1) - 2, 2 ** (n + 2) - 2


@register_measures("aud_not_ii")
def _aud_not_ii_measures():
    """``|D_n| = 2^(n+1)`` with atoms ``1/2^n`` on the last ``2^n`` points."""

    def gen(n):
        lo, hi = _dbl(n)
        return MeasureBlock([(lo + 2 ** n, hi, Fraction(1, 2 ** n))], (lo, hi))

    return MeasureSequence(gen, consecutive_intervals=True, covers_omega=True, probability=True,
                           name="aud_not_ii")


@register_blocks("doubling_halves")
def _doubling_halves(half="light"):
    """First (light) or second (heavy) half of each ``[2^(n+1) - 2, 2^(n+2) - 2)``."""
    if half not in ("light", "heavy"):
        raise ValidationError("half must be light or heavy")
    off = 0 if half == "light" else 1
    return BlockFamily(lambda n: (_dbl(n)[0] + off * 2 ** n, _dbl(n)[0] + (off + 1) * 2 ** n), name=half)


def aud_not_ii():
    """``(M, (B, C))`` with B the light halves and C the heavy halves."""
    return (catalog_measures("aud_not_ii"),
            (catalog_blocks("doubling_halves", half="light"), catalog_blocks("doubling_halves", half="heavy")))


# -- iso_pair -----------------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _iso_start(n):
    return 0 if n == 0 else _iso_start(n - 1) + 2 * _fact(n - 1)


@register_measures("iso_mu")
def _iso_mu():
    return MeasureSequence(
        lambda n: MeasureBlock([(_iso_start(n), _iso_start(n) + _fact(n), Fraction(1, _fact(n)))],
                               (_iso_start(n), _iso_start(n) + 2 * _fact(n))),
        consecutive_intervals=True, covers_omega=True, probability=True, name="iso_mu")


@register_measures("iso_nu")
def _iso_nu():
    return MeasureSequence(
        lambda n: MeasureBlock([(_iso_start(n) + _fact(n), _iso_start(n) + 2 * _fact(n), Fraction(1, _fact(n)))],
                               (_iso_start(n), _iso_start(n) + 2 * _fact(n))),
        consecutive_intervals=True, covers_omega=True, probability=True, name="iso_nu")


@register_blocks("iso_halves")
def _iso_halves(half="first"):
    if half not in ("first", "second"):
        raise ValidationError("half must be first or second")
    off = 0 if half == "first" else 1
    return BlockFamily(lambda n: (_iso_start(n) + off * _fact(n), _iso_start(n) + (off + 1) * _fact(n)), name=half)


def iso_swap():
    """Swap the two halves of every ``D_n``; carries mu's supports onto nu's."""
    return swap_blocks(lambda n: (_iso_start(n), _iso_start(n) + _fact(n), _fact(n)),
                       descriptor={"kind": "iso_swap"})


def iso_pair():
    """``(mu, nu, phi)`` plus the canonical pair via :func:`iso_witnesses`."""
    return catalog_measures("iso_mu"), catalog_measures("iso_nu"), iso_swap()


def iso_witnesses():
    """``(B, C)``: the first halves and the second halves."""
    return catalog_blocks("iso_halves", half="first"), catalog_blocks("iso_halves", half="second")


# -- perm_breaks_ii ------------------------------------------------------------------------------


def _group_of(n):
    """k with ``k(k-1)/2 < n <= k(k+1)/2``."""
    k = 1
    while k * (k + 1) // 2 < n:
        k += 1
    return k


@lru_cache(maxsize=None)
def _perm_start(n):
    return 0 if n == 1 else _perm_start(n - 1) + _group_of(n - 1)


@register_measures("perm_blocks")
def _perm_blocks():
    """Block n >= 1 uniform on k points, k the group of n."""
    return MeasureSequence(lambda n: MeasureBlock.uniform(_perm_start(n), _perm_start(n) + _group_of(n)),
                           first=1, consecutive_intervals=True, covers_omega=True, probability=True,
                           nonincreasing=True, name="perm_blocks")


def _flat_family(group_fn, name):
    """BlockFamily enumerating the concatenated, per-group sorted interval lists."""
    flat, groups = [], [0]

    def fn(j):
        while len(flat) <= j:
            flat.extend(sorted(group_fn(groups[0] + 1)))
            groups[0] += 1
        return flat[j]

    return BlockFamily(fn, name=name)


def perm_breaks_ii(phi: IndexMap = IDENTITY):
    """``(M, B, C)``: B the minima ``b_n`` of ``phi[D_n]``, C the images of the
    block with the largest ``b_n`` in each size group."""

    def image(n):
        lo = _perm_start(n)
        return sorted(phi.image_runs(lo, lo + _group_of(n)))

    def b(n):
        return image(n)[0][0]

    def B_group(k):
        return [(b(n), b(n) + 1) for n in range(k * (k - 1) // 2 + 1, k * (k + 1) // 2 + 1)]

    def C_group(k):
        ns = range(k * (k - 1) // 2 + 1, k * (k + 1) // 2 + 1)
        top = max(ns, key=lambda n: (b(n), n))
        return image(top)

    M = catalog_measures("perm_blocks")
    B, C = _flat_family(B_group, "perm B"), _flat_family(C_group, "perm C")
    if phi is IDENTITY:
        B.descriptor = {"kind": "blocks", "generator": "perm_minima", "params": {}}
        C.descriptor = {"kind": "blocks", "generator": "perm_last_blocks", "params": {}}
    return M, B, C


@register_blocks("perm_minima")
def _perm_minima():
    return perm_breaks_ii()[1]


@register_blocks("perm_last_blocks")
def _perm_last():
    return perm_breaks_ii()[2]


# -- registry for the command line ----------------------------------------------------------------


def _emit_eu_not_ii(params):
    M, B, C = eu_not_ii()
    return {"measures": M.describe(), "witnesses": {"B": B.describe(), "C": C.describe()}}


def _emit_aud_not_ii(params):
    M, (B, C) = aud_not_ii()
    return {"measures": M.describe(), "witnesses": {"B": B.describe(), "C": C.describe()}}


def _emit_ii_not_aud(params):
    M, B = ii_not_aud()
    return {"measures": M.describe(), "witnesses": {"B": B.describe()}}


def _emit_iso_pair(params):
    mu, nu, phi = iso_pair()
    B, C = iso_witnesses()
    return {"measures": {"mu": mu.describe(), "nu": nu.describe()}, "map": phi.describe(),
            "witnesses": {"B": B.describe(), "C": C.describe()}}


def _emit_perm_breaks_ii(params):
    M, B, C = perm_breaks_ii()
    return {"measures": M.describe(), "map": IDENTITY.describe(),
            "witnesses": {"B": B.describe(), "C": C.describe()}}


def _family_from(params):
    count = int(params.get("count", 4))
    ps = params.get("params")
    return almost_disjoint_family(count, [Fraction(p) for p in ps] if ps else None)


def _emit_almost_disjoint(params):
    return {"family": [A.describe() for A in _family_from(params)]}


def _emit_antichain_eu_not_simple(params):
    out = []
    for seq, (B, C) in antichain_eu_not_simple(_family_from(params)):
        out.append({"measures": seq.describe(), "witnesses": {"B": B.describe(), "C": C.describe()}})
    return {"members": out}


def _emit_antichain_eu_simple(params):
    base = params.get("base", "factorial_succ")
    return {"weights": [g.describe() for g in antichain_eu_simple(_family_from(params), base)]}


GALLERY = {
    "eu_not_ii": _emit_eu_not_ii,
    "almost_disjoint_family": _emit_almost_disjoint,
    "antichain_eu_not_simple": _emit_antichain_eu_not_simple,
    "antichain_eu_simple": _emit_antichain_eu_simple,
    "ii_not_aud": _emit_ii_not_aud,
    "aud_not_ii": _emit_aud_not_ii,
    "iso_pair": _emit_iso_pair,
    "perm_breaks_ii": _emit_perm_breaks_ii,
}
