from fractions import Fraction
from itertools import combinations
from math import factorial

import pytest

from densityideals import (FULL, Intersection, ValidationError, block_mass,
                           catalog_measures, dominates_prefixwise, farah_check, ratio_profile)
from densityideals.descriptors import measures_from, set_from
from densityideals.gallery import (GALLERY, almost_disjoint_family, antichain_eu_not_simple, antichain_eu_simple,
                                   antichain_n, aud_not_ii, common_prefix_bound, eu_not_ii, ii_not_aud,
                                   ii_not_aud_k, ii_not_aud_size, iso_pair, iso_witnesses, perm_breaks_ii)


def _sequences():
    fam = almost_disjoint_family(3)
    return [eu_not_ii()[0], aud_not_ii()[0], ii_not_aud()[0], *iso_pair()[:2], perm_breaks_ii()[0],
            catalog_measures("antichain_blocks"), *[s for s, _ in antichain_eu_not_simple(fam)]]


@pytest.mark.parametrize("M", _sequences(), ids=lambda M: M.name or "seq")
def test_farah_d1_d3(M):
    r = farah_check(M, 6)
    assert r.d1 == 1 and r.d3 == 1


def test_eu_not_ii_block():
    M, B, C = eu_not_ii()
    blk = M.block(3)
    assert blk.domain == (13, 19) and blk.atom(13) == Fraction(1, 6)
    assert block_mass(blk, C) == 1 and block_mass(blk, B) == 0


def test_antichain_sequence():
    assert [antichain_n(i) for i in range(6)] == [1, 3, 6, 14, 44, 188]
    D = catalog_measures("antichain_blocks")
    assert D.block(4).domain == (44, 68)
    for i in range(6):
        assert antichain_n(i + 1) - antichain_n(i) == factorial(i) + factorial(i + 1)


def test_antichain_witnesses_are_disjoint_from_blocks():
    fam = almost_disjoint_family(3)
    for seq, (B, C) in antichain_eu_not_simple(fam):
        for j in range(4):
            blk = seq.block(j)
            assert block_mass(blk, B) == 0
            assert block_mass(blk, C) in (0, 1)


def test_almost_disjoint_intersections():
    fam = almost_disjoint_family(16)
    pairs = 0
    for (i, A), (j, B) in combinations(enumerate(fam), 2):
        s, t = Fraction(i + 1, 17), Fraction(j + 1, 17)
        common = Intersection(A, B).prefix_count(2 ** 20)
        assert common <= common_prefix_bound(s, t)
        pairs += 1
    assert pairs == 120
    assert all(A.prefix_count(2 ** 20) == 19 for A in fam[:1])
    with pytest.raises(ValidationError):
        almost_disjoint_family(2, [Fraction(1, 3), Fraction(1, 3)])


def test_plateau_weights_ratio():
    for g in antichain_eu_simple(almost_disjoint_family(3)):
        assert max(ratio_profile(g, range(1, 600)).values) <= 1
        for lo, _, top in g.plateaus(8):
            assert ratio_profile(g, [top]).values[0] == 1
            assert ratio_profile(g, [lo]).values[0] < 1


def test_ii_not_aud_layout():
    assert [ii_not_aud_k(n) for n in (1, 2, 3)] == [1, 3, 6]
    assert [ii_not_aud_size(n) for n in (1, 2)] == [2, 48]
    M, B = ii_not_aud()
    assert block_mass(M.block(2), B) == Fraction(13, 24)


def test_aud_not_ii_domination():
    M, (B, C) = aud_not_ii()
    assert dominates_prefixwise(C, B, 2 ** 12).holds
    assert all(block_mass(M.block(n), B) == 0 and block_mass(M.block(n), C) == 1 for n in range(8))


def test_iso_pair():
    mu, nu, phi = iso_pair()
    B, C = iso_witnesses()
    for n in range(6):
        assert block_mass(mu.block(n), B) == 1 == block_mass(nu.block(n), C)
        lo, hi = mu.block(n).domain
        for i in range(lo, min(hi, lo + 50)):
            assert mu.block(n).atom(i) == nu.block(n).atom(phi(i))


def test_perm_breaks_ii():
    M, B, C = perm_breaks_ii()
    assert dominates_prefixwise(C, B, 25000).holds
    for n in (3, 6, 10, 15, 21):
        # the last block of each size group lies in C
        assert block_mass(M.block(n), C) == 1
    assert block_mass(M.block(2), C) == 0


def test_generators_are_pure():
    for name, emit in GALLERY.items():
        assert emit({}) == emit({})
    M, B, C = eu_not_ii()
    assert M.block(5) is M.block(5) or M.block(5).describe() == M.block(5).describe()
    emitted = GALLERY["eu_not_ii"]({})
    assert measures_from(emitted["measures"]).block(4).describe() == M.block(4).describe()
    C2 = set_from(emitted["witnesses"]["C"])
    assert C2.prefix_count(10 ** 6) == C.prefix_count(10 ** 6)


def test_full_mass_everywhere():
    for M in _sequences()[:6]:
        assert all(block_mass(M.block(n), FULL) == 1 for n in range(M.first, M.first + 4))
