from fractions import Fraction
from math import factorial, log

import pytest
from hypothesis import given, settings, strategies as st

from densityideals import (EMPTY, FULL, AffineWeight, BaseSequence, FiniteSet, HCertificate, IdentityModulus,
                           LogFloorWeight, LogModulus, MissingCertificateWarning, Periodic, PlateauWeight,
                           PowerModulus, RootFloorWeight, ScaledWeight, TableWeight, Trend, ValidationError,
                           catalog_blocks, check_nondecreasing, classify, density_profile, eval_weight,
                           final_window, iroot, modulus_density, partial_density, ratio_profile,
                           require_certificate, verdict)
from densityideals.descriptors import weight_from

N_PLUS_1 = AffineWeight(1, 0, 1)
FL = PlateauWeight([2, 3])
EVENS = Periodic(2, [0])
EU = catalog_blocks("factorial_eu_blocks")


def test_eval_examples():
    assert eval_weight(N_PLUS_1, 7) == 8
    assert FL(25) == 72
    assert FL(13) == 13
    assert FL(0) == 1


def test_partial_density_examples():
    assert partial_density(FULL, N_PLUS_1, 10) == Fraction(10, 11)
    assert partial_density(EVENS, N_PLUS_1, 10) == Fraction(5, 11)
    assert partial_density(EMPTY, FL, 123) == 0
    with pytest.raises(ValidationError):
        partial_density(FULL, N_PLUS_1, 0)


def test_ratio_profile_examples():
    p = ratio_profile(N_PLUS_1, [1, 10, 100])
    assert p.values == (Fraction(1, 2), Fraction(10, 11), Fraction(100, 101))
    assert p.maximum < 1
    assert ratio_profile(FL, [72]).values == (1,)
    assert ratio_profile(LogFloorWeight(), [2 ** 20]).values[0] > 49000


def test_verdict_examples():
    cps = [2 ** k for k in range(1, 12)]
    v = verdict(EMPTY, N_PLUS_1, cps, Fraction(1, 2))
    assert v.classification is Trend.TREND_ZERO and set(v.evidence.values) == {0}
    assert verdict(FULL, N_PLUS_1, cps, Fraction(1, 2)).classification is Trend.WITNESS_ABOVE_DELTA
    eu_cps = [3 * factorial(k) + 1 for k in range(2, 12)]
    prof = density_profile(EU, N_PLUS_1, eu_cps)
    assert min(prof.values) >= Fraction(1, 4)
    assert verdict(EU, N_PLUS_1, eu_cps, Fraction(1, 4)).classification is Trend.WITNESS_ABOVE_DELTA


def test_verdict_monotone_in_delta():
    cps = [3 * factorial(k) + 1 for k in range(2, 10)]
    prof = density_profile(EU, N_PLUS_1, cps)
    top = max(prof.tail(), key=lambda t: t[1])[1]
    for d in [Fraction(1, 100), Fraction(1, 4), top]:
        assert classify(prof, d).classification is Trend.WITNESS_ABOVE_DELTA
    assert classify(prof, top + Fraction(1, 10 ** 9)).classification is not Trend.WITNESS_ABOVE_DELTA


def test_profile_summary_and_window():
    p = ratio_profile(N_PLUS_1, list(range(1, 9)))
    assert final_window(8) == 2 and final_window(1) == 1
    assert p.summary() == {"max": Fraction(8, 9), "window_max": Fraction(8, 9), "final": Fraction(8, 9)}


def test_scaling_halves_density():
    g2 = ScaledWeight(N_PLUS_1, 2)
    for n in [1, 10, 999, 3 * factorial(7)]:
        assert partial_density(EU, g2, n) == partial_density(EU, N_PLUS_1, n) / 2


@pytest.mark.parametrize("g", [N_PLUS_1, AffineWeight(3, 5, 7), LogFloorWeight(), LogFloorWeight(3, 1, 2),
                               RootFloorWeight(), RootFloorWeight(2, 3), FL,
                               TableWeight([1, 1, 2], AffineWeight(1, 0, 1)), ScaledWeight(FL, 3)])
def test_catalog_weights_nondecreasing(g):
    assert check_nondecreasing(g, 10 ** 4) is None


def test_plateau_family_ratio():
    base = BaseSequence()
    plats = FL.plateaus(6)
    assert plats == [(base(2) + 1, 2 * base(2) + 1, 2 * base(2)), (base(3) + 1, 3 * base(3) + 1, 3 * base(3))]
    assert max(ratio_profile(FL, range(1, 200)).values) == 1
    for _, hi, top in plats:
        assert Fraction(hi - 1, FL(hi - 1)) == 1 == Fraction(top, FL(top))


def test_base_sequence_validation():
    with pytest.raises(ValidationError):
        BaseSequence("explicit", [1, 2, 3, 4])
    assert BaseSequence("explicit", [1, 2, 5, 16])(3) == 16


def test_certificates():
    c = HCertificate(Fraction(1, 2), lambda j: 2 ** j)
    assert c.validate(N_PLUS_1)
    with pytest.raises(ValidationError):
        HCertificate(Fraction(1), [3, 2]).validate(N_PLUS_1)
    with pytest.warns(MissingCertificateWarning):
        require_certificate(LogFloorWeight(), "test")
    N_PLUS_1.h_certificate.validate(N_PLUS_1)


def test_iroot():
    assert iroot(10 ** 40, 2) == 10 ** 20
    assert iroot(10 ** 40 - 1, 2) == 10 ** 20 - 1
    assert iroot(26, 3) == 2


def test_modulus_examples():
    for n in [1, 10, 1000]:
        t = modulus_density(EU, N_PLUS_1, IdentityModulus(), n)
        assert t.exact and t.lo == partial_density(EU, N_PLUS_1, n)
    t = modulus_density(FULL, N_PLUS_1, LogModulus(), 1000)
    assert t.compare(1) == -1
    assert abs(float(t.mid) - log(1001) / log(1002)) < 1e-12
    assert t.hi - t.lo < Fraction(1, 2 ** 50)
    powers = catalog_blocks("powers")
    assert powers.prefix_count(1024) == 10
    t = modulus_density(powers, N_PLUS_1, LogModulus(), 1024)
    assert t.compare(Fraction(3458, 10000)) == 1 and t.compare(Fraction(3459, 10000)) == -1


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_modulus_subadditive_and_increasing(x, y):
    for f in (LogModulus(), PowerModulus(1, 2), PowerModulus(2, 3)):
        assert f(0).hi == 0
        fx, fy, fxy = f(x), f(y), f(x + y)
        assert fxy.lo <= fx.hi + fy.hi
        if y > 0:
            assert f(x + y).hi >= f(x).lo


def test_weight_descriptors_round_trip():
    for g in [N_PLUS_1, LogFloorWeight(), RootFloorWeight(1, 3), FL, ScaledWeight(FL, 2),
              TableWeight([1, 2], N_PLUS_1)]:
        h = weight_from(g.describe())
        assert h.describe() == g.describe()
        assert [h(n) for n in range(300)] == [g(n) for n in range(300)]
