"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (the lines are printed with output
capture disabled) or ``python3 tests/test_acceptance.py`` for just the lines.
"""

import os
import random
import subprocess
import sys
import time
import warnings
from fractions import Fraction
from math import factorial

import pytest

from densityideals import (FULL, IDENTITY, AffineWeight, RootFloorWeight, StarParameters, Union, block_mass,
                           bounded_ratio_stat, catalog_blocks, catalog_measures, check_nondecreasing, check_trace,
                           dominates_prefixwise, exh_profile, farah_check, increasing_invariance_probe,
                           katetov_witness, measures_from_weight, normalize, ratio_profile, sigma_profile,
                           star_condition_check, weight_from_measures)
from densityideals.gallery import (almost_disjoint_family, antichain_eu_not_simple, antichain_eu_simple, antichain_n,
                                   aud_not_ii, eu_not_ii, ii_not_aud, ii_not_aud_k, iso_pair, perm_breaks_ii)

sys.path.insert(0, os.path.dirname(__file__))
from _cli_corpus import CORPUS  # noqa: E402
from _presentations import brute_dominates, brute_prefix, presentations  # noqa: E402

pytestmark = pytest.mark.filterwarnings("ignore::densityideals.MissingCertificateWarning")

RESULTS = {}


def _report(num, ok, note, t0):
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {note} ({time.perf_counter() - t0:.1f}s)"
    RESULTS[num] = line
    return line


@pytest.fixture
def emit(capsys):
    def out(line):
        with capsys.disabled():
            print("\n" + line)
    return out


# -- the checks, each returning (ok, note) --------------------------------------------------------


def check_1():
    pres = presentations(200)
    for A, mask in pres:
        pc = brute_prefix(mask)
        if any(A.prefix_count(n) != pc[n] for n in range(len(mask) + 1)):
            return False, "prefix_count differs from enumeration"
    rng = random.Random(7)
    for k in range(200):
        (C, mc), (B, mb) = pres[k], pres[rng.randrange(200)]
        if k % 2:
            B, mb = Union(B, C), bytearray(x | y for x, y in zip(mb, mc))
        h = len(mc)
        r = dominates_prefixwise(C, B, h)
        bf = brute_dominates(brute_prefix(mc), brute_prefix(mb), h)
        if (r.holds, r.first_failure) != (bf is None, bf):
            return False, "domination differs from the n-by-n check"
    return True, "200 presentations match brute force on n <= 10^4"


def check_2():
    g = AffineWeight(1, 0, 1)
    M = measures_from_weight(g, 21)
    # direct recurrence: n_{k+1} = least n with n - n_k >= g(n_k)
    n = [1]
    for _ in range(21):
        n.append(n[-1] + g(n[-1]))
    ok = list(M.cuts) == n == [2 ** (k + 1) - 1 for k in range(22)]
    ok = ok and all(M.block(k).total_mass == 1 for k in range(21))
    return ok, "n_k = 2^(k+1)-1 and unit block masses for k <= 20"


def check_3():
    fam = almost_disjoint_family(3)
    seqs = [eu_not_ii()[0], aud_not_ii()[0], ii_not_aud()[0], *iso_pair()[:2], perm_breaks_ii()[0],
            catalog_measures("antichain_blocks"), *[s for s, _ in antichain_eu_not_simple(fam)]]
    for M in seqs:
        r = farah_check(M, 6)
        if r.d1 != 1 or r.d3 != 1:
            return False, f"{M.name}: D1={r.d1} D3={r.d3}"
    r = farah_check(eu_not_ii()[0], 12)
    ok = list(r.d2.values) == [Fraction(1, factorial(k)) for k in range(1, 13)]
    return ok, f"D1 = D3 = 1 on {len(seqs)} gallery sequences; eu_not_ii D2 = 1/k! for k <= 12"


def check_4():
    M, B, C = eu_not_ii()
    h = 3 * factorial(8) + 1
    pb, pc = brute_prefix_from(B, h), brute_prefix_from(C, h)
    ok = all(pc[n] <= pb[n] for n in range(h + 1)) and dominates_prefixwise(C, B, h).holds
    ok = ok and all(block_mass(M.block(k), B) == 0 and block_mass(M.block(k), C) == 1 for k in range(2, 9))
    ok = ok and increasing_invariance_probe(M, B, C, h, Fraction(1, 2)).classification == "CounterexampleEvidence"
    return ok, "eu_not_ii domination up to 3*8!+1 with mu_k(B)=0, mu_k(C)=1"


def brute_prefix_from(A, h):
    return brute_prefix(bytearray(1 if A.contains(i) else 0 for i in range(h)))


def check_5():
    Ma, _ = aud_not_ii()
    ok = all(sigma_profile(Ma, FULL, n).values == {2: 3} for n in range(2, 11))
    ok = ok and bounded_ratio_stat(Ma, 10) == 2
    Mi, B = ii_not_aud()
    for n in range(1, 7):
        v = block_mass(Mi.block(n), B)
        ok = ok and v == Fraction(1, n) * sum(Fraction(1, k + 1) for k in range(1, ii_not_aud_k(n) + 1))
        ok = ok and v >= Fraction(1, 2)
    ok = ok and block_mass(Mi.block(2), B) == Fraction(13, 24)
    for m in (1, 2, 4):
        ok = ok and star_condition_check(Mi, B, StarParameters(m, m - 1, 6)).holds
    return ok, "sigma(2)=3 on aud_not_ii, ratio 2; ii_not_aud masses >= 1/2 with (star) at m in {1,2,4}"


def check_6():
    D = catalog_measures("uniform_doubling")
    g, trace = weight_from_measures(D, 10)
    ok = True
    for n in range(10):
        lo, hi = D.block(n).domain
        ok = ok and all(g(i) == 2 ** (n + 1) for i in range(lo, hi - 1)) and g(hi - 1) == 2 ** (n + 2)
        bt = trace.blocks[n]
        ok = ok and bt.r == 1 and bt.R[1] - bt.R[0] == 1
        if n + 1 < 10:
            nxt = trace.blocks[n + 1].L
            ok = ok and nxt[1] - nxt[0] == 1
    ok = ok and check_trace(trace, D) == []
    N = normalize(measures_from_weight(AffineWeight(1, 0, 1), 14), 13)
    g1, tr1 = weight_from_measures(N, 12)
    ok = ok and check_trace(tr1, N) == [] and check_nondecreasing(g1, g1.end - 1) is None
    for k in range(12):
        lo, hi = N.block(k).domain
        ok = ok and 2 ** k <= g1(lo) and g1(hi - 1) <= 2 ** (k + 3)
    return ok, "doubling synthesis exact, trace invariants hold, round trip within [2^k, 2^(k+3)]"


def check_7():
    res = katetov_witness(RootFloorWeight(), IDENTITY, lambda n: (2 * n + 4) ** 2, 12)
    ok = res.case == 2 and len(res.log) == 13 and all(2 in e["cases"] for e in res.log)
    kinds = {c["kind"] for c in res.certified}
    ok = ok and kinds == {"preimage_ratio", "density"} and all(c["ok"] for c in res.certified)
    return ok, f"Case 2 at every n <= 12; {len(res.certified)} certified inequalities hold"


EXPECTED_PREFIX = [1, 3, 6, 14, 44, 168]


def check_8_parts():
    prefix = [antichain_n(i) for i in range(6)]
    probe_ok = True
    members = [(catalog_measures("antichain_blocks"),
                (catalog_blocks("antichain_B", M=FULL), catalog_blocks("antichain_C", M=FULL)))]
    members += antichain_eu_not_simple(almost_disjoint_family(3))
    for seq, (B, C) in members:
        rep = increasing_invariance_probe(seq, B, C, antichain_n(8), Fraction(1, 2))
        probe_ok = probe_ok and rep.classification == "CounterexampleEvidence"
    plateau_ok = True
    for g in antichain_eu_simple(almost_disjoint_family(3)):
        plateau_ok = plateau_ok and max(ratio_profile(g, range(1, 2000)).values) == 1
        plateau_ok = plateau_ok and all(ratio_profile(g, [top]).values[0] == 1 for _, _, top in g.plateaus(8))
    return prefix, probe_ok, plateau_ok


def check_8():
    prefix, probe_ok, plateau_ok = check_8_parts()
    ok = prefix == EXPECTED_PREFIX and probe_ok and plateau_ok
    note = (f"n-prefix {','.join(map(str, prefix))} (expected 168 at i=5, the recurrence gives 188); "
            f"probe {'ok' if probe_ok else 'failed'}; plateau ratio {'ok' if plateau_ok else 'failed'}")
    return ok, note


def check_9():
    env = dict(os.environ, PYTHONHASHSEED="random")
    for argv in CORPUS:
        cmd = [sys.executable, "-m", "densityideals", *argv]
        a = subprocess.run(cmd, capture_output=True, env=env)
        b = subprocess.run(cmd, capture_output=True, env=env)
        if a.returncode or a.stdout != b.stdout:
            return False, f"not byte-identical: {' '.join(argv)}"
    return True, f"{len(CORPUS)} CLI invocations byte-identical across two runs"


CHECKS = {1: check_1, 2: check_2, 3: check_3, 4: check_4, 5: check_5, 6: check_6, 7: check_7, 8: check_8,
          9: check_9}


def _run(num):
    t0 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ok, note = CHECKS[num]()
    return ok, _report(num, ok, note, t0)


# -- pytest wrappers -------------------------------------------------------------------------------


@pytest.mark.parametrize("num", [1, 2, 3, 4, 5, 6, 7, 9])
def test_criterion(num, emit):
    ok, line = _run(num)
    emit(line)
    assert ok, line


def test_criterion_8_attainable_parts(emit):
    ok, line = _run(8)
    emit(line)
    prefix, probe_ok, plateau_ok = check_8_parts()
    assert prefix[:5] == EXPECTED_PREFIX[:5]
    assert probe_ok and plateau_ok


@pytest.mark.xfail(strict=True, reason="n_5 = 44 + 4! + 5! = 188 under the stated recurrence, not 168")
def test_criterion_8_literal_prefix():
    assert [antichain_n(i) for i in range(6)] == EXPECTED_PREFIX


if __name__ == "__main__":
    for k in CHECKS:
        print(_run(k)[1], flush=True)
