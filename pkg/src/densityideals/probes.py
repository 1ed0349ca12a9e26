"""Finite-horizon probes for increasing-invariance, almost uniform
distribution, the comparison with the density-zero ideal, and the Katětov
adversary.

Probes report evidence at an explicit horizon and never claim membership.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CertificationError, ClassificationError, PreconditionError, ValidationError
from .indexmaps import IDENTITY, IndexMap
from .measures import MeasureSequence, StarParameters, exh_profile, star_condition_check
from .sets import OmegaSubset, Progressions, dominates_prefixwise
from .weights import (
    DEFAULT_TREND_THRESHOLD,
    DensityProfile,
    Trend,
    WeightFunction,
    classify,
    density_profile,
    ratio_profile,
)

__all__ = [
    "ProbeReport",
    "increasing_invariance_probe",
    "aud_probe",
    "z_subset_probe",
    "ZSubsetReport",
    "katetov_witness",
    "KatetovResult",
    "thin_m_sequence",
    "blocks_within",
]

COUNTEREXAMPLE = "CounterexampleEvidence"
NOT_AUD = "NotAUDEvidence"
NO_EVIDENCE = "NoEvidence"


def _fr(x):
    x = Fraction(x)
    return [str(x.numerator), str(x.denominator)]


@dataclass(frozen=True)
class ProbeReport:
    classification: str
    horizon: int
    witnesses: tuple  # (n, value)
    parameters: dict
    details: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "classification": self.classification,
            "horizon": str(self.horizon),
            "witnesses": [[str(n), *_fr(v)] for n, v in self.witnesses],
            "parameters": self.parameters,
            "details": self.details,
        }


def blocks_within(M: MeasureSequence, horizon: int) -> int:
    """Largest block index whose domain lies inside ``[0, horizon)``; -1 if none."""
    n, last = M.first, M.first - 1
    while M.stop is None or n < M.stop:
        if M.block(n).domain[1] > horizon:
            break
        last = n
        n += 1
    return last


def increasing_invariance_probe(M: MeasureSequence, B: OmegaSubset, C: OmegaSubset, horizon: int,
                                delta, threshold=DEFAULT_TREND_THRESHOLD) -> ProbeReport:
    """Evidence that Exh(M) is not increasing-invariant via the pair (B, C).

    Counterexample evidence needs C dominated by B up to the horizon, the
    masses of B trending to zero and those of C reaching delta in the final
    window.
    """
    if horizon < 1:
        raise ValidationError("horizon must be >= 1")
    delta = Fraction(delta)
    dom = dominates_prefixwise(C, B, horizon)
    N = blocks_within(M, horizon)
    params = {"delta": _fr(delta), "threshold": _fr(threshold)}
    if N < M.first:
        return ProbeReport(NO_EVIDENCE, horizon, (), params, {"reason": "no complete block below horizon"})
    pb, pc = exh_profile(M, B, N).profile, exh_profile(M, C, N).profile
    vb, vc = classify(pb, delta, threshold), classify(pc, delta, threshold)
    details = {
        "domination": {"holds": dom.holds,
                       "first_failure": None if dom.first_failure is None else str(dom.first_failure)},
        "B_trend": vb.classification.value,
        "C_trend": vc.classification.value,
        "blocks": str(N),
        "B_masses": [[str(n), *_fr(v)] for n, v in zip(pb.checkpoints, pb.values)],
        "C_masses": [[str(n), *_fr(v)] for n, v in zip(pc.checkpoints, pc.values)],
    }
    hit = (dom.holds and vb.classification is Trend.TREND_ZERO
           and vc.classification is Trend.WITNESS_ABOVE_DELTA)
    wit = tuple((n, v) for n, v in zip(pc.checkpoints, pc.values) if v >= delta) if hit else ()
    return ProbeReport(COUNTEREXAMPLE if hit else NO_EVIDENCE, horizon, wit, params, details)


def aud_probe(M: MeasureSequence, B: OmegaSubset, m_grid, n_horizon: int, delta=Fraction(1, 2),
              threshold=DEFAULT_TREND_THRESHOLD) -> ProbeReport:
    """For each level m, the least n_m with (star) on every block in ``(n_m, n_horizon]``.

    Evidence against almost uniform distribution: every level has a nonempty
    passing tail while the masses of B reach delta in the final window.
    """
    grid = sorted(set(int(m) for m in m_grid))
    if not grid:
        raise ValidationError("m_grid must be nonempty")
    delta = Fraction(delta)
    levels = {}
    all_pass = True
    for m in grid:
        n_m = n_horizon
        # walk down while the single-block check passes
        while n_m >= M.first:
            res = star_condition_check(M, B, StarParameters(m, n_m - 1, n_m))
            if not res.holds:
                break
            n_m -= 1
        levels[str(m)] = {"n_m": str(n_m), "tail_nonempty": n_m < n_horizon}
        all_pass &= n_m < n_horizon
    prof = exh_profile(M, B, n_horizon).profile
    v = classify(prof, delta, threshold)
    hit = all_pass and v.classification is Trend.WITNESS_ABOVE_DELTA
    wit = tuple((n, x) for n, x in zip(prof.checkpoints, prof.values) if x >= delta) if hit else ()
    details = {"levels": levels, "B_trend": v.classification.value,
               "B_masses": [[str(n), *_fr(x)] for n, x in zip(prof.checkpoints, prof.values)]}
    return ProbeReport(NOT_AUD if hit else NO_EVIDENCE, n_horizon, wit,
                       {"m_grid": [str(m) for m in grid], "delta": _fr(delta)}, details)


@dataclass(frozen=True)
class ZSubsetReport:
    z_profile: DensityProfile  # |A ∩ n| / n
    g_profile: DensityProfile  # |A ∩ n| / g(n)
    link: DensityProfile  # g(n) / n

    def as_dict(self):
        return {name: [[str(n), *_fr(v)] for n, v in zip(p.checkpoints, p.values)]
                for name, p in (("z", self.z_profile), ("g", self.g_profile), ("link", self.link))}


def z_subset_probe(g: WeightFunction, A: OmegaSubset, checkpoints) -> ZSubsetReport:
    cps = tuple(int(c) for c in checkpoints)
    if not cps or cps[0] < 1:
        raise ValidationError("checkpoints must be positive")
    z = DensityProfile(cps, tuple(Fraction(A.prefix_count(n), n) for n in cps))
    gp = density_profile(A, g, cps)
    inv = ratio_profile(g, cps)
    link = DensityProfile(cps, tuple(1 / v for v in inv.values))
    return ZSubsetReport(z, gp, link)


# -- Katetov adversary ------------------------------------------------------------


def _m_at(m_seq, s):
    if callable(m_seq):
        return int(m_seq(s))
    if s >= len(m_seq):
        raise PreconditionError("m_seq exhausted while searching for a valid term")
    return int(m_seq[s])


def thin_m_sequence(f: WeightFunction, m_seq, count: int, scan=1 << 12):
    """Subsequence ``m'_0, m'_1, ...`` with ``m'_n / f(m'_n) > 2n + 3`` and
    ``(2n + 2) f(m'_n) < f(m'_{n+1})``; returns ``(terms, source indices)``."""
    terms, src = [], []
    s = 0
    for n in range(count):
        need_sep = (2 * n) * f(terms[-1]) if terms else -1
        if terms:
            # exponential then binary search on the separation predicate
            lo, step = s, 1
            while f(_m_at(m_seq, lo + step)) <= need_sep:
                step *= 2
                if step > (1 << 64):
                    raise PreconditionError("f(m_s) never clears the separation bound")
            a, b = lo + step // 2, lo + step
            while a < b:
                mid = (a + b) // 2
                if f(_m_at(m_seq, mid)) > need_sep:
                    b = mid
                else:
                    a = mid + 1
            s = max(s, a)
        for _ in range(scan):
            m = _m_at(m_seq, s)
            if m > (2 * n + 3) * f(m) and f(m) > need_sep:
                break
            s += 1
        else:
            raise PreconditionError(f"no term with m/f(m) > {2 * n + 3} found near index {s}")
        terms.append(m)
        src.append(s)
        s += 1
    return terms, src


def validate_m_sequence(f, terms):
    for n, m in enumerate(terms):
        if not m > (2 * n + 3) * f(m):
            raise PreconditionError(f"m_{n} = {m}: m/f(m) = {Fraction(m, f(m))} is not > {2 * n + 3}")
        if n + 1 < len(terms) and not (2 * n + 2) * f(m) < f(terms[n + 1]):
            raise PreconditionError(f"separation (2n+2) f(m_n) < f(m_(n+1)) fails at n = {n}")


def _split_counts(phi: IndexMap, lo, hi):
    """Sizes of {i in [lo, hi): phi(i) >= hi}, {phi(i) in [lo, hi)}, {phi(i) < lo}."""
    above = inside = below = 0
    for a, b, c, reflect in phi.pieces_in(lo, hi):
        x, y = (c, c + (b - a))
        above += max(0, y - max(x, hi))
        below += max(0, min(y, lo) - x)
        inside += max(0, min(y, hi) - max(x, lo))
    return above, inside, below


def _preimage_profile(phi: IndexMap, lo, hi):
    """Step function ``a -> |phi^{-1}(a) ∩ [lo, hi)|`` as sorted (position, delta) events."""
    ev = {}
    for a, b, c, _ in phi.pieces_in(lo, hi):
        x, y = c, c + (b - a)
        ev[x] = ev.get(x, 0) + 1
        ev[y] = ev.get(y, 0) - 1
    return sorted((p, d) for p, d in ev.items() if d)


def _count_at(events, a):
    return sum(d for p, d in events if p <= a)


def _window_picks(events, t, w, count):
    """Picks for windows ``(t + l w, t + (l+1) w]``, l < count: the point with the
    most preimages, lowest position on ties.  Returns Progressions segments."""
    w = Fraction(w)

    def start(l):
        return t + (l * w.numerator) // w.denominator + 1

    def window_of(x):
        # l with start(l) <= x < start(l+1)
        y = Fraction(x - t - 1) / w
        lo = y.numerator // y.denominator
        while lo > 0 and start(lo) > x:
            lo -= 1
        while lo + 1 < count and start(lo + 1) <= x:
            lo += 1
        return lo

    special = {}
    end = start(count)
    for p, _ in events:
        if start(0) < p < end:
            l = window_of(p)
            if start(l) < p:
                special[l] = None
    for l in sorted(special):
        s, e = start(l), start(l + 1)
        cuts = sorted({s, e, *[p for p, _ in events if s < p < e]})
        best, pick = None, s
        for a in cuts[:-1]:
            c = _count_at(events, a)
            if best is None or c > best:
                best, pick = c, a
        special[l] = pick
    segs, l0 = [], 0
    for l in sorted(special):
        if l > l0:
            segs.append((t, w, l0, l))
        p = special[l]
        segs.append((p - 1, 1, 0, 1))
        l0 = l + 1
    if l0 < count:
        segs.append((t, w, l0, count))
    return segs


@dataclass
class KatetovResult:
    A: OmegaSubset
    case: int
    log: list
    certified: list
    m_terms: list
    m_source: list
    selected: list

    def as_dict(self):
        return {
            "case": str(self.case),
            "selected": [str(n) for n in self.selected],
            "m": [str(m) for m in self.m_terms],
            "m_source_index": [str(s) for s in self.m_source],
            "log": self.log,
            "certified": self.certified,
        }


def katetov_witness(f: WeightFunction, phi: IndexMap = IDENTITY, m_seq=None, horizon: int = 12,
                    thin=True) -> KatetovResult:
    """Build A with density zero whose phi-preimage stays out of Z_f.

    ``m_seq`` (callable or list) must allow ``m_n / f(m_n) > 2n + 3``; with
    ``thin`` a subsequence meeting the separation condition is selected,
    otherwise both conditions are checked as given.  Block indices n refer
    to the selected subsequence and run over ``0..horizon``.
    """
    if m_seq is None:
        raise ValidationError("m_seq is required")
    count = horizon + 1
    if thin:
        terms, src = thin_m_sequence(f, m_seq, count)
    else:
        terms = [_m_at(m_seq, n) for n in range(count)]
        src = list(range(count))
    validate_m_sequence(f, terms)
    F = [f(m) for m in terms]
    log, holds = [], {1: [], 2: [], 3: []}
    for n in range(count):
        lo, hi = F[n] + 1, (2 * n + 2) * F[n] + 1
        b, c, d = _split_counts(phi, lo, hi)
        cases = [k for k, ok in ((1, b >= F[n]), (2, c >= n * F[n]), (3, d >= n * F[n])) if ok]
        if not cases:
            raise ClassificationError(f"no case reaches its threshold at n = {n}")
        for k in cases:
            if k == 1 or n > 0:
                holds[k].append(n)
        log.append({"n": str(n), "m": str(terms[n]), "f_m": str(F[n]), "I": [str(lo), str(hi)],
                    "B": str(b), "C": str(c), "D": str(d), "cases": cases})
    case = max((1, 2, 3), key=lambda k: (len(holds[k]), -k))
    if not holds[case]:
        raise ClassificationError("no case holds at a usable index")
    if case == 1:
        A, cert, sel = _case1(phi, F, terms, holds[1])
    elif case == 2:
        A, cert, sel = _case2(phi, F, terms, holds[2])
    else:
        A, cert, sel = _case3(phi, F, terms, holds[3])
    return KatetovResult(A, case, log, cert, terms, src, sel)


def _certify(A, phi, F, terms, sel, ratio_min, bounds):
    """Check the preimage ratio at each selected m and density bounds at checkpoints."""
    out = []
    for n in sel:
        v = Fraction(phi.preimage_count(A, 0, terms[n]), F[n])
        ok = v >= ratio_min
        out.append({"kind": "preimage_ratio", "n": str(n), "value": _fr(v), "bound": _fr(ratio_min), "ok": ok})
        if not ok:
            raise CertificationError(f"preimage ratio {v} < {ratio_min} at n = {n}")
    for i, bound in bounds:
        if i < 1:
            continue
        v = Fraction(A.prefix_count(i), i)
        ok = v <= bound
        out.append({"kind": "density", "i": str(i), "value": _fr(v), "bound": _fr(bound), "ok": ok})
        if not ok:
            raise CertificationError(f"density {v} > {bound} at i = {i}")
    return out


def _case1(phi, F, terms, sel):
    segs = []
    for n in sel:
        lo, hi = F[n] + 1, (2 * n + 2) * F[n] + 1
        need = F[n]
        imgs = []
        for a, b, c, reflect in phi.pieces_in(lo, hi):
            if need == 0:
                break
            # lowest source points whose image is >= hi
            if reflect:
                take = min(need, max(0, c + (b - a) - max(c, hi)))
                if take:
                    imgs.append((c + (b - a) - take, c + (b - a)))
            else:
                first = max(a, a + (hi - c))
                take = min(need, max(0, b - first))
                if take:
                    x = c + (first - a)
                    imgs.append((x, x + take))
            need -= take
        imgs.sort()
        segs.extend(imgs)
    merged = []
    for a, b in sorted(segs):
        if merged and a <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(b, merged[-1][1]))
        else:
            merged.append((a, b))
    A = Progressions([(a - 1, 1, 0, b - a) for a, b in merged])
    bounds = []
    tops = [(2 * n + 2) * F[n] for n in range(len(F))]
    for i in A.checkpoints():
        for n in range(len(F) - 1):
            if tops[n] < i <= tops[n + 1]:
                bounds.append((i, Fraction(2, 2 * n + 2)))
    return A, _certify(A, phi, F, terms, sel, Fraction(1, 2), bounds), sel


def _case2(phi, F, terms, sel):
    segs, bounds = [], []
    for j, n in enumerate(sel):
        lo, hi = F[n] + 1, (2 * n + 2) * F[n] + 1
        ev = _preimage_profile(phi, lo, hi)
        segs.extend(_window_picks(ev, F[n], 2 * n + 1, F[n]))
    A = Progressions(segs)
    bound_of = {n: Fraction(2, 2 * n + 2) + Fraction(2, 2 * n + 1) for n in sel}
    starts = [F[n] + 1 for n in sel]
    cps = set(A.checkpoints())
    for j, n in enumerate(sel):
        cps.add(starts[j])
        cps.add((2 * n + 2) * F[n] + 1)
        if j + 1 < len(sel):
            cps.add(starts[j + 1] - 1)
    for i in sorted(cps):
        for j, n in enumerate(sel):
            nxt = starts[j + 1] if j + 1 < len(sel) else None
            if starts[j] <= i and (nxt is None or i < nxt):
                bounds.append((i, bound_of[n]))
    return A, _certify(A, phi, F, terms, sel, Fraction(1, 3), bounds), sel


def _case3(phi, F, terms, N):
    segs, bounds, sel = [], [], []
    total, top = 0, -1
    j = 1
    pool = list(N)
    while pool:
        t = 1
        while not (t > top and t > j * total):
            t *= 2
        chosen = None
        for n in pool:
            lo, hi = F[n] + 1, (2 * n + 2) * F[n] + 1
            # |D_n minus phi^{-1}[0, t)|: images in [t, lo)
            k = 0
            for a, b, c, _ in phi.pieces_in(lo, hi):
                x, y = c, c + (b - a)
                k += max(0, min(y, lo) - max(x, t))
            if 2 * k >= n * F[n] and F[n] - t > j:
                chosen = n
                break
        if chosen is None:
            break
        n = chosen
        pool = [x for x in pool if x > n]
        lo, hi = F[n] + 1, (2 * n + 2) * F[n] + 1
        c = -(-(F[n] - t) // n)
        w = Fraction(F[n] - t, c)
        new = _window_picks(_preimage_profile(phi, lo, hi), t, w, c)
        segs.extend(new)
        piece = Progressions(new)
        total += len(piece)
        top = piece.last()
        for i in piece.checkpoints() + [t, F[n]]:
            if t <= i <= F[n]:
                bounds.append((i, Fraction(3, j) + Fraction(2, n)))
        sel.append(n)
        j += 1
    if not sel:
        raise ClassificationError("Case 3 holds but no block leaves enough mass above t_1")
    A = Progressions(segs)
    return A, _certify(A, phi, F, terms, sel, Fraction(1, 2), bounds), sel
