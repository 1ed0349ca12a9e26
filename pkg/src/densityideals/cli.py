"""Command-line front end.

Output is JSON (sorted keys) or CSV on stdout. Rationals are always written
as exact numerator/denominator strings; the CSV ``decimal`` column is a
truncated 20-digit annotation.

Exit codes: 0 success, 2 validation error, 3 scan-bound or degenerate
input, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from fractions import Fraction

from . import descriptors as D
from . import gallery as G
from .constructions import (DEFAULT_SCAN_BOUND, doubling_regroup, measures_from_weight, monotone_rearrange,
                            weight_from_measures)
from .errors import DegenerateInputError, DensityIdealError, ScanBoundError, ValidationError
from .indexmaps import IDENTITY
from .measures import StarParameters, farah_check, sigma_profile, star_condition_check
from .probes import aud_probe, increasing_invariance_probe, katetov_witness, z_subset_probe
from .sets import EMPTY, FULL
from .weights import density_profile, verdict

EXIT_OK, EXIT_VALIDATION, EXIT_SCAN, EXIT_USAGE = 0, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- argument values ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(\*\*|[-+*/^!()]))")


def parse_int_expr(text: str) -> int:
    """Integer expression with ``+ - * / ^ ** !`` and parentheses, e.g. ``3*8!+1``.

    ``/`` is exact division and must leave no remainder.
    """
    toks, pos, s = [], 0, str(text).strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad character in {text!r}")
        toks.append(int(m.group(1)) if m.group(1) else m.group(2))
        pos = m.end()
        while pos < len(s) and s[pos].isspace():
            pos += 1
    toks.append(None)
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        i += 1
        return toks[i - 1]

    def expr():
        v = term()
        while peek() in ("+", "-"):
            v = v + term() if take() == "+" else v - term()
        return v

    def term():
        v = power()
        while peek() in ("*", "/"):
            op = take()
            w = power()
            if op == "*":
                v *= w
            else:
                if w == 0 or v % w:
                    raise ValueError(f"inexact division in {text!r}")
                v //= w
        return v

    def power():
        v = postfix()
        if peek() in ("^", "**"):
            take()
            e = power()
            if e < 0 or e > 10 ** 6:
                raise ValueError("exponent out of range")
            v = v ** e
        return v

    def postfix():
        v = atom()
        while peek() == "!":
            take()
            if v < 0 or v > 5000:
                raise ValueError("factorial argument out of range")
            f = 1
            for k in range(2, v + 1):
                f *= k
            v = f
        return v

    def atom():
        t = take()
        if isinstance(t, int):
            return t
        if t == "-":
            return -atom()
        if t == "(":
            v = expr()
            if take() != ")":
                raise ValueError("unbalanced parentheses")
            return v
        raise ValueError(f"unexpected token in {text!r}")

    v = expr()
    if peek() is not None:
        raise ValueError(f"trailing input in {text!r}")
    return v


def _int_arg(text):
    try:
        return parse_int_expr(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _nat_arg(text):
    v = _int_arg(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text}")
    return v


def _frac_arg(text):
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {text!r}") from None


def _int_list(text):
    return [_int_arg(t) for t in str(text).split(",") if t.strip()]


def _shorthand(text):
    """``name`` or ``name:key=value,key=value``."""
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        k, eq, v = item.partition("=")
        if not eq:
            raise ValidationError(f"expected key=value in {text!r}")
        params[k.strip()] = v.strip()
    return name.strip(), params


def _descriptor_text(text):
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return fh.read().strip()
    return text.strip()


def resolve_set(text):
    t = _descriptor_text(text)
    if t.startswith("{"):
        return D.set_from(t)
    name, params = _shorthand(t)
    if name == "full":
        return FULL
    if name == "empty":
        return EMPTY
    return D.set_from({"kind": "blocks", "generator": name, "params": params})


def resolve_measures(text):
    t = _descriptor_text(text)
    if t.startswith("{"):
        return D.measures_from(t)
    name, params = _shorthand(t)
    return D.measures_from({"kind": "catalog", "name": name, "params": params})


def resolve_weight(text):
    t = _descriptor_text(text)
    if t.startswith("{"):
        return D.weight_from(t)
    kind, params = _shorthand(t)
    return D.weight_from({"kind": kind, **params})


def resolve_map(text):
    t = _descriptor_text(text)
    if t.startswith("{"):
        return D.map_from(t)
    return D.map_from({"kind": t})


# -- output ------------------------------------------------------------------------


def _fr(x):
    x = Fraction(x)
    return [str(x.numerator), str(x.denominator)]


def decimal_string(x, digits=20) -> str:
    """Truncated decimal expansion with ``digits`` places after the point."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    q = abs(x.numerator) * 10 ** digits // x.denominator
    whole, frac = divmod(q, 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


class Result:
    """A JSON payload plus an optional table for ``--format csv``."""

    def __init__(self, payload, columns=None, rows=None):
        self.payload = payload
        self.columns = columns
        self.rows = rows

    def render(self, fmt):
        if fmt == "json":
            return json.dumps(self.payload, indent=2, sort_keys=True) + "\n"
        if self.columns is None:
            raise UsageError("this command has no tabular form; use --format json")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([str(c) for c in r])
        return buf.getvalue()


def _value_rows(pairs):
    """``(n, value)`` pairs as ``n, numerator, denominator, decimal`` rows."""
    out = []
    for n, v in pairs:
        v = Fraction(v)
        out.append((n, v.numerator, v.denominator, decimal_string(v)))
    return out


VALUE_COLUMNS = ["n", "numerator", "denominator", "decimal"]


# -- gallery bundles ---------------------------------------------------------------


def _bundle(name):
    """Default measures and witnesses for a gallery entry."""
    if name == "eu_not_ii":
        M, B, C = G.eu_not_ii()
        return {"M": M, "B": B, "C": C}
    if name == "aud_not_ii":
        M, (B, C) = G.aud_not_ii()
        return {"M": M, "B": B, "C": C, "aud": FULL}
    if name == "ii_not_aud":
        M, B = G.ii_not_aud()
        return {"M": M, "B": B, "aud": B}
    if name == "iso_pair":
        _, nu, _ = G.iso_pair()
        B, C = G.iso_witnesses()
        return {"M": nu, "B": B, "C": C}
    if name == "perm_breaks_ii":
        M, B, C = G.perm_breaks_ii()
        return {"M": M, "B": B, "C": C}
    if name == "antichain_eu_not_simple":
        (M, (B, C)), = G.antichain_eu_not_simple(G.almost_disjoint_family(2), 1)
        return {"M": M, "B": B, "C": C}
    raise ValidationError(f"gallery entry {name!r} has no probe bundle")


def _probe_inputs(args, need):
    b = _bundle(args.gallery) if args.gallery else {}
    if args.measures:
        b["M"] = resolve_measures(args.measures)
    for key in ("B", "C"):
        v = getattr(args, key, None)
        if v:
            b[key] = resolve_set(v)
            if key == "B":
                b["aud"] = b["B"]
    missing = [k for k in need if k not in b]
    if missing:
        raise UsageError(f"missing inputs {', '.join(missing)}: give --gallery or --measures/--B/--C")
    return b


# -- commands ----------------------------------------------------------------------


def cmd_gallery_list(args):
    names = sorted(G.GALLERY)
    return Result({"gallery": names}, ["name"], [(n,) for n in names])


def cmd_gallery_emit(args):
    if args.name not in G.GALLERY:
        raise ValidationError(f"unknown gallery entry {args.name!r}; try 'gallery list'")
    params = D.load(args.params) if args.params else {}
    if not isinstance(params, dict):
        raise ValidationError("--params must be a JSON object")
    return Result({"name": args.name, **G.GALLERY[args.name](params)})


def _checkpoints(args):
    cps = args.checkpoints or [2 ** k for k in range(1, 21)]
    if any(c < 1 for c in cps) or list(cps) != sorted(set(cps)):
        raise ValidationError("checkpoints must be positive and strictly increasing")
    return cps


def cmd_density(args):
    A, g = resolve_set(args.set), resolve_weight(args.weight)
    cps = _checkpoints(args)
    prof = density_profile(A, g, cps)
    payload = {
        "set": A.describe(), "weight": g.describe(),
        "profile": [[str(n), *_fr(v)] for n, v in zip(prof.checkpoints, prof.values)],
        "summary": {k: _fr(v) for k, v in prof.summary().items()},
    }
    if args.delta is not None:
        v = verdict(A, g, cps, args.delta)
        payload["verdict"] = {"classification": v.classification.value, "delta": _fr(args.delta),
                              "points": [str(p) for p in v.points]}
    return Result(payload, VALUE_COLUMNS, _value_rows(zip(prof.checkpoints, prof.values)))


def _block_rows(M, lo, hi):
    blocks, rows = [], []
    for n in range(lo, hi):
        b = M.block(n)
        blocks.append({"n": str(n), **b.describe(), "mass": _fr(b.total_mass)})
        for a, c, w in b.pieces:
            rows.append((n, a, c, w.numerator, w.denominator, decimal_string(w)))
    return blocks, rows


BLOCK_COLUMNS = ["n", "lo", "hi", "weight_num", "weight_den", "decimal"]


def cmd_measures(args):
    M = resolve_measures(args.measures)
    lo = max(args.first, M.first)
    hi = lo + args.blocks
    if M.stop is not None:
        hi = min(hi, M.stop)
    blocks, rows = _block_rows(M, lo, hi)
    return Result({"measures": M.describe(), "flags": M.flags(), "blocks": blocks}, BLOCK_COLUMNS, rows)


def cmd_measures_from_weight(args):
    g = resolve_weight(args.weight)
    M = measures_from_weight(g, args.blocks, scan_bound=args.scan_bound)
    blocks, rows = _block_rows(M, M.first, M.first + args.blocks)
    return Result({"weight": g.describe(), "cuts": [str(c) for c in M.cuts], "blocks": blocks},
                  BLOCK_COLUMNS, rows)


def cmd_weight_from_measures(args):
    M = resolve_measures(args.measures)
    g, trace = weight_from_measures(M, args.blocks)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump(trace.as_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    table = [[str(a), str(b), str(v)] for a, b, v in g.pieces]
    return Result({"measures": M.describe(), "weight": g.describe(), "table": table},
                  ["lo", "hi", "value"], [tuple(t) for t in table])


def cmd_regroup(args):
    M = doubling_regroup(resolve_measures(args.measures), args.blocks)
    blocks, rows = _block_rows(M, M.first, M.first + args.blocks)
    return Result({"blocks": blocks}, BLOCK_COLUMNS, rows)


def cmd_rearrange(args):
    M, phi = monotone_rearrange(resolve_measures(args.measures), args.blocks)
    blocks, rows = _block_rows(M, M.first, M.first + args.blocks)
    hi = M.block(M.first + args.blocks - 1).domain[1]
    pieces = [[str(a), str(b), str(c), r] for a, b, c, r in phi.pieces_in(0, hi) if not (a == c and not r)]
    return Result({"blocks": blocks, "map_pieces": pieces}, BLOCK_COLUMNS, rows)


def _report(rep):
    d = rep.as_dict()
    return Result(d, VALUE_COLUMNS, _value_rows(rep.witnesses))


def cmd_probe_ii(args):
    b = _probe_inputs(args, ("M", "B", "C"))
    return _report(increasing_invariance_probe(b["M"], b["B"], b["C"], args.horizon, args.delta))


def cmd_probe_aud(args):
    b = _probe_inputs(args, ("M", "aud"))
    grid = args.m_grid or [1, 2, 4]
    return _report(aud_probe(b["M"], b["aud"], grid, args.n_horizon, args.delta))


def cmd_probe_z(args):
    g, A = resolve_weight(args.weight), resolve_set(args.set)
    rep = z_subset_probe(g, A, _checkpoints(args))
    p = rep.z_profile
    return Result(rep.as_dict(), VALUE_COLUMNS, _value_rows(zip(p.checkpoints, p.values)))


def cmd_probe_katetov(args):
    f = resolve_weight(args.weight)
    phi = resolve_map(args.map) if args.map else IDENTITY
    a, b = args.m_square
    res = katetov_witness(f, phi, lambda n: (a * n + b) ** 2, args.horizon, thin=not args.no_thin)
    rows = []
    for c in res.certified:
        at = c.get("n", c.get("i"))
        num, den = c["value"]
        rows.append((c["kind"], at, num, den, decimal_string(Fraction(int(num), int(den))),
                     "/".join(c["bound"]), c["ok"]))
    payload = res.as_dict()
    payload["set"] = res.A.describe()
    return Result(payload, ["check", "at", "numerator", "denominator", "decimal", "bound", "ok"], rows)


def cmd_sigma(args):
    M, B = resolve_measures(args.measures), resolve_set(args.set)
    sp = sigma_profile(M, B, args.block)
    payload = {"n": str(sp.n), "d": str(sp.d), "light": str(sp.light),
               "sigma": {str(k): _fr(v) for k, v in sp.values.items()},
               "counts": {str(k): str(c) for k, c in sp.counts.items()}}
    rows = [(k, sp.counts[k], v.numerator, v.denominator, decimal_string(v)) for k, v in sp.values.items()]
    return Result(payload, ["k", "count", "numerator", "denominator", "decimal"], rows)


def cmd_star(args):
    M, B = resolve_measures(args.measures), resolve_set(args.set)
    res = star_condition_check(M, B, StarParameters(args.m, args.n_lo, args.n_hi))
    fv = res.first_violation
    payload = {"holds": res.holds, "m": str(args.m), "n_lo": str(args.n_lo), "n_hi": str(args.n_hi),
               "first_violation": None if fv is None else [str(fv[0]), str(fv[1])]}
    rows = [(sp.n, max(sp.counts, default=0), *_fr(sp.maximum), decimal_string(sp.maximum))
            for sp in res.profiles]
    return Result(payload, ["n", "k_max", "numerator", "denominator", "decimal"], rows)


def cmd_farah(args):
    M = resolve_measures(args.measures)
    rep = farah_check(M, args.blocks)
    return Result(rep.as_dict(), VALUE_COLUMNS, _value_rows(zip(rep.d2.checkpoints, rep.d2.values)))


# -- parser ------------------------------------------------------------------------


def _common(p):
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--scan-bound", type=_nat_arg, default=DEFAULT_SCAN_BOUND,
                   help="cap on positions scanned by partition searches")
    p.add_argument("--config", metavar="FILE", help="key=value defaults; explicit flags win")


def _probe_sources(p):
    p.add_argument("--gallery", help="take measures and witnesses from a gallery entry")
    p.add_argument("--measures", help="catalog name, JSON descriptor or @file")
    p.add_argument("--B", dest="B", help="witness set B")
    p.add_argument("--C", dest="C", help="witness set C")


def build_parser():
    parser = _Parser(prog="densityideals", description="Exact experiments with density ideals.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    leaves = []

    def leaf(group, name, fn, **kw):
        p = group.add_parser(name, **kw)
        _common(p)
        p.set_defaults(func=fn)
        leaves.append(p)
        return p

    gal = sub.add_parser("gallery", help="named examples").add_subparsers(dest="action", required=True,
                                                                          parser_class=_Parser)
    leaf(gal, "list", cmd_gallery_list)
    p = leaf(gal, "emit", cmd_gallery_emit)
    p.add_argument("name")
    p.add_argument("--params", help="JSON object of generator parameters")

    p = leaf(sub, "density", cmd_density, help="partial-density profile |A ∩ n| / g(n)")
    p.add_argument("--set", required=True)
    p.add_argument("--weight", default="affine")
    p.add_argument("--checkpoints", type=_int_list)
    p.add_argument("--delta", type=_frac_arg)

    p = leaf(sub, "measures", cmd_measures, help="materialize measure blocks")
    p.add_argument("--measures", required=True)
    p.add_argument("--blocks", type=_nat_arg, default=6)
    p.add_argument("--first", type=_nat_arg, default=0)

    con = sub.add_parser("construct", help="weight/measure constructions").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = leaf(con, "measures-from-weight", cmd_measures_from_weight)
    p.add_argument("--weight", required=True)
    p.add_argument("--blocks", type=_nat_arg, default=10)
    p = leaf(con, "weight-from-measures", cmd_weight_from_measures)
    p.add_argument("--measures", required=True)
    p.add_argument("--blocks", type=_nat_arg, default=6)
    p.add_argument("--trace", metavar="FILE", help="write the synthesis trace as JSON")
    for name, fn in (("regroup", cmd_regroup), ("rearrange", cmd_rearrange)):
        p = leaf(con, name, fn)
        p.add_argument("--measures", required=True)
        p.add_argument("--blocks", type=_nat_arg, default=6)

    pr = sub.add_parser("probe", help="evidence probes").add_subparsers(dest="action", required=True,
                                                                        parser_class=_Parser)
    p = leaf(pr, "increasing-invariance", cmd_probe_ii)
    _probe_sources(p)
    p.add_argument("--horizon", type=_nat_arg, required=True)
    p.add_argument("--delta", type=_frac_arg, default=Fraction(1, 2))
    p = leaf(pr, "aud", cmd_probe_aud)
    _probe_sources(p)
    p.add_argument("--m-grid", type=_int_list)
    p.add_argument("--n-horizon", type=_nat_arg, default=6)
    p.add_argument("--delta", type=_frac_arg, default=Fraction(1, 2))
    p = leaf(pr, "z-subset", cmd_probe_z)
    p.add_argument("--weight", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--checkpoints", type=_int_list)
    p = leaf(pr, "katetov", cmd_probe_katetov)
    p.add_argument("--weight", default="root_floor")
    p.add_argument("--map")
    p.add_argument("--m-square", type=_int_list, default=[2, 4], help="A,B for m_n = (A*n + B)^2")
    p.add_argument("--horizon", type=_nat_arg, default=12)
    p.add_argument("--no-thin", action="store_true")

    p = leaf(sub, "sigma", cmd_sigma, help="σ profile of a set on one block")
    p.add_argument("--measures", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--block", type=_nat_arg, required=True)

    p = leaf(sub, "star", cmd_star, help="condition (⋆) on a block range")
    p.add_argument("--measures", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--m", type=_nat_arg, required=True)
    p.add_argument("--n-lo", type=_nat_arg, required=True)
    p.add_argument("--n-hi", type=_nat_arg, required=True)

    p = leaf(sub, "farah", cmd_farah, help="Farah's conditions on a block prefix")
    p.add_argument("--measures", required=True)
    p.add_argument("--blocks", type=_nat_arg, default=10)

    return parser, leaves


def read_config(path):
    """``key = value`` lines; ``#`` comments and ``[section]`` headers are ignored."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line or (line.startswith("[") and line.endswith("]")):
                continue
            k, eq, v = line.partition("=")
            if not eq:
                raise UsageError(f"{path}:{ln}: expected key = value")
            v = v.strip()
            if len(v) >= 2 and v[0] == v[-1] and v[0] in "\"'":
                v = v[1:-1]
            out[k.strip().replace("-", "_")] = v
    return out


def _config_path(argv):
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if a.startswith("--config="):
            return a.split("=", 1)[1]
    return None


def _apply_config(leaves, cfg):
    known = set()
    for p in leaves:
        dests = {a.dest: a for a in p._actions}
        mine = {}
        for k, v in cfg.items():
            if k in dests and k not in ("func", "config"):
                a = dests[k]
                if a.const is True and a.nargs == 0:  # store_true flags
                    mine[k] = v.lower() in ("1", "true", "yes", "on")
                else:
                    mine[k] = v
        p.set_defaults(**mine)
        known |= set(mine)
    unknown = set(cfg) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")


def run(argv=None, stdout=None, stderr=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser, leaves = build_parser()
    try:
        path = _config_path(argv)
        if path is not None:
            if not os.path.exists(path):
                raise UsageError(f"config file {path} not found")
            _apply_config(leaves, read_config(path))
        args = parser.parse_args(argv)
        text = args.func(args).render(args.format)
    except SystemExit as e:
        return int(e.code or 0) if not isinstance(e.code, str) else EXIT_USAGE
    except UsageError as e:
        print(f"usage error: {e}", file=stderr)
        return EXIT_USAGE
    except (ScanBoundError, DegenerateInputError) as e:
        print(f"error: {e}", file=stderr)
        return EXIT_SCAN
    except (DensityIdealError, OSError) as e:
        print(f"error: {e}", file=stderr)
        return EXIT_VALIDATION
    stdout.write(text)
    return EXIT_OK


def main():
    sys.exit(run())
