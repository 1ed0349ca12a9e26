"""Rebuild library objects from their JSON descriptors.

Every object with a ``describe()`` method can be reconstructed here, which
lets the command line pass sets, weights, measure sequences and maps around
as plain JSON.  Integers travel as decimal strings; plain JSON numbers are
accepted too.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import gallery  # noqa: F401  (registers the gallery catalogs)
from .constructions import measures_from_weight
from .errors import ValidationError
from .indexmaps import IDENTITY
from .measures import MeasureSequence, catalog_measures, explicit_measures
from .sets import (EMPTY, FULL, Complement, Difference, FiniteSet, Intersection, Interval, OmegaSubset,
                   Periodic, Progressions, Union, catalog_blocks)
from .weights import (AffineWeight, BaseSequence, LogFloorWeight, PiecewiseWeight, PlateauWeight,
                      RootFloorWeight, ScaledWeight, TableWeight, WeightFunction)

__all__ = ["load", "set_from", "weight_from", "measures_from", "map_from"]


def load(text_or_obj):
    """Accept a dict or a JSON string."""
    if isinstance(text_or_obj, (dict, list)):
        return text_or_obj
    try:
        return json.loads(text_or_obj)
    except (TypeError, json.JSONDecodeError) as e:
        raise ValidationError(f"not a JSON descriptor: {e}") from None


def _kind(d):
    if not isinstance(d, dict) or "kind" not in d:
        raise ValidationError("descriptor must be an object with a 'kind' field")
    return d["kind"]


def _params(p):
    out = {}
    for k, v in (p or {}).items():
        out[k] = set_from(v) if isinstance(v, dict) else v
    return out


def set_from(d) -> OmegaSubset:
    d = load(d)
    kind = _kind(d)
    try:
        if kind == "finite":
            els = [int(e) for e in d["elements"]]
            return FiniteSet(els) if els else EMPTY
        if kind == "interval":
            return Interval(int(d["lo"]), int(d["hi"]))
        if kind == "periodic":
            return Periodic(int(d["modulus"]), [int(r) for r in d["residues"]])
        if kind == "blocks":
            return catalog_blocks(d["generator"], **_params(d.get("params")))
        if kind == "progressions":
            segs = [(int(t), Fraction(int(a), int(b)), int(l0), int(l1)) for t, a, b, l0, l1 in d["segments"]]
            return Progressions(segs)
        if kind in ("union", "intersection", "difference"):
            cls = {"union": Union, "intersection": Intersection, "difference": Difference}[kind]
            return cls(set_from(d["left"]), set_from(d["right"]))
        if kind == "complement":
            return Complement(set_from(d["of"]))
        if kind == "full":
            return FULL
    except (KeyError, TypeError) as e:
        raise ValidationError(f"malformed {kind} set descriptor: {e}") from None
    raise ValidationError(f"unknown set kind {kind!r}")


def weight_from(d) -> WeightFunction:
    d = load(d)
    kind = _kind(d)
    try:
        if kind == "affine":
            return AffineWeight(int(d.get("a", 1)), int(d.get("b", 0)), int(d.get("c", 1)))
        if kind == "log_floor":
            return LogFloorWeight(int(d.get("base", 2)), int(d.get("shift", 2)), int(d.get("depth", 1)))
        if kind == "root_floor":
            return RootFloorWeight(int(d.get("p", 1)), int(d.get("q", 2)))
        if kind == "plateau_fL":
            b = d.get("base") or {"name": "factorial_succ"}
            return PlateauWeight(set_from(d["L"]), BaseSequence(b["name"], b.get("values")))
        if kind == "table":
            return TableWeight([int(v) for v in d["prefix"]], weight_from(d["tail"]))
        if kind == "synthesized":
            tail = weight_from(d["tail"]) if "tail" in d else None
            return PiecewiseWeight([tuple(int(x) for x in p) for p in d["pieces"]], tail)
        if kind == "scaled":
            return ScaledWeight(weight_from(d["of"]), int(d["factor"]))
    except (KeyError, TypeError) as e:
        raise ValidationError(f"malformed {kind} weight descriptor: {e}") from None
    raise ValidationError(f"unknown weight kind {kind!r}")


def measures_from(d) -> MeasureSequence:
    d = load(d)
    kind = _kind(d)
    try:
        if kind == "catalog":
            return catalog_measures(d["name"], **(d.get("params") or {}))
        if kind == "explicit":
            return explicit_measures(d["blocks"])
        if kind == "from_weight":
            return measures_from_weight(weight_from(d["weight"]), int(d["blocks"]))
        if kind == "antichain_member":
            M = set_from(d["M"])
            seq = gallery._restricted(M)
            seq.descriptor = d
            return seq
    except (KeyError, TypeError) as e:
        raise ValidationError(f"malformed {kind} measure descriptor: {e}") from None
    raise ValidationError(f"unknown measure kind {kind!r}")


def map_from(d):
    d = load(d)
    kind = _kind(d)
    if kind == "identity":
        return IDENTITY
    if kind == "iso_swap":
        return gallery.iso_swap()
    raise ValidationError(f"unknown map kind {kind!r}")
