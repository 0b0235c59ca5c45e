"""JSON instance files with exact ``"p/q"`` rationals.

Layout::

    {"version": "1", "kind": "set" | "map" | "dual-suite", "seed": int | null,
     "payload": {...}, "expect": {...}}

A constraint is ``{"a": ["p/q", ...], "rel": "<" | "<=", "b": "p/q"}``.
"""
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from .conjugation import DualElement
from .core import EPolyhedron, LinConstraint, STRICT, WEAK, rat_str
from .errors import DimensionMismatch, MalformedInstance
from .geometry import EUnion
from .setvalued import ConeK, SetValuedMap

VERSION = "1"
KINDS = ("set", "map", "dual-suite")
_RAT = re.compile(r"^\s*[+-]?\d+(/\d+)?\s*$")


def parse_rat(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise MalformedInstance("rational must be a \"p/q\" string, got %r" % (s,))
    if isinstance(s, int):
        return Fraction(s)
    if not _RAT.match(s):
        raise MalformedInstance("bad rational %r (expected p/q)" % (s,))
    v = Fraction(s.strip())
    return v


def parse_vec(items) -> Tuple[Fraction, ...]:
    if not isinstance(items, list):
        raise MalformedInstance("expected a list of rationals, got %r" % (items,))
    return tuple(parse_rat(v) for v in items)


def parse_point(text: str) -> Tuple[Fraction, ...]:
    """Comma separated rationals, as given on the command line."""
    text = text.strip()
    if not text:
        return ()
    return tuple(parse_rat(p) for p in text.split(","))


def vec_json(v) -> List[str]:
    return [rat_str(x) for x in v]


def _field(obj: dict, key: str):
    if not isinstance(obj, dict) or key not in obj:
        raise MalformedInstance("missing field %r" % (key,))
    return obj[key]


def _dim(obj: dict, key: str) -> int:
    v = _field(obj, key)
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise MalformedInstance("%s must be a non-negative integer" % key)
    return v


def constraint_json(c: LinConstraint) -> dict:
    return {"a": vec_json(c.normal), "rel": "<" if c.strict else "<=", "b": rat_str(c.bound)}


def parse_constraint(obj) -> LinConstraint:
    rel = _field(obj, "rel")
    if rel not in ("<", "<="):
        raise MalformedInstance("rel must be '<' or '<=', got %r" % (rel,))
    return LinConstraint(parse_vec(_field(obj, "a")), parse_rat(_field(obj, "b")), STRICT if rel == "<" else WEAK)


def poly_json(P: EPolyhedron) -> dict:
    return {"constraints": [constraint_json(c) for c in P.constraints]}


def parse_poly(obj, dim: int) -> EPolyhedron:
    cons = _field(obj, "constraints")
    if not isinstance(cons, list):
        raise MalformedInstance("constraints must be a list")
    parsed = tuple(parse_constraint(c) for c in cons)
    for c in parsed:
        if len(c.normal) != dim:
            raise MalformedInstance("constraint of length %d in a piece of dim %d" % (len(c.normal), dim))
    return EPolyhedron(dim, parsed)


def union_json(U: EUnion) -> dict:
    return {"dim": U.dim, "pieces": [poly_json(p) for p in U.pieces]}


def parse_union(obj) -> EUnion:
    dim = _dim(obj, "dim")
    pieces = _field(obj, "pieces")
    if not isinstance(pieces, list):
        raise MalformedInstance("pieces must be a list")
    return EUnion(dim, tuple(parse_poly(p, dim) for p in pieces))


def cone_json(K: ConeK) -> dict:
    return {"constraints": [vec_json(c.normal) for c in K.constraints]}


def parse_cone(obj) -> ConeK:
    if not isinstance(obj, dict):
        raise MalformedInstance("cone must be an object")
    if "generators" in obj:
        gens = obj["generators"]
        if not isinstance(gens, list) or not gens:
            raise MalformedInstance("cone generators must be a nonempty list")
        return ConeK.from_generators([parse_vec(g) for g in gens])
    normals = _field(obj, "constraints")
    if not isinstance(normals, list) or not normals:
        raise MalformedInstance("cone constraints must be a nonempty list")
    return ConeK.from_constraints([parse_vec(a) for a in normals])


def map_json(f: SetValuedMap) -> dict:
    d = {"dimX": f.dimX, "dimZ": f.dimZ, "cone": cone_json(f.cone),
         "pieces": [poly_json(p) for p in f.graph.pieces]}
    if f.full_value_regions:
        d["full_value_regions"] = [poly_json(r) for r in f.full_value_regions]
    return d


def parse_map(obj) -> SetValuedMap:
    n, m = _dim(obj, "dimX"), _dim(obj, "dimZ")
    if n == 0 or m == 0:
        raise MalformedInstance("dimX and dimZ must be positive")
    cone = parse_cone(obj["cone"]) if "cone" in obj else ConeK.orthant(m)
    pieces = _field(obj, "pieces")
    if not isinstance(pieces, list):
        raise MalformedInstance("pieces must be a list")
    regions = [parse_poly(r, n) for r in obj.get("full_value_regions", [])]
    regions += [EPolyhedron.point(parse_vec(p)) for p in obj.get("full_value_points", [])]
    graph = EUnion(n + m, tuple(parse_poly(p, n + m) for p in pieces))
    return SetValuedMap(n, m, graph, cone, tuple(regions))


def dual_json(w: DualElement) -> dict:
    return {"xstar": vec_json(w.xstar), "ystar": vec_json(w.ystar), "zstar": vec_json(w.zstar),
            "alpha": rat_str(w.alpha)}


def parse_dual(obj) -> DualElement:
    return DualElement(parse_vec(_field(obj, "xstar")), parse_vec(_field(obj, "ystar")),
                       parse_vec(_field(obj, "zstar")), parse_rat(_field(obj, "alpha")))


def parse_dual_text(text: str) -> DualElement:
    """``"x*;y*;z*;alpha"`` with comma separated vectors."""
    parts = text.split(";")
    if len(parts) != 4:
        raise MalformedInstance("dual must be 'x*;y*;z*;alpha'")
    alpha = parse_point(parts[3])
    if len(alpha) != 1:
        raise MalformedInstance("alpha must be a single rational")
    return DualElement(parse_point(parts[0]), parse_point(parts[1]), parse_point(parts[2]), alpha[0])


@dataclass
class Instance:
    kind: str
    payload: Any
    seed: Optional[int] = None
    expect: Dict[str, Any] = field(default_factory=dict)
    operands: Tuple[EUnion, ...] = ()
    duals: Tuple[DualElement, ...] = ()
    version: str = VERSION


def instance_json(inst: Instance) -> dict:
    if inst.kind == "set":
        payload = union_json(inst.payload)
        if inst.operands:
            payload["operands"] = [union_json(u) for u in inst.operands]
    elif inst.kind == "map":
        payload = map_json(inst.payload)
    else:
        payload = {"map": map_json(inst.payload), "duals": [dual_json(w) for w in inst.duals]}
    d = {"version": inst.version, "kind": inst.kind, "seed": inst.seed, "payload": payload}
    if inst.expect:
        d["expect"] = inst.expect
    return d


def dumps(inst: Instance) -> str:
    return json.dumps(instance_json(inst), indent=2) + "\n"


def parse_instance(obj) -> Instance:
    if not isinstance(obj, dict):
        raise MalformedInstance("instance must be a JSON object")
    version = _field(obj, "version")
    if version != VERSION:
        raise MalformedInstance("unsupported version %r" % (version,))
    kind = _field(obj, "kind")
    if kind not in KINDS:
        raise MalformedInstance("kind must be one of %s" % (KINDS,))
    seed = obj.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise MalformedInstance("seed must be an integer or null")
    expect = obj.get("expect", {})
    if not isinstance(expect, dict):
        raise MalformedInstance("expect must be an object")
    payload = _field(obj, "payload")
    if kind == "set":
        ops = tuple(parse_union(u) for u in payload.get("operands", [])) if isinstance(payload, dict) else ()
        return Instance(kind, parse_union(payload), seed, expect, ops, version=version)
    if kind == "map":
        return Instance(kind, parse_map(payload), seed, expect, version=version)
    f = parse_map(_field(payload, "map"))
    duals = tuple(parse_dual(w) for w in _field(payload, "duals"))
    for w in duals:
        w.check(f)
    return Instance(kind, f, seed, expect, duals=duals, version=version)


def loads(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInstance("invalid JSON: %s" % e) from None
    try:
        return parse_instance(obj)
    except DimensionMismatch as e:
        # inconsistent sizes inside one file are a format error
        raise MalformedInstance(str(e)) from None


def load(path: str) -> Instance:
    with open(path) as fh:
        return loads(fh.read())
