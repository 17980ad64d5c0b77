"""JSON model files: categories, gradings and functors.

A model looks like::

    {"name": "bq", "field": "Q", "parameters": {"q": "1"},
     "vertices": ["x", "y"], "arrows": [{"id": "alpha", "src": "x", "tgt": "y"}],
     "relations": [{"src": "x", "tgt": "z'", "terms": [{"coef": "-q", "path": ["delta", "beta", "alpha"]}]}],
     "bound": null,
     "gradings": {"U": {"group": "Z", "arrow_degrees": {...}, "base_change": {...}, "degrees": {...}}},
     "functors": {"swap": {"arrow_images": {"alpha": [{"coef": 1, "path": ["beta"]}]}}}}

Coefficients may be numbers, fractions written as strings, or arithmetic
expressions in the declared parameters.  Paths list arrow ids right to left.
"""
from __future__ import annotations

import ast
import copy
import json
import operator
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path as FsPath

from . import grpkit
from .errors import ParseError, SchemaError, UnresolvedReference
from .grading import Grading
from .grpkit import AbelianGroup
from .linrep import LinComb, PresentedCategory, Quiver, build_category, functor_from_arrow_images
from .scalars import Field

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def eval_coef(value, params, where="$"):
    """Exact value of a coefficient: int, "3/4", or an expression such as "q - 2"."""
    if isinstance(value, bool):
        raise SchemaError("%s: boolean is not a coefficient" % where)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise SchemaError("%s: floating point coefficients are not allowed" % where)
    if not isinstance(value, str):
        raise SchemaError("%s: coefficient must be a number or a string" % where)
    try:
        tree = ast.parse(value.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError("%s: cannot parse coefficient %r" % (where, value)) from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in params:
                raise UnresolvedReference("%s: unknown parameter %r" % (where, node.id))
            return params[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ParseError("%s: unsupported expression %r" % (where, value))

    return ev(tree)


_CYCLIC = re.compile(r"^(?:C|Z/)(\d+)$")


def parse_group(obj, where="$"):
    """``{"rank": r, "torsion": [...]}`` or shorthand such as "Z", "C2", "Z+C3", "trivial"."""
    if isinstance(obj, dict):
        if set(obj) - {"rank", "torsion"}:
            raise SchemaError("%s: unexpected keys in group" % where)
        try:
            return AbelianGroup.from_json(obj)
        except (ValueError, TypeError) as exc:
            raise SchemaError("%s: %s" % (where, exc)) from exc
    if not isinstance(obj, str):
        raise SchemaError("%s: group must be an object or a string" % where)
    if obj.strip() in ("trivial", "1", "0"):
        return grpkit.TRIVIAL
    rank = 0
    orders = []
    for part in obj.replace(" ", "").split("+"):
        m = _CYCLIC.match(part)
        if part == "Z":
            rank += 1
        elif m:
            orders.append(int(m.group(1)))
        else:
            raise ParseError("%s: cannot read group %r" % (where, obj))
    return AbelianGroup.from_orders(rank, orders)


def parse_element(G, obj, where="$"):
    try:
        return grpkit.element_from_json(G, obj)
    except (ValueError, TypeError, AttributeError) as exc:
        raise SchemaError("%s: bad group element %r (%s)" % (where, obj, exc)) from exc


def _pair(key, cat, where):
    if not isinstance(key, str) or "->" not in key:
        raise SchemaError("%s: hom-space keys look like \"x->y\"" % where)
    x, y = key.split("->", 1)
    for v in (x, y):
        if v not in cat.objects:
            raise UnresolvedReference("%s: unknown vertex %r" % (where, v))
    return x, y


@dataclass
class Model:
    """A parsed model file with everything built."""

    name: str
    data: dict
    params: dict
    category: PresentedCategory
    gradings: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)

    def grading(self, name):
        try:
            return self.gradings[name]
        except KeyError:
            raise UnresolvedReference("no grading named %r (have: %s)" % (name, ", ".join(self.gradings) or "none"))

    def functor(self, name):
        try:
            return self.functors[name]
        except KeyError:
            raise UnresolvedReference("no functor named %r" % name)


def _require(obj, key, kind, where):
    if key not in obj:
        raise SchemaError("%s: missing %r" % (where, key))
    if not isinstance(obj[key], kind):
        raise SchemaError("%s.%s: wrong type" % (where, key))
    return obj[key]


def _parse_field(obj, params):
    if obj is None or obj == "Q":
        return Field.rationals()
    if isinstance(obj, dict) and set(obj) == {"Fp"}:
        p = obj["Fp"]
        p = int(eval_coef(p, params, "$.field.Fp"))
        return Field.prime(p)
    raise SchemaError("$.field: expected \"Q\" or {\"Fp\": p}")


def _lincomb(quiver, src, tgt, terms, params, fld, where):
    if not isinstance(terms, list) or not terms:
        raise SchemaError("%s: terms must be a nonempty list" % where)
    out = []
    for i, t in enumerate(terms):
        w = "%s[%d]" % (where, i)
        if not isinstance(t, dict):
            raise SchemaError("%s: term must be an object" % w)
        arrows = _require(t, "path", list, w)
        for a in arrows:
            if a not in quiver.arrow_index:
                raise UnresolvedReference("%s.path: unknown arrow %r" % (w, a))
        try:
            p = _path(quiver, arrows, src)
        except Exception as exc:
            raise SchemaError("%s.path: %s" % (w, exc)) from exc
        if p.source != src or p.target != tgt:
            raise SchemaError("%s.path: does not run from %s to %s" % (w, src, tgt))
        out.append((p, eval_coef(t.get("coef", 1), params, w + ".coef")))
    return LinComb(src, tgt, tuple(out))


def _path(quiver, arrows, at):
    from .linrep import path_from_arrows

    return path_from_arrows(quiver, arrows, at)


def build_quiver(data):
    verts = _require(data, "vertices", list, "$")
    arrows = _require(data, "arrows", list, "$")
    arr = []
    for i, a in enumerate(arrows):
        w = "$.arrows[%d]" % i
        if not isinstance(a, dict):
            raise SchemaError("%s: arrow must be an object" % w)
        aid, src, tgt = (_require(a, k, str, w) for k in ("id", "src", "tgt"))
        for v in (src, tgt):
            if v not in verts:
                raise UnresolvedReference("%s: unknown vertex %r" % (w, v))
        arr.append((aid, src, tgt))
    try:
        return Quiver(tuple(verts), tuple(arr))
    except ValueError as exc:
        raise SchemaError("$: %s" % exc) from exc


def build_model_category(data, params):
    fld = _parse_field(data.get("field"), params)
    q = build_quiver(data)
    rels = []
    for i, r in enumerate(data.get("relations", [])):
        w = "$.relations[%d]" % i
        if not isinstance(r, dict):
            raise SchemaError("%s: relation must be an object" % w)
        src, tgt = _require(r, "src", str, w), _require(r, "tgt", str, w)
        for v in (src, tgt):
            if v not in q.vertices:
                raise UnresolvedReference("%s: unknown vertex %r" % (w, v))
        rels.append(_lincomb(q, src, tgt, r.get("terms"), params, fld, w + ".terms"))
    bound = data.get("bound")
    if bound is not None:
        bound = int(eval_coef(bound, params, "$.bound"))
    return build_category(q, rels, bound, fld)


def build_grading(cat, spec, params=None, name="", where="$"):
    """Build a Grading from its JSON description."""
    params = params or {}
    if not isinstance(spec, dict):
        raise SchemaError("%s: grading must be an object" % where)
    G = parse_group(_require(spec, "group", (dict, str), where), where + ".group")
    arrow_deg = {}
    given = spec.get("arrow_degrees", {})
    for aid, d in given.items():
        if aid not in cat.quiver.arrow_index:
            raise UnresolvedReference("%s.arrow_degrees: unknown arrow %r" % (where, aid))
        arrow_deg[aid] = parse_element(G, d, "%s.arrow_degrees.%s" % (where, aid))
    for a in cat.quiver.arrows:
        arrow_deg.setdefault(a.id, G.zero)
    base_change = {}
    for key, vecs in spec.get("base_change", {}).items():
        k = _pair(key, cat, where + ".base_change")
        w = "%s.base_change.%s" % (where, key)
        if not isinstance(vecs, list):
            raise SchemaError("%s: expected a list of vectors" % w)
        base_change[k] = [[cat.field(eval_coef(c, params, w)) for c in v] for v in vecs]
    degrees = {}
    for key, ds in spec.get("degrees", {}).items():
        k = _pair(key, cat, where + ".degrees")
        degrees[k] = tuple(parse_element(G, d, "%s.degrees.%s" % (where, key)) for d in ds)
    for k in base_change:
        if k not in degrees:
            raise SchemaError("%s.degrees: a base change on %s->%s needs explicit degrees" % ((where,) + k))
    return Grading.from_arrow_degrees(cat, G, arrow_deg, base_change, degrees, name=name or spec.get("name", ""))


def build_functor_spec(cat, spec, params=None, where="$", target=None):
    params = params or {}
    target = target or cat
    images = {}
    for aid, terms in _require(spec, "arrow_images", dict, where).items():
        if aid not in cat.quiver.arrow_index:
            raise UnresolvedReference("%s.arrow_images: unknown arrow %r" % (where, aid))
        a = cat.quiver.arrow(aid)
        images[aid] = _lincomb(cat.quiver, a.src, a.tgt, terms, params, cat.field, "%s.arrow_images.%s" % (where, aid))
    return functor_from_arrow_images(cat, target, images)


def parse_model(source, overrides=None) -> Model:
    """Parse a model from a path, a JSON string or an already loaded dict.

    ``overrides`` replaces declared parameter values (e.g. ``{"q": "0"}``).
    """
    if isinstance(source, dict):
        data = copy.deepcopy(source)
    else:
        text = source
        if isinstance(source, FsPath) or (isinstance(source, str) and not source.lstrip().startswith("{")):
            try:
                text = FsPath(source).read_text()
            except OSError as exc:
                raise ParseError("cannot read %s: %s" % (source, exc)) from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError("invalid JSON: %s" % exc) from exc
    if not isinstance(data, dict) or not data:
        raise SchemaError("$: model must be a nonempty object")
    for key in ("vertices", "arrows"):
        if key not in data:
            raise SchemaError("$: missing %r" % key)
    raw = dict(data.get("parameters", {}))
    raw.update(overrides or {})
    params = {}
    for k, v in raw.items():
        if k not in data.get("parameters", {}):
            raise UnresolvedReference("$.parameters: model has no parameter %r" % k)
        params[k] = eval_coef(v, {}, "$.parameters.%s" % k)
    data["parameters"] = {k: str(v) for k, v in params.items()}
    cat = build_model_category(data, params)
    model = Model(data.get("name", ""), data, params, cat)
    for gname, spec in data.get("gradings", {}).items():
        model.gradings[gname] = build_grading(cat, spec, params, gname, "$.gradings.%s" % gname)
    for fname, spec in data.get("functors", {}).items():
        model.functors[fname] = build_functor_spec(cat, spec, params, "$.functors.%s" % fname)
    return model


def emit_model(model: Model) -> dict:
    """JSON form of a model (the parsed input with parameters normalized)."""
    return copy.deepcopy(model.data)


def category_to_json(cat: PresentedCategory) -> dict:
    """Model JSON describing ``cat`` (relations as the reduced generators)."""
    q = cat.quiver
    rels = []
    for r in cat.relations:
        rels.append(
            {
                "src": r.source,
                "tgt": r.target,
                "terms": [{"coef": str(c), "path": list(p.arrows)} for p, c in r.terms],
            }
        )
    return {
        "field": "Q" if cat.field.char == 0 else {"Fp": cat.field.char},
        "vertices": list(q.vertices),
        "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in q.arrows],
        "relations": rels,
        "bound": cat.bound,
    }


def grading_from_json(cat, obj, name=""):
    """Inverse of :meth:`Grading.to_json`."""
    return build_grading(cat, obj, {}, name)


def dump(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is not None:
        FsPath(path).write_text(text)
    return text
