"""Strict parser for function-spec documents.

A document is a JSON tree. Each node is an object carrying either an
``"atom"`` key or an ``"op"`` key, plus that node's parameter fields and
nothing else; unknown keys are errors. Combinator nodes hold their child
under ``"f"``. Vectors are JSON arrays of decimals, matrices arrays of
arrays.

Atoms: affine(a, c), quadratic(Q, b, c), scaled_norm(ell, center),
indicator_point(p), indicator_ball(center, radius), indicator_box(lo, hi),
indicator_halfspace(a, beta), support_ball(center, radius),
support_box(lo, hi).

Ops: tilt(f, a), translate(f, t), add_const(f, c), envelope(f, lambda).

The Greek spellings from the calculus notation are accepted as aliases for
ell, beta, and lambda.
"""

from __future__ import annotations

import json

from . import functions as fn
from .errors import SpecParseError

_ALIASES = {"ℓ": "ell", "β": "beta", "λ": "lambda"}

_ATOM_FIELDS = {
    "affine": {"a": True, "c": False},
    "quadratic": {"Q": True, "b": False, "c": False},
    "scaled_norm": {"ell": True, "center": True},
    "indicator_point": {"p": True},
    "indicator_ball": {"center": True, "radius": True},
    "indicator_box": {"lo": True, "hi": True},
    "indicator_halfspace": {"a": True, "beta": True},
    "support_ball": {"center": True, "radius": True},
    "support_box": {"lo": True, "hi": True},
}

_OP_FIELDS = {
    "tilt": {"f": True, "a": True},
    "translate": {"f": True, "t": True},
    "add_const": {"f": True, "c": True},
    "envelope": {"f": True, "lambda": True},
}


def parse_document(text: str) -> fn.ConvexFunction:
    """Parse a function-spec document into a catalog tree."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(
            f"invalid document at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return build_tree(data)


def load_document(path: str) -> fn.ConvexFunction:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_document(handle.read())


def build_tree(node) -> fn.ConvexFunction:
    if not isinstance(node, dict):
        raise SpecParseError(f"expected an object node, got {type(node).__name__}")
    node = {_ALIASES.get(k, k): v for k, v in node.items()}
    has_atom = "atom" in node
    has_op = "op" in node
    if has_atom == has_op:
        raise SpecParseError("each node needs exactly one of 'atom' or 'op'")
    if has_atom:
        return _build_atom(node)
    return _build_op(node)


def _take_fields(node: dict, kind: str, table: dict) -> dict:
    spec = table[kind]
    extra = set(node) - set(spec) - {"atom", "op"}
    if extra:
        raise SpecParseError(f"unknown keys {sorted(extra)} on '{kind}' node")
    missing = [k for k, required in spec.items() if required and k not in node]
    if missing:
        raise SpecParseError(f"missing keys {missing} on '{kind}' node")
    return node


def _num(node, key, default=None):
    v = node.get(key, default)
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise SpecParseError(f"field '{key}' must be a number")
    return float(v)


def _vec(node, key):
    v = node.get(key)
    if not isinstance(v, list) or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in v
    ):
        raise SpecParseError(f"field '{key}' must be an array of numbers")
    return [float(x) for x in v]


def _mat(node, key):
    v = node.get(key)
    if not isinstance(v, list) or not all(isinstance(row, list) for row in v):
        raise SpecParseError(f"field '{key}' must be an array of arrays")
    return [[float(x) for x in row] for row in v]


def _build_atom(node: dict) -> fn.ConvexFunction:
    kind = node["atom"]
    if kind not in _ATOM_FIELDS:
        raise SpecParseError(f"unknown atom '{kind}'")
    node = _take_fields(node, kind, _ATOM_FIELDS)
    try:
        if kind == "affine":
            return fn.Affine(_vec(node, "a"), _num(node, "c", 0.0))
        if kind == "quadratic":
            b = _vec(node, "b") if "b" in node else None
            return fn.Quadratic(_mat(node, "Q"), b, _num(node, "c", 0.0))
        if kind == "scaled_norm":
            return fn.ScaledNorm(_num(node, "ell"), _vec(node, "center"))
        if kind == "indicator_point":
            return fn.IndicatorPoint(_vec(node, "p"))
        if kind == "indicator_ball":
            return fn.IndicatorBall(_vec(node, "center"), _num(node, "radius"))
        if kind == "indicator_box":
            return fn.IndicatorBox(_vec(node, "lo"), _vec(node, "hi"))
        if kind == "indicator_halfspace":
            return fn.IndicatorHalfspace(_vec(node, "a"), _num(node, "beta"))
        if kind == "support_ball":
            return fn.SupportBall(_vec(node, "center"), _num(node, "radius"))
        if kind == "support_box":
            return fn.SupportBox(_vec(node, "lo"), _vec(node, "hi"))
    except (ValueError, SpecParseError):
        raise
    except Exception as exc:  # dimension mismatches et al., rewrapped with context
        raise SpecParseError(f"invalid '{kind}' node: {exc}") from None
    raise AssertionError("unreachable")


def _build_op(node: dict) -> fn.ConvexFunction:
    kind = node["op"]
    if kind not in _OP_FIELDS:
        raise SpecParseError(f"unknown op '{kind}'")
    node = _take_fields(node, kind, _OP_FIELDS)
    child = build_tree(node["f"])
    try:
        if kind == "tilt":
            return fn.Tilt(child, _vec(node, "a"))
        if kind == "translate":
            return fn.Translate(child, _vec(node, "t"))
        if kind == "add_const":
            return fn.AddConst(child, _num(node, "c"))
        if kind == "envelope":
            return fn.Envelope(child, _num(node, "lambda"))
    except (ValueError, SpecParseError):
        raise
    except Exception as exc:
        raise SpecParseError(f"invalid '{kind}' node: {exc}") from None
    raise AssertionError("unreachable")


def to_document(f: fn.ConvexFunction) -> dict:
    """Inverse of build_tree for catalog trees expressible in the format."""
    if isinstance(f, fn.Affine):
        return {"atom": "affine", "a": f.a.tolist(), "c": f.c}
    if isinstance(f, fn.Quadratic):
        return {"atom": "quadratic", "Q": f.Q.tolist(), "b": f.b.tolist(), "c": f.c}
    if isinstance(f, fn.ScaledNorm):
        return {"atom": "scaled_norm", "ell": f.ell, "center": f.center.tolist()}
    if isinstance(f, fn.IndicatorPoint):
        return {"atom": "indicator_point", "p": f.p.tolist()}
    if isinstance(f, fn.IndicatorBall):
        return {"atom": "indicator_ball", "center": f.center.tolist(), "radius": f.radius}
    if isinstance(f, fn.IndicatorBox):
        return {"atom": "indicator_box", "lo": f.lo.tolist(), "hi": f.hi.tolist()}
    if isinstance(f, fn.IndicatorHalfspace):
        return {"atom": "indicator_halfspace", "a": f.a.tolist(), "beta": f.beta}
    if isinstance(f, fn.SupportBall):
        return {"atom": "support_ball", "center": f.center.tolist(), "radius": f.radius}
    if isinstance(f, fn.SupportBox):
        return {"atom": "support_box", "lo": f.lo.tolist(), "hi": f.hi.tolist()}
    if isinstance(f, fn.Tilt):
        return {"op": "tilt", "f": to_document(f.f), "a": f.a.tolist()}
    if isinstance(f, fn.Translate):
        return {"op": "translate", "f": to_document(f.f), "t": f.t.tolist()}
    if isinstance(f, fn.AddConst):
        return {"op": "add_const", "f": to_document(f.f), "c": f.c}
    if isinstance(f, fn.Envelope):
        return {"op": "envelope", "f": to_document(f.f), "lambda": f.lam}
    raise SpecParseError(f"{type(f).__name__} is not expressible in the document format")
