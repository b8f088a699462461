"""Build weight sequences and weight functions from portable descriptors.

Two descriptor forms are accepted everywhere an input is expected:

* a mapping, or its JSON text, or ``@path`` naming a JSON file: sequence
  descriptors carry a ``family`` key, function descriptors a ``kind`` key,
  with nested descriptors for derived objects.  This is exactly what
  ``WeightSequence.spec`` / ``WeightFunction.spec()`` hold, so every
  constructed object can be serialized and re-ingested.
* a compact inline form for the command line: ``NAME:n1,n2,...`` or
  ``NAME(arg, ...)``, e.g. ``gevrey:2``, ``power:0.5``, ``assoc(gevrey:1)``,
  ``shift(gevrey(2), 0.5)``.  Inside parentheses the colon form binds a
  single number; use the parenthesized form for multi-number arguments
  there (``explicit(1,4,8,32)``).

Objects built here evaluate identically to the originals that emitted the
descriptor; re-parsing an emitted descriptor is the supported way to move
constructions between runs.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence, Union

import numpy as np

from .verdict import InvalidSpec
from .sequences import (WeightSequence, explicit, factorial_shift, gevrey, hat,
                        power, qgevrey)
from .functions import (KappaPower, LogPower, NormalizedShift, PiecewiseGlue,
                        PowerLaw, WeightFunction, power_substitute)

SpecLike = Union[str, Mapping[str, Any], WeightSequence, WeightFunction]


# ---------------------------------------------------------------------------
# inline grammar

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


@dataclass
class _Node:
    name: str
    args: list  # floats and nested _Node entries


def _skip_ws(text: str, i: int) -> int:
    while i < len(text) and text[i].isspace():
        i += 1
    return i


def _parse_number(text: str, i: int):
    m = _NUMBER_RE.match(text, i)
    if m is None:
        return None, i
    return float(m.group(0)), m.end()


def _parse_expr(text: str, i: int, depth: int):
    i = _skip_ws(text, i)
    m = _NAME_RE.match(text, i)
    if m is None:
        raise InvalidSpec(f"expected a name at position {i} in {text!r}")
    node = _Node(m.group(0), [])
    i = _skip_ws(text, m.end())
    if i < len(text) and text[i] == "(":
        i = _skip_ws(text, i + 1)
        while True:
            if i >= len(text):
                raise InvalidSpec(f"unclosed '(' in {text!r}")
            if text[i] == ")":
                i += 1
                break
            value, j = _parse_number(text, i)
            # a bare number is an argument only if it ends the argument slot;
            # otherwise it was the start of something malformed
            if value is not None and _skip_ws(text, j) < len(text) \
                    and text[_skip_ws(text, j)] in ",)":
                node.args.append(value)
                i = _skip_ws(text, j)
            else:
                sub, i = _parse_expr(text, i, depth + 1)
                node.args.append(sub)
                i = _skip_ws(text, i)
            if i < len(text) and text[i] == ",":
                i = _skip_ws(text, i + 1)
    elif i < len(text) and text[i] == ":":
        i = _skip_ws(text, i + 1)
        while True:
            value, j = _parse_number(text, i)
            if value is None:
                raise InvalidSpec(f"expected a number after ':' in {text!r}")
            node.args.append(value)
            i = _skip_ws(text, j)
            # inside parentheses the colon form binds one number; the comma
            # belongs to the enclosing argument list
            if depth == 0 and i < len(text) and text[i] == ",":
                i = _skip_ws(text, i + 1)
            else:
                break
    return node, i


def parse_inline(text: str) -> _Node:
    """Parse the compact ``NAME:...`` / ``NAME(...)`` descriptor form."""
    node, i = _parse_expr(text, 0, 0)
    i = _skip_ws(text, i)
    if i != len(text):
        raise InvalidSpec(f"trailing input {text[i:]!r} in descriptor {text!r}")
    return node


# ---------------------------------------------------------------------------
# builders

def _numbers(node: _Node, count: int, at_least: bool = False) -> list:
    vals = node.args
    ok = len(vals) >= count if at_least else len(vals) == count
    if not ok or not all(isinstance(v, float) for v in vals):
        raise InvalidSpec(f"{node.name} expects "
                          f"{'at least ' if at_least else ''}{count} number(s)")
    return vals


def _descendant_seq(base: WeightSequence, r: float) -> WeightSequence:
    from .constructions import descendant
    return descendant(base, r).S


def _seq_from_node(node: _Node) -> WeightSequence:
    name = node.name.lower()
    if name == "gevrey":
        return gevrey(_numbers(node, 1)[0])
    if name == "qgevrey":
        return qgevrey(_numbers(node, 1)[0])
    if name == "explicit":
        return explicit(_numbers(node, 2, at_least=True))
    if name in ("power", "shift", "descendant"):
        if len(node.args) != 2 or not isinstance(node.args[0], _Node) \
                or not isinstance(node.args[1], float):
            raise InvalidSpec(f"{name} expects (base-sequence, number)")
        base = _seq_from_node(node.args[0])
        x = node.args[1]
        if name == "power":
            return power(base, x)
        if name == "shift":
            return factorial_shift(base, x)
        return _descendant_seq(base, x)
    if name == "hat":
        if len(node.args) != 1 or not isinstance(node.args[0], _Node):
            raise InvalidSpec("hat expects a single base sequence")
        return hat(_seq_from_node(node.args[0]))
    raise InvalidSpec(f"unknown sequence family {node.name!r}")


def _seq_from_mapping(m: Mapping[str, Any]) -> WeightSequence:
    try:
        family = m["family"]
    except (KeyError, TypeError):
        raise InvalidSpec("sequence descriptor needs a 'family' key") from None
    try:
        if family == "gevrey":
            return gevrey(float(m["s"]))
        if family == "qgevrey":
            return qgevrey(float(m["q"]))
        if family == "explicit":
            return explicit([float(v) for v in m["values"]])
        if family == "power":
            return power(_seq_from_spec(m["base"]), float(m["r"]))
        if family == "shift":
            return factorial_shift(_seq_from_spec(m["base"]), float(m["eps"]))
        if family == "hat":
            return hat(_seq_from_spec(m["base"]))
        if family == "descendant":
            return _descendant_seq(_seq_from_spec(m["base"]), float(m["r"]))
    except KeyError as exc:
        raise InvalidSpec(f"sequence family {family!r} lacks field {exc}") from None
    raise InvalidSpec(f"unknown sequence family {family!r}")


def _load_mapping(path: str) -> Mapping[str, Any]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidSpec(f"cannot read descriptor file {path!r}: {exc}") from None
    return _loads(text)


def _loads(text: str) -> Mapping[str, Any]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidSpec(f"invalid JSON descriptor: {exc}") from None
    if not isinstance(data, dict):
        raise InvalidSpec("JSON descriptor must be an object")
    return data


def _seq_from_spec(spec: SpecLike) -> WeightSequence:
    if isinstance(spec, WeightSequence):
        return spec
    if isinstance(spec, Mapping):
        return _seq_from_mapping(spec)
    if isinstance(spec, str):
        text = spec.strip()
        if text.startswith("@"):
            return _seq_from_mapping(_load_mapping(text[1:]))
        if text.startswith("{"):
            return _seq_from_mapping(_loads(text))
        return _seq_from_node(parse_inline(text))
    raise InvalidSpec(f"cannot build a sequence from {type(spec).__name__}")


def make_sequence(spec: SpecLike) -> WeightSequence:
    """Weight sequence from a descriptor (mapping, JSON text, @file, inline)."""
    return _seq_from_spec(spec)


def _fun_from_node(node: _Node) -> WeightFunction:
    name = node.name.lower()
    if name == "power":
        vals = _numbers(node, 1, at_least=True)
        if len(vals) > 2:
            raise InvalidSpec("power expects exponent and optional coefficient")
        return PowerLaw(*vals)
    if name == "logpower":
        vals = _numbers(node, 1, at_least=True)
        if len(vals) > 2:
            raise InvalidSpec("logpower expects power and optional coefficient")
        return LogPower(*vals)
    if name == "assoc":
        if len(node.args) != 1 or not isinstance(node.args[0], _Node):
            raise InvalidSpec("assoc expects a single sequence argument")
        from .constructions import associated_function
        return associated_function(_seq_from_node(node.args[0]))
    if name in ("subst", "kappa"):
        if not node.args or not isinstance(node.args[0], _Node):
            raise InvalidSpec(f"{name} expects (base-function, number)")
        base = _fun_from_node(node.args[0])
        rest = node.args[1:]
        if not all(isinstance(v, float) for v in rest) or len(rest) > 1:
            raise InvalidSpec(f"{name} expects (base-function, number)")
        if name == "subst":
            if not rest:
                raise InvalidSpec("subst needs the substitution exponent")
            return power_substitute(base, rest[0])
        return KappaPower(base, rest[0] if rest else 1.0)
    if name in ("normalized", "norm"):
        if len(node.args) != 1 or not isinstance(node.args[0], _Node):
            raise InvalidSpec("normalized expects a single base function")
        return NormalizedShift(_fun_from_node(node.args[0]))
    if name == "glue":
        raise InvalidSpec("glued functions carry arrays; pass them as JSON "
                          "descriptors (@file or inline JSON)")
    raise InvalidSpec(f"unknown function kind {node.name!r}")


def _fun_from_mapping(m: Mapping[str, Any]) -> WeightFunction:
    try:
        kind = m["kind"]
    except (KeyError, TypeError):
        raise InvalidSpec("function descriptor needs a 'kind' key") from None
    try:
        if kind == "power":
            return PowerLaw(float(m["a"]), float(m.get("c", 1.0)))
        if kind == "logpower":
            return LogPower(float(m["k"]), float(m.get("c", 1.0)))
        if kind == "subst":
            return power_substitute(_fun_from_spec(m["base"]), float(m["r"]))
        if kind == "assoc":
            from .constructions import associated_function
            return associated_function(_seq_from_spec(m["sequence"]))
        if kind == "kappa":
            return KappaPower(_fun_from_spec(m["base"]), float(m["r"]))
        if kind == "normalized":
            return NormalizedShift(_fun_from_spec(m["base"]))
        if kind == "glue":
            return PiecewiseGlue(_fun_from_spec(m["base"]),
                                 [float(v) for v in m["breakpoints"]],
                                 [float(v) for v in m["multipliers"]],
                                 [float(v) for v in m["offsets"]])
    except KeyError as exc:
        raise InvalidSpec(f"function kind {kind!r} lacks field {exc}") from None
    raise InvalidSpec(f"unknown function kind {kind!r}")


def _fun_from_spec(spec: SpecLike) -> WeightFunction:
    if isinstance(spec, WeightFunction):
        return spec
    if isinstance(spec, Mapping):
        return _fun_from_mapping(spec)
    if isinstance(spec, str):
        text = spec.strip()
        if text.startswith("@"):
            return _fun_from_mapping(_load_mapping(text[1:]))
        if text.startswith("{"):
            return _fun_from_mapping(_loads(text))
        return _fun_from_node(parse_inline(text))
    raise InvalidSpec(f"cannot build a function from {type(spec).__name__}")


def make_function(spec: SpecLike) -> WeightFunction:
    """Weight function from a descriptor (mapping, JSON text, @file, inline)."""
    return _fun_from_spec(spec)


# ---------------------------------------------------------------------------
# serialization helpers

def spec_of(obj: Union[WeightSequence, WeightFunction]) -> Mapping[str, Any]:
    """The portable descriptor of a sequence or function, if it has one."""
    if isinstance(obj, WeightSequence):
        if obj.spec is None:
            raise InvalidSpec(f"sequence {obj.label!r} has no portable descriptor")
        return obj.spec
    return obj.spec()


def dump_spec(obj: Union[WeightSequence, WeightFunction], path: str) -> None:
    Path(path).write_text(json.dumps(spec_of(obj), sort_keys=True, indent=2)
                          + "\n")


def function_csv(fn: WeightFunction, ts: Sequence[float]) -> str:
    """Sampled values, columns ``t,value``."""
    ts = np.asarray(ts, dtype=float)
    vals = fn.eval(ts)
    lines = ["t,value"]
    lines += [f"{t:.17g},{v:.17g}" for t, v in zip(ts, vals)]
    return "\n".join(lines) + "\n"


def sequence_csv(M: WeightSequence, P: int) -> str:
    """Log values up to index P, columns ``p,log_value``.

    Values themselves overflow float64 for quite small P on factorial-type
    sequences, so the sampled column is the log.
    """
    P = min(P, M.max_index if M.max_index is not None else P)
    logs = M.log_values(P)
    lines = ["p,log_value"]
    lines += [f"{p},{v:.17g}" for p, v in enumerate(logs)]
    return "\n".join(lines) + "\n"


def matrix_csv(matrix) -> str:
    """Matrix rows, columns ``j,l,W`` (W = exp of the stored log value)."""
    lines = ["j,l,W"]
    lines += [f"{j},{l:.17g},{w:.17g}" for j, l, w in matrix.rows()]
    return "\n".join(lines) + "\n"
