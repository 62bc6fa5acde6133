"""Canonical text for presentations; ``parse_presentation(render(p)) == p``."""
from __future__ import annotations

import math

from .nodes import (
    AlgebraPresentation, BinOp, Call, Const, Identity, Node, Num, Power, Product, Sum, Sym,
)

__all__ = ["render_presentation", "render_expression", "format_complex"]

# binding strength of each node when printed
_SUM, _PRODUCT, _FACTOR, _ATOM = 1, 2, 3, 4


def _level(node: Node) -> int:
    if isinstance(node, Sum):
        return _SUM
    if isinstance(node, Product):
        return _PRODUCT
    if isinstance(node, BinOp):
        return _FACTOR
    if isinstance(node, Num) and node.value.real != 0 and node.value.imag != 0:
        return _SUM
    if isinstance(node, Num) and (math.copysign(1, node.value.real) < 0 or math.copysign(1, node.value.imag) < 0):
        return _SUM
    return _ATOM


def format_complex(z: complex) -> str:
    """Shortest text that parses back to exactly ``z``."""
    z = complex(z)
    re_, im = z.real, z.imag
    if im == 0 and math.copysign(1, im) > 0:
        return repr(re_)
    if re_ == 0 and math.copysign(1, re_) > 0:
        return repr(im) + "i" if im >= 0 else "-" + repr(-im) + "i"
    sign = "+" if math.copysign(1, im) > 0 else "-"
    return f"{re_!r}{sign}{abs(im)!r}i"


def _num(node: Num) -> str:
    return format_complex(node.value)


def _wrap(node: Node, min_level: int) -> str:
    text = render_expression(node)
    return f"({text})" if _level(node) < min_level else text


def render_expression(node: Node) -> str:
    if isinstance(node, Num):
        return _num(node)
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Identity):
        return "I"
    if isinstance(node, Sym):
        return node.name
    if isinstance(node, Sum):
        parts = []
        for k, (sign, term) in enumerate(node.terms):
            text = _wrap(term, _PRODUCT)
            if k == 0:
                parts.append(("-" if sign < 0 else "") + text)
            else:
                parts.append(("- " if sign < 0 else "+ ") + text)
        return " ".join(parts)
    if isinstance(node, Product):
        return " ".join(_wrap(f, _FACTOR) for f in node.factors)
    if isinstance(node, BinOp):
        return f"{_wrap(node.left, _FACTOR)}{node.op}{_wrap(node.right, _ATOM)}"
    if isinstance(node, Power):
        return f"power({render_expression(node.base)}, {node.exponent})"
    if isinstance(node, Call):
        return f"{node.func}(" + ", ".join(render_expression(a) for a in node.args) + ")"
    raise TypeError(f"not an expression node: {node!r}")


def render_presentation(p: AlgebraPresentation) -> str:
    lines = [f"algebra {p.name};"]
    if p.generators:
        lines.append("gen " + ", ".join(p.generators) + ";")
    for name, value in p.parameters:
        lines.append(f"param {name} = {format_complex(value)};")
    for r in p.relations:
        lines.append(f"rel {r.label}: {render_expression(r.lhs)} = {render_expression(r.rhs)};")
    return "\n".join(lines) + "\n"
