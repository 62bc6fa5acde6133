"""Scalar folding: inline parameter values and collapse constant subtrees.

Used to compare presets structurally at special parameter values (for example
that a deformed algebra at nu = 0 has exactly the bosonic relations).
"""
from __future__ import annotations

from typing import Mapping

from .evaluate import eval_scalar
from .nodes import (
    AlgebraPresentation, BinOp, Call, Const, Identity, Node, Num, Power, Product,
    Relation, Sum, Sym, is_scalar,
)

__all__ = ["fold_expression", "fold_presentation"]


def _is(node: Node, value: complex) -> bool:
    return isinstance(node, Num) and node.value == value


def fold_expression(node: Node, params: Mapping[str, complex]) -> Node:
    """Return an equivalent tree with parameters inlined and scalars folded.

    The identity folds to ``Num(1)``; a scalar in matrix position already means
    that multiple of the identity, so the two print and compare the same.
    """
    if isinstance(node, Identity):
        return Num(1)
    if is_scalar(node):
        return Num(eval_scalar(node, params))
    if isinstance(node, Sym):
        return node
    if isinstance(node, Sum):
        const = 0j
        terms = []
        for sign, t in node.terms:
            t = fold_expression(t, params)
            if isinstance(t, Num):
                const += sign * t.value
            else:
                terms.append((sign, t))
        if const != 0:
            terms.insert(0, (1, Num(const)))
        if not terms:
            return Num(0)
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))
    if isinstance(node, Product):
        coeff = 1 + 0j
        factors = []
        for f in node.factors:
            f = fold_expression(f, params)
            if isinstance(f, Num):
                coeff *= f.value
            elif isinstance(f, BinOp) and f.op == "*" and isinstance(f.left, Num):
                coeff *= f.left.value
                factors.append(f.right)
            else:
                factors.append(f)
        if coeff == 0:
            return Num(0)
        body = factors[0] if len(factors) == 1 else Product(tuple(factors))
        return body if coeff == 1 else BinOp("*", Num(coeff), body)
    if isinstance(node, BinOp):
        left = fold_expression(node.left, params)
        right = fold_expression(node.right, params)
        if node.op == "/":
            # right is scalar, so it folded to a Num
            left, right = right, left
            left = Num(1 / left.value)
        # now "left * right" with left a Num
        if _is(left, 0) or _is(right, 0):
            return Num(0)
        if isinstance(right, Num):
            return Num(left.value * right.value)
        if _is(left, 1):
            return right
        if isinstance(right, BinOp) and right.op == "*" and isinstance(right.left, Num):
            return BinOp("*", Num(left.value * right.left.value), right.right)
        return BinOp("*", left, right)
    if isinstance(node, Power):
        if node.exponent == 0:
            return Num(1)
        base = fold_expression(node.base, params)
        return base if node.exponent == 1 else Power(base, node.exponent)
    if isinstance(node, Call):
        args = tuple(fold_expression(a, params) for a in node.args)
        if node.func == "bracket" and _is(args[2], -1):
            return Call("antibracket", args[:2])
        if all(isinstance(a, Num) for a in args):
            return Num(eval_scalar(Call(node.func, args), params))
        return Call(node.func, args)
    raise TypeError(f"not an expression node: {node!r}")


def fold_presentation(p: AlgebraPresentation, values: Mapping[str, complex] | None = None) -> AlgebraPresentation:
    """Inline every parameter (``values`` override defaults) and fold scalars."""
    params = dict(p.parameters)
    params.update({k: complex(v) for k, v in (values or {}).items()})
    relations = tuple(
        Relation(r.label, fold_expression(r.lhs, params), fold_expression(r.rhs, params))
        for r in p.relations
    )
    return AlgebraPresentation(p.name, p.generators, (), relations)
