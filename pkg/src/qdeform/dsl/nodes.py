"""Expression trees and presentations for the relation language."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

__all__ = [
    "Num", "Const", "Identity", "Sym", "Sum", "Product", "BinOp", "Call", "Power",
    "Node", "Relation", "AlgebraPresentation", "is_scalar", "symbols", "CALL_ARITY",
]


@dataclass(frozen=True)
class Num:
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True)
class Const:
    name: str  # "pi" or "i"


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class Sym:
    name: str
    kind: str  # "gen" or "param"


@dataclass(frozen=True)
class Sum:
    terms: tuple  # ((sign, node), ...), sign in {+1, -1}


@dataclass(frozen=True)
class Product:
    factors: tuple  # juxtaposition, len >= 2


@dataclass(frozen=True)
class BinOp:
    op: str  # "*" (scalar times anything) or "/" (anything over scalar)
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: int


Node = Union[Num, Const, Identity, Sym, Sum, Product, BinOp, Call, Power]

CALL_ARITY = {
    "bracket": 3,
    "antibracket": 2,
    "dagger": 1,
    "exp": 1,
    "cos": 1,
    "sin": 1,
    "sqrt": 1,
}


def is_scalar(node: Node) -> bool:
    """True when the subtree contains no generator and no identity."""
    if isinstance(node, (Num, Const)):
        return True
    if isinstance(node, Identity):
        return False
    if isinstance(node, Sym):
        return node.kind == "param"
    if isinstance(node, Sum):
        return all(is_scalar(t) for _, t in node.terms)
    if isinstance(node, Product):
        return all(is_scalar(f) for f in node.factors)
    if isinstance(node, BinOp):
        return is_scalar(node.left) and is_scalar(node.right)
    if isinstance(node, Power):
        return is_scalar(node.base)
    if isinstance(node, Call):
        if node.func == "bracket":
            return is_scalar(node.args[0]) and is_scalar(node.args[1])
        return all(is_scalar(a) for a in node.args)
    raise TypeError(f"not an expression node: {node!r}")


def symbols(node: Node) -> set[str]:
    """Names of all generators and parameters referenced by ``node``."""
    out: set[str] = set()
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, Sym):
            out.add(n.name)
        elif isinstance(n, Sum):
            stack.extend(t for _, t in n.terms)
        elif isinstance(n, Product):
            stack.extend(n.factors)
        elif isinstance(n, BinOp):
            stack.extend((n.left, n.right))
        elif isinstance(n, Call):
            stack.extend(n.args)
        elif isinstance(n, Power):
            stack.append(n.base)
    return out


@dataclass(frozen=True)
class Relation:
    label: str
    lhs: Node
    rhs: Node


@dataclass(frozen=True)
class AlgebraPresentation:
    name: str
    generators: tuple[str, ...]
    parameters: tuple[tuple[str, complex], ...]
    relations: tuple[Relation, ...]

    @property
    def parameter_defaults(self) -> dict[str, complex]:
        return dict(self.parameters)

    def relation(self, label: str) -> Relation:
        for r in self.relations:
            if r.label == label:
                return r
        raise KeyError(label)

    def with_parameters(self, values: dict[str, complex]) -> "AlgebraPresentation":
        """Copy with the defaults of the named (already declared) parameters replaced."""
        unknown = set(values) - {n for n, _ in self.parameters}
        if unknown:
            raise KeyError(f"undeclared parameters: {sorted(unknown)}")
        params = tuple((n, complex(values.get(n, v))) for n, v in self.parameters)
        return AlgebraPresentation(self.name, self.generators, params, self.relations)
