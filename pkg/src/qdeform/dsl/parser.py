"""Lexer and recursive-descent parser for ``.qdl`` algebra presentations.

Grammar (``#`` starts a comment)::

    program  := "algebra" IDENT ";" decl*
    decl     := "gen" IDENT ("," IDENT)* ";"
              | "param" IDENT "=" expr ";"
              | "rel" IDENT ":" expr "=" expr ";"
    expr     := ["-"] term (("+" | "-") term)*
    term     := factor factor*                  # juxtaposition: matrix product
    factor   := atom (("*" | "/") atom)*        # left operand of "*" and right of "/" are scalars
    atom     := NUMBER | IMAG | "i" | "pi" | "I" | IDENT | "(" expr ")"
              | "bracket" "(" expr "," expr "," expr ")" | "antibracket" "(" expr "," expr ")"
              | "dagger" "(" expr ")" | "power" "(" expr "," INT ")"
              | ("exp" | "cos" | "sin" | "sqrt") "(" expr ")"

A scalar in matrix position stands for that multiple of the identity.
Identifiers must be declared before use.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .nodes import (
    AlgebraPresentation, BinOp, Call, Const, Identity, Node, Num, Power, Product,
    Relation, Sum, Sym, is_scalar,
)

__all__ = [
    "DslError", "DslSyntaxError", "UnknownSymbolError", "DuplicateIdentifierError",
    "DslTypeError", "parse_presentation", "parse_expression", "KEYWORDS", "RESERVED",
]

KEYWORDS = frozenset({"algebra", "gen", "param", "rel"})
FUNCTIONS = frozenset({"bracket", "antibracket", "dagger", "power", "exp", "cos", "sin", "sqrt"})
RESERVED = KEYWORDS | FUNCTIONS | {"I", "i", "pi"}

MAX_DEPTH = 200


class DslError(ValueError):
    """Positioned diagnostic raised for any rejected source text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 expected: frozenset[str] = frozenset()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        super().__init__(str(self))

    def __str__(self):
        where = f"line {self.line}, column {self.column}: " if self.line is not None else ""
        exp = ""
        if self.expected:
            exp = " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        return f"{where}{self.message}{exp}"


class DslSyntaxError(DslError):
    pass


class DslTypeError(DslError):
    pass


class UnknownSymbolError(DslError):
    def __init__(self, symbol: str, line: int | None = None, column: int | None = None):
        self.symbol = symbol
        super().__init__(f"unknown symbol {symbol!r}", line, column)


class DuplicateIdentifierError(DslError):
    def __init__(self, symbol: str, line: int | None = None, column: int | None = None):
        self.symbol = symbol
        super().__init__(f"identifier {symbol!r} declared twice", line, column)


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, NUMBER, IMAG, INT-compatible NUMBER, punctuation, EOF
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?(?:i(?![A-Za-z0-9_]))?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[;,:=+\-*/()])
    """,
    re.VERBOSE,
)


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise DslSyntaxError(f"unexpected character {source[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "number":
            tokens.append(Token("IMAG" if text.endswith("i") else "NUMBER", text, line, col))
        elif kind == "ident":
            tokens.append(Token("IDENT", text, line, col))
        elif kind == "punct":
            tokens.append(Token(text, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


_ATOM_START = frozenset({"NUMBER", "IMAG", "IDENT", "("})


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0
        self.depth = 0
        self.generators: dict[str, None] = {}
        self.params: dict[str, complex] = {}
        self.labels: set[str] = set()

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def fail(self, message: str, expected=()) -> DslSyntaxError:
        t = self.tok
        found = "end of input" if t.kind == "EOF" else repr(t.text)
        return DslSyntaxError(f"{message}, found {found}", t.line, t.column, frozenset(expected))

    def expect(self, kind: str, what: str | None = None) -> Token:
        if self.tok.kind != kind:
            raise self.fail("unexpected token", {what or kind})
        return self.advance()

    def expect_word(self, word: str) -> Token:
        if self.tok.kind != "IDENT" or self.tok.text != word:
            raise self.fail("unexpected token", {word})
        return self.advance()

    def new_ident(self) -> Token:
        t = self.tok
        if t.kind != "IDENT":
            raise self.fail("unexpected token", {"identifier"})
        if t.text in RESERVED:
            raise DslSyntaxError(f"reserved word {t.text!r} cannot be used as an identifier",
                                 t.line, t.column, frozenset({"identifier"}))
        return self.advance()

    # program structure
    def program(self) -> AlgebraPresentation:
        self.expect_word("algebra")
        name = self.new_ident().text
        self.expect(";")
        relations = []
        while self.tok.kind != "EOF":
            t = self.tok
            if t.kind == "IDENT" and t.text == "gen":
                self.advance()
                self.declare_gen()
                while self.tok.kind == ",":
                    self.advance()
                    self.declare_gen()
                self.expect(";")
            elif t.kind == "IDENT" and t.text == "param":
                self.advance()
                self.declare_param()
            elif t.kind == "IDENT" and t.text == "rel":
                self.advance()
                relations.append(self.relation())
            else:
                raise self.fail("unexpected token", {"gen", "param", "rel", "end of input"})
        return AlgebraPresentation(
            name=name,
            generators=tuple(self.generators),
            parameters=tuple(self.params.items()),
            relations=tuple(relations),
        )

    def _check_fresh(self, t: Token):
        if t.text in self.generators or t.text in self.params:
            raise DuplicateIdentifierError(t.text, t.line, t.column)

    def declare_gen(self):
        t = self.new_ident()
        self._check_fresh(t)
        self.generators[t.text] = None

    def declare_param(self):
        t = self.new_ident()
        self._check_fresh(t)
        self.expect("=")
        start = self.tok
        node = self.expr()
        if not is_scalar(node):
            raise DslTypeError("parameter default must be a scalar expression", start.line, start.column)
        try:
            value = _const_eval(node, self.params)
        except (ArithmeticError, ValueError, OverflowError) as exc:
            raise DslError(f"cannot evaluate default of {t.text!r}: {exc}", start.line, start.column)
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise DslError(f"default of {t.text!r} is not finite", start.line, start.column)
        self.expect(";")
        self.params[t.text] = value

    def relation(self) -> Relation:
        t = self.new_ident()
        if t.text in self.labels:
            raise DuplicateIdentifierError(t.text, t.line, t.column)
        self.labels.add(t.text)
        self.expect(":")
        lhs = self.expr()
        self.expect("=")
        rhs = self.expr()
        self.expect(";")
        return Relation(t.text, lhs, rhs)

    # expressions
    def _enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            t = self.tok
            raise DslSyntaxError(f"expression nested deeper than {MAX_DEPTH} levels", t.line, t.column)

    def expr(self) -> Node:
        self._enter()
        try:
            terms = []
            sign = 1
            leading = False
            if self.tok.kind == "-":
                self.advance()
                sign, leading = -1, True
            terms.append((sign, self.term()))
            while self.tok.kind in ("+", "-"):
                sign = 1 if self.advance().kind == "+" else -1
                terms.append((sign, self.term()))
            if len(terms) == 1 and not leading:
                return terms[0][1]
            return Sum(tuple(terms))
        finally:
            self.depth -= 1

    def term(self) -> Node:
        factors = [self.factor()]
        while self.tok.kind in _ATOM_START:
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def factor(self) -> Node:
        left = self.atom()
        while self.tok.kind in ("*", "/"):
            op_tok = self.advance()
            right = self.atom()
            if op_tok.kind == "*" and not is_scalar(left):
                raise DslTypeError("left operand of '*' must be a scalar", op_tok.line, op_tok.column)
            if op_tok.kind == "/" and not is_scalar(right):
                raise DslTypeError("right operand of '/' must be a scalar", op_tok.line, op_tok.column)
            left = BinOp(op_tok.kind, left, right)
        return left

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "NUMBER":
            self.advance()
            return Num(_literal(t))
        if t.kind == "IMAG":
            self.advance()
            return Num(complex(0.0, _literal(t, t.text[:-1])))
        if t.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind != "IDENT":
            raise self.fail("unexpected token", {"identifier", "number", "(", "I", "i", "pi"})
        name = t.text
        if name == "I":
            self.advance()
            return Identity()
        if name in ("i", "pi"):
            self.advance()
            return Const(name)
        if name in FUNCTIONS:
            self.advance()
            return self.call(name, t)
        if name in KEYWORDS:
            raise self.fail("unexpected keyword", {"identifier", "number", "("})
        self.advance()
        if name in self.generators:
            return Sym(name, "gen")
        if name in self.params:
            return Sym(name, "param")
        raise UnknownSymbolError(name, t.line, t.column)

    def call(self, name: str, t: Token) -> Node:
        self._enter()
        try:
            self.expect("(")
            if name == "power":
                base = self.expr()
                self.expect(",")
                k = self.tok
                if k.kind != "NUMBER" or not k.text.isdigit():
                    raise self.fail("power exponent must be a nonnegative integer literal",
                                    {"integer"})
                self.advance()
                self.expect(")")
                return Power(base, int(k.text))
            args = [self.expr()]
            arity = {"bracket": 3, "antibracket": 2}.get(name, 1)
            for _ in range(arity - 1):
                self.expect(",")
                args.append(self.expr())
            self.expect(")")
            if name == "bracket" and not is_scalar(args[2]):
                raise DslTypeError("third argument of bracket must be a scalar", t.line, t.column)
            if name == "sqrt" and not is_scalar(args[0]):
                raise DslTypeError("sqrt takes a scalar argument", t.line, t.column)
            return Call(name, tuple(args))
        finally:
            self.depth -= 1


def _literal(t: Token, text: str | None = None) -> float:
    value = float(t.text if text is None else text)
    if not math.isfinite(value):
        raise DslSyntaxError(f"numeric literal {t.text!r} is out of range", t.line, t.column)
    return value


def _const_eval(node: Node, params: dict[str, complex]) -> complex:
    """Evaluate a scalar tree using parameter defaults declared so far."""
    from .evaluate import eval_scalar  # local import: evaluate depends on nodes only

    return eval_scalar(node, params)


def parse_presentation(source: str | bytes) -> AlgebraPresentation:
    """Parse ``.qdl`` source. Every rejection is a :class:`DslError` subclass."""
    if isinstance(source, (bytes, bytearray)):
        try:
            source = bytes(source).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DslSyntaxError(f"source is not valid UTF-8 (byte offset {exc.start})")
    parser = _Parser(source)
    try:
        return parser.program()
    except RecursionError:
        t = parser.tok
        raise DslSyntaxError("expression nested too deeply", t.line, t.column) from None


def parse_expression(source: str, generators=(), params: dict[str, complex] | None = None) -> Node:
    """Parse a standalone expression against the given declarations."""
    parser = _Parser(source)
    parser.generators = dict.fromkeys(generators)
    parser.params = dict(params or {})
    node = parser.expr()
    if parser.tok.kind != "EOF":
        raise parser.fail("unexpected token after expression", {"end of input"})
    return node
