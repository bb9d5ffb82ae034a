"""Small total expression language for metric, wind and speed fields.

Scenario files define fields as strings over the grammar

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' ['-'] integer)?
    atom   := number | 'i' | 'pi' | name '(' expr ')' | 'z'<digits> | '(' expr ')'

with functions conj, abs2, re, im, sqrt, exp, log (principal branches) and
variables z1..zn.  There are no user-defined functions and no loops, so
every expression terminates and evaluation is pure.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
import re as _re

import numpy as np

from .errors import DomainError, ParseError
from .wirtinger import ScalarField, as_point

_FUNCTIONS = ("conj", "abs2", "re", "im", "sqrt", "exp", "log")
_NUMBER = _re.compile(r"\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?")
_NAME = _re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclasses.dataclass(frozen=True)
class Num:
    value: complex


@dataclasses.dataclass(frozen=True)
class Var:
    index: int  # 0-based coordinate index


@dataclasses.dataclass(frozen=True)
class Call:
    name: str
    arg: "Node"


@dataclasses.dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclasses.dataclass(frozen=True)
class Bin:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"


@dataclasses.dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Num | Var | Call | Neg | Bin | Pow


@dataclasses.dataclass(frozen=True)
class FieldExpr:
    """Parsed field expression with the dimension implied by its variables."""

    ast: Node
    source: str
    max_var: int  # highest 1-based variable index used, 0 when constant

    def __call__(self, z) -> complex:
        return eval_field(self, z)


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0
        self.max_var = 0

    def error(self, expected) -> ParseError:
        found = self.src[self.pos] if self.pos < len(self.src) else "end of input"
        return ParseError(f"expected {' or '.join(expected)}, found {found!r}", self.pos, expected)

    def skip_ws(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def accept(self, chars: str) -> str | None:
        if self.peek() in chars and self.peek():
            ch = self.src[self.pos]
            self.pos += 1
            return ch
        return None

    def expect(self, ch: str):
        if not self.accept(ch):
            raise self.error([repr(ch)])

    def parse(self) -> Node:
        node = self.expr()
        self.skip_ws()
        if self.pos != len(self.src):
            raise self.error(["operator", "end of input"])
        return node

    def expr(self) -> Node:
        node = self.term()
        while (op := self.accept("+-")) is not None:
            node = Bin(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while (op := self.accept("*/")) is not None:
            node = Bin(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        if self.accept("^"):
            self.skip_ws()
            sign = -1 if self.accept("-") else 1
            m = _NUMBER.match(self.src, self.pos)
            if m is None or not m.group().isdigit():
                raise self.error(["integer exponent"])
            self.pos = m.end()
            node = Pow(node, sign * int(m.group()))
        return node

    def atom(self) -> Node:
        self.skip_ws()
        if self.pos >= len(self.src):
            raise self.error(["number", "variable", "function", "'('"])
        ch = self.src[self.pos]
        if ch == "(":
            self.pos += 1
            node = self.expr()
            self.expect(")")
            return node
        m = _NUMBER.match(self.src, self.pos)
        if m is not None:
            self.pos = m.end()
            return Num(complex(float(m.group())))
        m = _NAME.match(self.src, self.pos)
        if m is not None:
            name = m.group()
            self.pos = m.end()
            if name in ("i", "j"):
                return Num(1j)
            if name == "pi":
                return Num(complex(math.pi))
            if name in _FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(name, arg)
            var = _re.fullmatch(r"z(\d+)", name)
            if var is not None and int(var.group(1)) >= 1:
                self.max_var = max(self.max_var, int(var.group(1)))
                return Var(int(var.group(1)) - 1)
            raise ParseError(f"unknown name {name!r}", self.pos - len(name),
                             ["z<k>", *_FUNCTIONS, "i", "pi"])
        raise self.error(["number", "variable", "function", "'('"])


def parse_field(src: str) -> FieldExpr:
    """Parse expression source into a FieldExpr; raises ParseError with position."""
    if not isinstance(src, str) or not src.strip():
        raise ParseError("empty expression", 0, ["expression"])
    parser = _Parser(src)
    ast = parser.parse()
    return FieldExpr(ast=ast, source=src, max_var=parser.max_var)


def _eval(node: Node, z) -> complex:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.index >= len(z):
            raise DomainError(f"variable z{node.index + 1} exceeds point dimension {len(z)}")
        return complex(z[node.index])
    if isinstance(node, Neg):
        return -_eval(node.arg, z)
    if isinstance(node, Pow):
        base = _eval(node.base, z)
        if node.exponent < 0 and abs(base) < 1e-14:
            raise DomainError("negative power of a vanishing base")
        return base ** node.exponent
    if isinstance(node, Bin):
        left = _eval(node.left, z)
        right = _eval(node.right, z)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if abs(right) < 1e-14:
            raise DomainError("division by (near-)zero denominator")
        return left / right
    if isinstance(node, Call):
        arg = _eval(node.arg, z)
        if node.name == "conj":
            return arg.conjugate()
        if node.name == "abs2":
            return complex(arg.real * arg.real + arg.imag * arg.imag)
        if node.name == "re":
            return complex(arg.real)
        if node.name == "im":
            return complex(arg.imag)
        if node.name == "sqrt":
            return cmath.sqrt(arg)
        if node.name == "exp":
            return cmath.exp(arg)
        if node.name == "log":
            if abs(arg) < 1e-14:
                raise DomainError("log of (near-)zero argument")
            return cmath.log(arg)
    raise TypeError(f"unexpected node {node!r}")


def eval_field(expr: FieldExpr, z) -> complex:
    """Evaluate at a point; deterministic, raises DomainError on guard failures."""
    value = _eval(expr.ast, np.ravel(z) if hasattr(z, "__len__") else [z])
    if value != value:  # NaN guard; evaluation must be NaN-free
        raise DomainError("expression evaluated to NaN")
    return value


def print_field(expr: FieldExpr | Node) -> str:
    """Render the AST back to parseable source (canonical parenthesization)."""
    node = expr.ast if isinstance(expr, FieldExpr) else expr

    # precedence levels: +- = 1, */ = 2, unary minus = 3, power = 4
    def render(n: Node, parent_prec: int) -> str:
        if isinstance(n, Num):
            if n.value == 1j:
                return "i"
            if n.value.imag == 0:
                v = n.value.real
                return repr(int(v)) if v == int(v) and abs(v) < 1e15 else repr(v)
            return f"({n.value.real!r}+{n.value.imag!r}*i)"
        if isinstance(n, Var):
            return f"z{n.index + 1}"
        if isinstance(n, Call):
            return f"{n.name}({render(n.arg, 0)})"
        if isinstance(n, Neg):
            out = f"-{render(n.arg, 3)}"
            return f"({out})" if parent_prec > 3 else out
        if isinstance(n, Pow):
            out = f"{render(n.base, 5)}^{n.exponent}"
            return f"({out})" if parent_prec > 3 else out
        if isinstance(n, Bin):
            prec = 1 if n.op in "+-" else 2
            left = render(n.left, prec)
            # right side gets a stricter context so '-' and '/' stay left-assoc
            right = render(n.right, prec + 1)
            out = f"{left}{n.op}{right}"
            return f"({out})" if parent_prec > prec else out
        raise TypeError(f"unexpected node {n!r}")

    return render(node, 0)


def scalar_field_from_expr(src: str | FieldExpr, dim: int, domain=None) -> ScalarField:
    """Wrap a parsed expression as a ScalarField over C^dim."""
    expr = parse_field(src) if isinstance(src, str) else src
    if expr.max_var > dim:
        raise DomainError(f"expression uses z{expr.max_var} but dimension is {dim}")
    kwargs = {"domain": domain} if domain is not None else {}

    def fn(z, _e=expr):
        return eval_field(_e, as_point(z, dim))

    return ScalarField(fn=fn, dim=dim, **kwargs)
