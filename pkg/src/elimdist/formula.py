"""Prenex first-order formulas over the graph vocabulary {=, ~}.

Concrete syntax::

    formula := quant* expr
    quant   := ("A" | "E") IDENT
    expr    := iff
    iff     := impl ("<->" impl)*      left associative
    impl    := or ("->" or)*           right associative
    or      := and ("|" and)*
    and     := not ("&" not)*
    not     := "!" not | atom | "(" expr ")"
    atom    := IDENT ("=" | "~") IDENT

Comments run from "#" to the end of the line.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

DUMMY_PREFIX = "_d"


class FormulaError(ValueError):
    """Raised for malformed formulas; carries an optional source position."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)


class QKind(str, enum.Enum):
    FORALL = "A"
    EXISTS = "E"


class Side(str, enum.Enum):
    SIGMA = "SIGMA"
    PI = "PI"


@dataclass(frozen=True)
class Quantifier:
    kind: QKind
    var: str


@dataclass(frozen=True)
class Eq:
    a: str
    b: str


@dataclass(frozen=True)
class Adj:
    a: str
    b: str


@dataclass(frozen=True)
class Not:
    arg: "Node"


@dataclass(frozen=True)
class And:
    args: tuple["Node", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["Node", ...]


@dataclass(frozen=True)
class Implies:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Iff:
    left: "Node"
    right: "Node"


Node = Union[Eq, Adj, Not, And, Or, Implies, Iff]


@dataclass(frozen=True)
class Formula:
    prefix: tuple[Quantifier, ...]
    matrix: Node
    free_vars: tuple[str, ...] = ()

    def __post_init__(self):
        bound = [q.var for q in self.prefix]
        if len(set(bound)) != len(bound):
            raise FormulaError("duplicate bound variable")
        if set(bound) & set(self.free_vars):
            raise FormulaError("free and bound variables overlap")
        if len(set(self.free_vars)) != len(self.free_vars):
            raise FormulaError("duplicate free variable")
        unknown = matrix_vars(self.matrix) - set(bound) - set(self.free_vars)
        if unknown:
            raise FormulaError(f"undeclared variable(s): {', '.join(sorted(unknown))}")

    @property
    def is_sentence(self) -> bool:
        return not self.free_vars

    @property
    def variables(self) -> tuple[str, ...]:
        """Free variables followed by bound variables in prefix order."""
        return self.free_vars + tuple(q.var for q in self.prefix)


@dataclass(frozen=True)
class PrefixClass:
    side: Side
    level: int


@dataclass(frozen=True)
class Sigma3Form:
    """A sentence with prefix E^r A^s E^t, r, s, t >= 1."""

    formula: Formula
    r: int
    s: int
    t: int
    phi_x: Formula = field(init=False, compare=False)

    def __post_init__(self):
        xs = [q.var for q in self.formula.prefix[: self.r]]
        object.__setattr__(self, "phi_x", strip_quantifiers(self.formula, xs))


def matrix_vars(node: Node) -> set[str]:
    if isinstance(node, (Eq, Adj)):
        return {node.a, node.b}
    if isinstance(node, Not):
        return matrix_vars(node.arg)
    if isinstance(node, (And, Or)):
        out: set[str] = set()
        for a in node.args:
            out |= matrix_vars(a)
        return out
    return matrix_vars(node.left) | matrix_vars(node.right)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op><->|->|[=~!&|()])"
)


@dataclass
class _Tok:
    kind: str  # "ident", "op", "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("ident", "op"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise FormulaError(msg, tok.line, tok.col)

    def at_quantifier(self) -> bool:
        a, b = self.peek(), self.peek(1)
        return a.kind == "ident" and a.text in ("A", "E") and b.kind == "ident"

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text or tok.kind == "eof":
            self.fail(f"expected {text!r}, got {tok.text or 'end of input'!r}", tok)
        return tok

    def formula(self) -> tuple[list[Quantifier], Node]:
        prefix: list[Quantifier] = []
        seen: set[str] = set()
        while self.at_quantifier():
            kind_tok, var_tok = self.next(), self.next()
            if var_tok.text in seen:
                self.fail(f"duplicate bound variable {var_tok.text!r}", var_tok)
            seen.add(var_tok.text)
            prefix.append(Quantifier(QKind(kind_tok.text), var_tok.text))
        matrix = self.iff()
        if self.peek().kind != "eof":
            self.fail(f"unexpected token {self.peek().text!r}")
        return prefix, matrix

    def iff(self) -> Node:
        node = self.impl()
        while self.peek().text == "<->":
            self.next()
            node = Iff(node, self.impl())
        return node

    def impl(self) -> Node:
        left = self.or_()
        if self.peek().text == "->":
            self.next()
            return Implies(left, self.impl())
        return left

    def or_(self) -> Node:
        args = [self.and_()]
        while self.peek().text == "|":
            self.next()
            args.append(self.and_())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def and_(self) -> Node:
        args = [self.not_()]
        while self.peek().text == "&":
            self.next()
            args.append(self.not_())
        return args[0] if len(args) == 1 else And(tuple(args))

    def not_(self) -> Node:
        tok = self.peek()
        if tok.text == "!":
            self.next()
            return Not(self.not_())
        if tok.text == "(":
            self.next()
            node = self.iff()
            self.expect(")")
            return node
        if self.at_quantifier():
            self.fail("quantifier inside a connective; only prenex formulas are accepted")
        if tok.kind == "ident":
            a = self.next()
            op = self.next()
            if op.text not in ("=", "~"):
                self.fail(f"expected '=' or '~' after {a.text!r}", op)
            b = self.next()
            if b.kind != "ident":
                self.fail("expected a variable", b)
            return Eq(a.text, b.text) if op.text == "=" else Adj(a.text, b.text)
        self.fail(f"unexpected token {tok.text or 'end of input'!r}")
        raise AssertionError  # unreachable


def parse_formula(text: str, free_vars: Sequence[str] = ()) -> Formula:
    """Parse ``text`` into a Formula; ``free_vars`` declares unbound variables."""
    prefix, matrix = _Parser(text).formula()
    return Formula(tuple(prefix), matrix, tuple(free_vars))


def load_formula(path, free_vars: Sequence[str] = ()) -> Formula:
    with open(path, encoding="utf-8") as fh:
        return parse_formula(fh.read(), free_vars)


# ---------------------------------------------------------------------------
# rendering

def render_node(node: Node) -> str:
    if isinstance(node, Eq):
        return f"({node.a} = {node.b})"
    if isinstance(node, Adj):
        return f"({node.a} ~ {node.b})"
    if isinstance(node, Not):
        return "!" + render_node(node.arg)
    if isinstance(node, And):
        return "(" + " & ".join(render_node(a) for a in node.args) + ")"
    if isinstance(node, Or):
        return "(" + " | ".join(render_node(a) for a in node.args) + ")"
    if isinstance(node, Implies):
        return f"({render_node(node.left)} -> {render_node(node.right)})"
    return f"({render_node(node.left)} <-> {render_node(node.right)})"


def render_formula(f: Formula) -> str:
    head = " ".join(f"{q.kind.value} {q.var}" for q in f.prefix)
    body = render_node(f.matrix)
    return f"{head} {body}" if head else body


# ---------------------------------------------------------------------------
# classification and prefix surgery

def blocks(f: Formula) -> list[tuple[QKind, int]]:
    """Maximal runs of equal quantifiers as (kind, length)."""
    out: list[tuple[QKind, int]] = []
    for q in f.prefix:
        if out and out[-1][0] == q.kind:
            out[-1] = (q.kind, out[-1][1] + 1)
        else:
            out.append((q.kind, 1))
    return out


def prefix_class(f: Formula) -> PrefixClass:
    if not f.is_sentence:
        raise FormulaError("prefix_class expects a sentence")
    bs = blocks(f)
    if not bs:
        return PrefixClass(Side.SIGMA, 0)
    return PrefixClass(Side.SIGMA if bs[0][0] is QKind.EXISTS else Side.PI, len(bs))


def strip_quantifiers(f: Formula, variables: Iterable[str]) -> Formula:
    """Drop the quantifiers of a leading run of variables, making them free."""
    variables = tuple(variables)
    lead = tuple(q.var for q in f.prefix[: len(variables)])
    if lead != variables:
        raise FormulaError(f"{list(variables)} is not a leading block of the prefix")
    return Formula(f.prefix[len(variables):], f.matrix, f.free_vars + variables)


def _fresh(used: set[str]) -> str:
    i = 0
    while f"{DUMMY_PREFIX}{i}" in used:
        i += 1
    name = f"{DUMMY_PREFIX}{i}"
    used.add(name)
    return name


def pad_to_sigma3(f: Formula) -> Sigma3Form:
    """Rewrite a sentence of shape E*A*E* as E^r A^s E^t with r, s, t >= 1.

    Missing blocks are filled with unused dummy variables. Formulas outside
    Sigma_3 raise FormulaError.
    """
    if not f.is_sentence:
        raise FormulaError("pad_to_sigma3 expects a sentence")
    pattern = [QKind.EXISTS, QKind.FORALL, QKind.EXISTS]
    groups: list[list[Quantifier]] = [[], [], []]
    slot = 0
    for q in f.prefix:
        while slot < 3 and pattern[slot] is not q.kind:
            slot += 1
        if slot == 3:
            raise FormulaError("formula is not in Sigma_3")
        groups[slot].append(q)
    used = set(f.variables)
    for kind, group in zip(pattern, groups):
        if not group:
            group.append(Quantifier(kind, _fresh(used)))
    prefix = tuple(groups[0] + groups[1] + groups[2])
    return Sigma3Form(Formula(prefix, f.matrix), len(groups[0]), len(groups[1]), len(groups[2]))


def sigma3_form(f: Formula) -> Sigma3Form:
    """Interpret a sentence already in E^r A^s E^t shape (r, s, t >= 1)."""
    bs = blocks(f)
    if (
        not f.is_sentence
        or len(bs) != 3
        or [b[0] for b in bs] != [QKind.EXISTS, QKind.FORALL, QKind.EXISTS]
    ):
        raise FormulaError("formula is not in Sigma_3 block form E^r A^s E^t")
    return Sigma3Form(f, bs[0][1], bs[1][1], bs[2][1])


def add_dummy(f: Formula, index: int, kind: QKind) -> Formula:
    """Insert a dummy quantifier at position ``index`` of the prefix."""
    used = set(f.variables)
    q = Quantifier(kind, _fresh(used))
    return Formula(f.prefix[:index] + (q,) + f.prefix[index:], f.matrix, f.free_vars)
