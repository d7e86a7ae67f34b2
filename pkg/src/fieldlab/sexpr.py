"""S-expression reader and canonical printer for terms and formulas.

Grammar: atoms `0`, `1`, and variable names; compounds
(+ a b) (- a b) (* a b) (= a b) (not f) (and f g) (or f g)
(implies f g) (exists x f) (forall x f) (hole NAME x ...).
parse is a strict inverse of print on ASTs.
"""

from __future__ import annotations

from .errors import ParseError
from .logic import (
    Add,
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Hole,
    Implies,
    Mul,
    Not,
    One,
    Or,
    Sub,
    Term,
    Var,
    Zero,
)

_RESERVED = {
    "+", "-", "*", "=", "not", "and", "or", "implies", "exists", "forall", "hole",
    "0", "1",
}


def _tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "()":
            tokens.append((ch, i))
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in "();":
            j += 1
        tokens.append((text[i:j], i))
        i = j
    return tokens


def _check_name(tok: str, pos: int) -> str:
    if tok in _RESERVED:
        raise ParseError(f"{tok!r} cannot be used as a variable name", pos)
    if not tok or tok[0].isdigit():
        raise ParseError(f"invalid variable name {tok!r}", pos)
    return tok


class _Reader:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        if self.pos >= len(self.tokens):
            raise ParseError("unexpected end of input", -1)
        return self.tokens[self.pos]

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, what: str):
        tok, p = self.next()
        if tok != what:
            raise ParseError(f"expected {what!r}, found {tok!r}", p)

    def done(self) -> bool:
        return self.pos >= len(self.tokens)

    # -- terms -------------------------------------------------------------

    def term(self) -> Term:
        tok, p = self.next()
        if tok == "0":
            return Zero()
        if tok == "1":
            return One()
        if tok == "(":
            op, op_pos = self.next()
            if op not in ("+", "-", "*"):
                raise ParseError(f"unknown term operator {op!r}", op_pos)
            left = self.term()
            right = self.term()
            self.expect(")")
            return {"+": Add, "-": Sub, "*": Mul}[op](left, right)
        if tok == ")":
            raise ParseError("unexpected )", p)
        return Var(_check_name(tok, p))

    # -- formulas ----------------------------------------------------------

    def formula(self) -> Formula:
        tok, p = self.next()
        if tok != "(":
            raise ParseError(f"formula must be a compound, found {tok!r}", p)
        op, op_pos = self.next()
        if op == "=":
            left = self.term()
            right = self.term()
            self.expect(")")
            return Eq(left, right)
        if op == "not":
            body = self.formula()
            self.expect(")")
            return Not(body)
        if op in ("and", "or", "implies"):
            left = self.formula()
            right = self.formula()
            self.expect(")")
            return {"and": And, "or": Or, "implies": Implies}[op](left, right)
        if op in ("exists", "forall"):
            var_tok, var_pos = self.next()
            var = _check_name(var_tok, var_pos)
            body = self.formula()
            self.expect(")")
            return (Exists if op == "exists" else Forall)(var, body)
        if op == "hole":
            name_tok, name_pos = self.next()
            if name_tok in ("(", ")"):
                raise ParseError("hole needs a name", name_pos)
            args = []
            while True:
                tok2, p2 = self.peek()
                if tok2 == ")":
                    self.next()
                    break
                if tok2 == "(":
                    raise ParseError("hole arguments must be variables", p2)
                self.next()
                args.append(_check_name(tok2, p2))
            return Hole(name_tok, tuple(args))
        raise ParseError(f"unknown formula operator {op!r}", op_pos)


def parse_formula(text: str) -> Formula:
    r = _Reader(text)
    f = r.formula()
    if not r.done():
        tok, p = r.peek()
        raise ParseError(f"trailing input {tok!r}", p)
    return f


def parse_term(text: str) -> Term:
    r = _Reader(text)
    t = r.term()
    if not r.done():
        tok, p = r.peek()
        raise ParseError(f"trailing input {tok!r}", p)
    return t


def print_term(t: Term) -> str:
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Var):
        return t.name
    ops = {Add: "+", Sub: "-", Mul: "*"}
    for cls, op in ops.items():
        if isinstance(t, cls):
            return f"({op} {print_term(t.left)} {print_term(t.right)})"
    raise TypeError(f"not a term: {t!r}")


def print_formula(f: Formula) -> str:
    if isinstance(f, Eq):
        return f"(= {print_term(f.left)} {print_term(f.right)})"
    if isinstance(f, Not):
        return f"(not {print_formula(f.body)})"
    if isinstance(f, And):
        return f"(and {print_formula(f.left)} {print_formula(f.right)})"
    if isinstance(f, Or):
        return f"(or {print_formula(f.left)} {print_formula(f.right)})"
    if isinstance(f, Implies):
        return f"(implies {print_formula(f.left)} {print_formula(f.right)})"
    if isinstance(f, Exists):
        return f"(exists {f.var} {print_formula(f.body)})"
    if isinstance(f, Forall):
        return f"(forall {f.var} {print_formula(f.body)})"
    if isinstance(f, Hole):
        parts = " ".join(f.args)
        return f"(hole {f.name} {parts})" if f.args else f"(hole {f.name})"
    raise TypeError(f"not a formula: {f!r}")
