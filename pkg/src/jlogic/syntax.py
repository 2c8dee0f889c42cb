"""Abstract syntax, parsing, and printing for justification terms and formulas.

Terms are built from constants and variables with application ``.``,
sum ``+``, and proof verifier ``!``.  Formulas are intuitionistic
propositional formulas extended with evidence assertions ``t:A``.

Surface syntax is ASCII (``->``, ``/\\``, ``\\/``, ``_|_``, ``.``) with the
usual Unicode symbols accepted as aliases.  Lexical namespaces are
disjoint: atoms are ``p``, ``q``, ``r`` or ``pN``; constants are ``cN`` or
names declared by a constant specification; every other lowercase
identifier is a justification variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Term:
    def __str__(self) -> str:
        return print_term(self)


@dataclass(frozen=True)
class Constant(Term):
    name: str


@dataclass(frozen=True)
class Variable(Term):
    name: str


@dataclass(frozen=True)
class App(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Sum(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Bang(Term):
    inner: Term


@dataclass(frozen=True)
class Formula:
    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Falsum(Formula):
    pass


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Just(Formula):
    term: Term
    body: Formula


FALSUM = Falsum()

_ATOM_RE = re.compile(r"^(p|q|r|p[0-9]+)$")
_CONSTANT_RE = re.compile(r"^c[0-9]+$")
_IDENT_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")


def is_atom_name(name: str) -> bool:
    return _ATOM_RE.match(name) is not None


def is_constant_name(name: str, declared: frozenset[str] = frozenset()) -> bool:
    return _CONSTANT_RE.match(name) is not None or name in declared


# ---------------------------------------------------------------------------
# Structural utilities


def subterms(t: Term) -> frozenset[Term]:
    """Least set containing t and closed under immediate subterms."""
    out = set()
    stack = [t]
    while stack:
        cur = stack.pop()
        if cur in out:
            continue
        out.add(cur)
        if isinstance(cur, (App, Sum)):
            stack.append(cur.left)
            stack.append(cur.right)
        elif isinstance(cur, Bang):
            stack.append(cur.inner)
    return frozenset(out)


def subformulas(a: Formula) -> frozenset[Formula]:
    """Least set containing a and closed under immediate subformulas."""
    out = set()
    stack = [a]
    while stack:
        cur = stack.pop()
        if cur in out:
            continue
        out.add(cur)
        if isinstance(cur, (And, Or, Implies)):
            stack.append(cur.left)
            stack.append(cur.right)
        elif isinstance(cur, Just):
            stack.append(cur.body)
    return frozenset(out)


def term_size(t: Term) -> int:
    if isinstance(t, (App, Sum)):
        return 1 + term_size(t.left) + term_size(t.right)
    if isinstance(t, Bang):
        return 1 + term_size(t.inner)
    return 1


def formula_size(a: Formula) -> int:
    if isinstance(a, (And, Or, Implies)):
        return 1 + formula_size(a.left) + formula_size(a.right)
    if isinstance(a, Just):
        return 1 + formula_size(a.body)
    return 1


def formula_terms(a: Formula) -> frozenset[Term]:
    """All justification terms occurring in a (at ``:`` positions)."""
    return frozenset(f.term for f in subformulas(a) if isinstance(f, Just))


def formula_atoms(a: Formula) -> frozenset[str]:
    out: set[str] = set()
    for f in subformulas(a):
        if isinstance(f, Atom):
            out.add(f.name)
        elif isinstance(f, Just):
            out |= formula_atoms(f.body)
    return frozenset(out)


def close_subformulas(formulas) -> frozenset[Formula]:
    out: set[Formula] = set()
    for a in formulas:
        out |= subformulas(a)
    return frozenset(out)


def close_subterms(terms) -> frozenset[Term]:
    out: set[Term] = set()
    for t in terms:
        out |= subterms(t)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Printing

_TERM_SUM, _TERM_APP, _TERM_UNARY = 0, 1, 2
_F_IMP, _F_OR, _F_AND, _F_JUST = 0, 1, 2, 3


def print_term(t: Term, full_parens: bool = False) -> str:
    """Render t with minimal parentheses (or fully parenthesized)."""

    def go(t: Term, level: int) -> str:
        if isinstance(t, (Constant, Variable)):
            return t.name
        if isinstance(t, Bang):
            s = "!" + go(t.inner, _TERM_UNARY)
            return f"({s})" if full_parens else s
        if isinstance(t, App):
            s = go(t.left, _TERM_APP) + "." + go(t.right, _TERM_UNARY)
            need = full_parens or level > _TERM_APP
        else:  # Sum
            s = go(t.left, _TERM_SUM) + " + " + go(t.right, _TERM_APP)
            need = full_parens or level > _TERM_SUM
        return f"({s})" if need else s

    return go(t, _TERM_SUM)


def print_formula(a: Formula, full_parens: bool = False) -> str:
    """Render a with minimal parentheses (or fully parenthesized)."""

    def go(a: Formula, level: int) -> str:
        if isinstance(a, Atom):
            return a.name
        if isinstance(a, Falsum):
            return "_|_"
        if isinstance(a, Just):
            s = print_term(a.term, full_parens) + ":" + go(a.body, _F_JUST)
            return f"({s})" if full_parens else s
        if isinstance(a, And):
            s = go(a.left, _F_AND) + " /\\ " + go(a.right, _F_JUST)
            need = full_parens or level > _F_AND
        elif isinstance(a, Or):
            s = go(a.left, _F_OR) + " \\/ " + go(a.right, _F_AND)
            need = full_parens or level > _F_OR
        else:  # Implies, right-associative
            s = go(a.left, _F_OR) + " -> " + go(a.right, _F_IMP)
            need = full_parens or level > _F_IMP
        return f"({s})" if need else s

    return go(a, _F_IMP)


def formula_key(a: Formula) -> str:
    """Sort key: the printed form (injective on formulas)."""
    return print_formula(a)


def term_key(t: Term) -> str:
    return print_term(t)


# ---------------------------------------------------------------------------
# Lexer


class ParseError(Exception):
    """Syntax error with a character position into the input."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.message = message
        self.pos = pos


_SYMBOLS = [
    ("->", "ARROW"),
    ("/\\", "AND"),
    ("\\/", "OR"),
    ("_|_", "FALSUM"),
    ("→", "ARROW"),
    ("∧", "AND"),
    ("∨", "OR"),
    ("⊥", "FALSUM"),
    ("·", "DOT"),
    ("!", "BANG"),
    (".", "DOT"),
    ("+", "PLUS"),
    (":", "COLON"),
    ("(", "LPAR"),
    (")", "RPAR"),
]


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(src: str) -> list[_Token]:
    toks = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        for sym, kind in _SYMBOLS:
            if src.startswith(sym, i):
                toks.append(_Token(kind, sym, i))
                i += len(sym)
                break
        else:
            m = _IDENT_RE.match(src, i)
            if m:
                toks.append(_Token("IDENT", m.group(0), i))
                i = m.end()
            else:
                raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(_Token("EOF", "", n))
    return toks


# ---------------------------------------------------------------------------
# Parser (recursive descent; backtracking only at the term-vs-formula fork)


class _Parser:
    def __init__(self, src: str, constants: frozenset[str]):
        self.toks = _tokenize(src)
        self.i = 0
        self.constants = constants

    def peek(self) -> _Token:
        return self.toks[self.i]

    def next(self) -> _Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {what}", tok.pos)
        return self.next()

    # terms: sum := app ("+" app)* ; app := unary ("." unary)* ;
    # unary := "!" unary | name | "(" term ")"

    def term(self) -> Term:
        t = self.app()
        while self.peek().kind == "PLUS":
            self.next()
            t = Sum(t, self.app())
        return t

    def app(self) -> Term:
        t = self.unary()
        while self.peek().kind == "DOT":
            self.next()
            t = App(t, self.unary())
        return t

    def unary(self) -> Term:
        tok = self.peek()
        if tok.kind == "BANG":
            self.next()
            return Bang(self.unary())
        if tok.kind == "LPAR":
            self.next()
            t = self.term()
            self.expect("RPAR", "')'")
            return t
        if tok.kind == "IDENT":
            name = tok.text
            if is_atom_name(name):
                raise ParseError(f"atom {name!r} used as a term", tok.pos)
            self.next()
            if is_constant_name(name, self.constants):
                return Constant(name)
            return Variable(name)
        raise ParseError("expected term", tok.pos)

    # formulas: imp := or ("->" imp)? ; or := and ("\/" and)* ;
    # and := just ("/\" just)* ; just := term ":" just | atomic

    def formula(self) -> Formula:
        a = self.disj()
        if self.peek().kind == "ARROW":
            self.next()
            return Implies(a, self.formula())
        return a

    def disj(self) -> Formula:
        a = self.conj()
        while self.peek().kind == "OR":
            self.next()
            a = Or(a, self.conj())
        return a

    def conj(self) -> Formula:
        a = self.just()
        while self.peek().kind == "AND":
            self.next()
            a = And(a, self.just())
        return a

    def just(self) -> Formula:
        # A leading "(" may open a term or a formula; try the term route
        # first and fall back unless a ":" commits us to it.
        mark = self.i
        try:
            t = self.term()
            committed = self.peek().kind == "COLON"
        except ParseError:
            committed = False
        if committed:
            self.next()
            return Just(t, self.just())
        self.i = mark
        return self.atomic()

    def atomic(self) -> Formula:
        tok = self.peek()
        if tok.kind == "FALSUM":
            self.next()
            return FALSUM
        if tok.kind == "LPAR":
            self.next()
            a = self.formula()
            self.expect("RPAR", "')'")
            return a
        if tok.kind == "IDENT" and is_atom_name(tok.text):
            self.next()
            return Atom(tok.text)
        raise ParseError("expected formula", tok.pos)


def parse_term(src: str, constants: frozenset[str] = frozenset()) -> Term:
    """Parse a justification term; raises ParseError with a position."""
    p = _Parser(src, constants)
    t = p.term()
    tok = p.peek()
    if tok.kind != "EOF":
        raise ParseError(f"unexpected {tok.text!r} after term", tok.pos)
    return t


def parse_formula(src: str, constants: frozenset[str] = frozenset()) -> Formula:
    """Parse a formula; raises ParseError with a position."""
    p = _Parser(src, constants)
    a = p.formula()
    tok = p.peek()
    if tok.kind != "EOF":
        raise ParseError(f"unexpected {tok.text!r} after formula", tok.pos)
    return a
