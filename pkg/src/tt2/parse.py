"""Lexer and recursive-descent parser for the surface language.

Precedence, loosest to tightest: lambda bodies extend right, then ``->``
(right associative), then the pair former ``×`` (right associative), then
application (left associative), then atoms.  Built-in eliminators parse as
saturated primaries: ``J`` takes five atomic arguments, ``natelim`` four,
and so on, so partial application of a built-in is a parse-time arity
decision rather than a typing one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .core import FIB, STRICT, Layer
from .diagnostics import Diagnostic, ILLEGAL_CHAR, SYNTAX, Span


# ---------------------------------------------------------------------------
# Raw terms


@dataclass(frozen=True)
class Raw:
    span: Span = field(compare=False)


@dataclass(frozen=True)
class RVar(Raw):
    name: str


@dataclass(frozen=True)
class RUniv(Raw):
    layer: Layer
    level: int


@dataclass(frozen=True)
class RPi(Raw):
    binder: Optional[str]
    dom: Raw
    cod: Raw


@dataclass(frozen=True)
class RSigma(Raw):
    binder: Optional[str]
    fst: Raw
    snd: Raw


@dataclass(frozen=True)
class RLam(Raw):
    binder: str
    body: Raw


@dataclass(frozen=True)
class RApp(Raw):
    fn: Raw
    arg: Raw


@dataclass(frozen=True)
class RPair(Raw):
    fst: Raw
    snd: Raw


@dataclass(frozen=True)
class RFst(Raw):
    arg: Raw


@dataclass(frozen=True)
class RSnd(Raw):
    arg: Raw


@dataclass(frozen=True)
class RUnit(Raw):
    pass


@dataclass(frozen=True)
class RStar(Raw):
    pass


@dataclass(frozen=True)
class RNat(Raw):
    layer: Layer


@dataclass(frozen=True)
class RZero(Raw):
    pass


@dataclass(frozen=True)
class RSuc(Raw):
    pred: Raw


@dataclass(frozen=True)
class RNatElim(Raw):
    layer: Layer
    motive: Raw
    zcase: Raw
    scase: Raw
    scrut: Raw


@dataclass(frozen=True)
class RSum(Raw):
    layer: Layer
    left: Raw
    right: Raw


@dataclass(frozen=True)
class RInl(Raw):
    arg: Raw


@dataclass(frozen=True)
class RInr(Raw):
    arg: Raw


@dataclass(frozen=True)
class RSumElim(Raw):
    layer: Layer
    motive: Raw
    lcase: Raw
    rcase: Raw
    scrut: Raw


@dataclass(frozen=True)
class REmpty(Raw):
    layer: Layer


@dataclass(frozen=True)
class REmptyElim(Raw):
    layer: Layer
    motive: Raw
    scrut: Raw


@dataclass(frozen=True)
class RId(Raw):
    layer: Layer
    ty: Raw
    lhs: Raw
    rhs: Raw


@dataclass(frozen=True)
class RRefl(Raw):
    layer: Layer
    ty: Raw
    arg: Raw


@dataclass(frozen=True)
class RJ(Raw):
    layer: Layer
    motive: Raw
    base: Raw
    lhs: Raw
    rhs: Raw
    proof: Raw


@dataclass(frozen=True)
class RHole(Raw):
    pass


@dataclass(frozen=True)
class RawDecl:
    kind: str  # "def" | "postulate"
    name: str
    telescope: tuple[tuple[str, Raw], ...]
    result: Raw
    body: Optional[Raw]
    span: Span


# ---------------------------------------------------------------------------
# Lexer

KEYWORDS = {
    "def", "postulate",
    "Unit", "star",
    "Nat", "NatS", "zero", "suc", "natelim", "natelimS",
    "Sum", "SumS", "inl", "inr", "sumelim", "sumelimS",
    "Empty", "EmptyS", "exfalso", "exfalsoS",
    "Id", "Eq", "refl", "reflS", "J", "JS",
    "fst", "snd",
}

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_']*")
_UNIV = re.compile(r"^U(S?)([0-9]+)$")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span


def lex(source: str) -> list[Token]:
    """Tokenize; comments (`--` line, `{- -}` nested block) and whitespace
    are skipped.  Raises a Diagnostic on characters outside the grammar."""
    tokens: list[Token] = []
    i, n = 0, len(source)
    while i < n:
        c = source[i]
        if c in " \t\r\n":
            i += 1
            continue
        if source.startswith("--", i):
            nl = source.find("\n", i)
            i = n if nl < 0 else nl + 1
            continue
        if source.startswith("{-", i):
            depth, j = 1, i + 2
            while j < n and depth:
                if source.startswith("{-", j):
                    depth, j = depth + 1, j + 2
                elif source.startswith("-}", j):
                    depth, j = depth - 1, j + 2
                else:
                    j += 1
            if depth:
                raise Diagnostic(SYNTAX, (i, n), "unterminated block comment")
            i = j
            continue
        if source.startswith(":=", i):
            tokens.append(Token("ASSIGN", ":=", (i, i + 2)))
            i += 2
            continue
        if source.startswith("->", i):
            tokens.append(Token("ARROW", "->", (i, i + 2)))
            i += 2
            continue
        simple = {
            "(": "LPAREN", ")": "RPAREN", ",": "COMMA", ":": "COLON",
            ".": "DOT", "\\": "LAMBDA", "λ": "LAMBDA", "×": "TIMES",
        }
        if c in simple:
            tokens.append(Token(simple[c], c, (i, i + 1)))
            i += 1
            continue
        if c == "_":
            tokens.append(Token("UNDERSCORE", "_", (i, i + 1)))
            i += 1
            continue
        m = _IDENT.match(source, i)
        if m:
            text = m.group(0)
            span = (i, m.end())
            if text in KEYWORDS:
                tokens.append(Token(text, text, span))
            elif _UNIV.match(text):
                tokens.append(Token("UNIV", text, span))
            else:
                tokens.append(Token("IDENT", text, span))
            i = m.end()
            continue
        raise Diagnostic(ILLEGAL_CHAR, (i, i + 1), f"illegal character {c!r}")
    tokens.append(Token("EOF", "", (n, n)))
    return tokens


# ---------------------------------------------------------------------------
# Parser

_SATURATED_UNARY = {"suc": RSuc, "fst": RFst, "snd": RSnd, "inl": RInl, "inr": RInr}
_LAYERED_NULLARY = {
    "Nat": (RNat, FIB), "NatS": (RNat, STRICT),
    "Empty": (REmpty, FIB), "EmptyS": (REmpty, STRICT),
}
_ATOM_STARTERS = {
    "IDENT", "UNIV", "LPAREN", "UNDERSCORE", "Unit", "star", "zero",
} | set(_SATURATED_UNARY) | set(_LAYERED_NULLARY) | {
    "Sum", "SumS", "refl", "reflS", "Id", "Eq", "exfalso", "exfalsoS",
    "natelim", "natelimS", "sumelim", "sumelimS", "J", "JS",
}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise Diagnostic(
                SYNTAX, tok.span,
                f"expected {kind}, found {tok.text!r}" if tok.text else f"expected {kind}, found end of input",
            )
        return self.next()

    def fail(self, expected: str) -> Diagnostic:
        tok = self.peek()
        found = repr(tok.text) if tok.text else "end of input"
        return Diagnostic(SYNTAX, tok.span, f"expected {expected}, found {found}")

    # -- declarations -------------------------------------------------------

    def parse_file(self) -> list[RawDecl]:
        decls = []
        while self.peek().kind != "EOF":
            decls.append(self.parse_decl())
        return decls

    def parse_decl(self) -> RawDecl:
        tok = self.peek()
        if tok.kind not in ("def", "postulate"):
            raise self.fail("'def' or 'postulate'")
        self.next()
        name = self.expect("IDENT")
        telescope = []
        while self.peek().kind == "LPAREN":
            for bname, ty in self.parse_binder_group():
                telescope.append((bname, ty))
        self.expect("COLON")
        result = self.parse_term()
        body = None
        if tok.kind == "def":
            self.expect("ASSIGN")
            body = self.parse_term()
        end = self.tokens[self.pos - 1].span[1]
        return RawDecl(tok.kind, name.text, tuple(telescope), result, body, (tok.span[0], end))

    def parse_binder_group(self) -> list[tuple[str, Raw]]:
        self.expect("LPAREN")
        names = []
        while self.peek().kind in ("IDENT", "UNDERSCORE"):
            names.append(self.next().text)
        if not names:
            raise self.fail("binder name")
        self.expect("COLON")
        ty = self.parse_term()
        self.expect("RPAREN")
        return [(name, ty) for name in names]

    # -- terms --------------------------------------------------------------

    def parse_term(self) -> Raw:
        if self.peek().kind == "LAMBDA":
            return self.parse_lambda()
        return self.parse_pi()

    def parse_lambda(self) -> Raw:
        start = self.expect("LAMBDA")
        names = []
        while self.peek().kind in ("IDENT", "UNDERSCORE"):
            names.append(self.next().text)
        if not names:
            raise self.fail("lambda binder")
        self.expect("DOT")
        body = self.parse_term()
        for name in reversed(names):
            body = RLam((start.span[0], body.span[1]), name, body)
        return body

    def parse_pi(self) -> Raw:
        left = self.parse_sigma()
        if self.peek().kind == "ARROW":
            self.next()
            cod = self.parse_pi()
            return RPi((left.span[0], cod.span[1]), None, left, cod)
        return left

    def _at_binder_group(self) -> bool:
        if self.peek().kind != "LPAREN":
            return False
        i = 1
        while self.peek(i).kind in ("IDENT", "UNDERSCORE"):
            i += 1
        return i > 1 and self.peek(i).kind == "COLON"

    def parse_sigma(self) -> Raw:
        if self._at_binder_group():
            groups: list[tuple[str, Raw]] = []
            while self._at_binder_group():
                groups.extend(self.parse_binder_group())
            tok = self.peek()
            if tok.kind == "ARROW":
                self.next()
                cod = self.parse_pi()
                for name, ty in reversed(groups):
                    binder = None if name == "_" else name
                    cod = RPi((ty.span[0], cod.span[1]), binder, ty, cod)
                return cod
            if tok.kind == "TIMES":
                self.next()
                snd = self.parse_sigma()
                for name, ty in reversed(groups):
                    binder = None if name == "_" else name
                    snd = RSigma((ty.span[0], snd.span[1]), binder, ty, snd)
                return snd
            raise self.fail("'->' or '×' after binder")
        left = self.parse_app()
        if self.peek().kind == "TIMES":
            self.next()
            snd = self.parse_sigma()
            return RSigma((left.span[0], snd.span[1]), None, left, snd)
        return left

    def parse_app(self) -> Raw:
        fn = self.parse_atom()
        while self.peek().kind in _ATOM_STARTERS:
            arg = self.parse_atom()
            fn = RApp((fn.span[0], arg.span[1]), fn, arg)
        return fn

    def _atoms(self, count: int, what: str) -> list[Raw]:
        args = []
        for _ in range(count):
            if self.peek().kind not in _ATOM_STARTERS:
                raise self.fail(f"argument of {what}")
            args.append(self.parse_atom())
        return args

    def parse_atom(self) -> Raw:
        tok = self.peek()
        kind = tok.kind
        if kind == "IDENT":
            self.next()
            return RVar(tok.span, tok.text)
        if kind == "UNIV":
            self.next()
            m = _UNIV.match(tok.text)
            assert m
            layer = STRICT if m.group(1) else FIB
            return RUniv(tok.span, layer, int(m.group(2)))
        if kind == "UNDERSCORE":
            self.next()
            return RHole(tok.span)
        if kind == "Unit":
            self.next()
            return RUnit(tok.span)
        if kind == "star":
            self.next()
            return RStar(tok.span)
        if kind == "zero":
            self.next()
            return RZero(tok.span)
        if kind in _LAYERED_NULLARY:
            self.next()
            ctor, layer = _LAYERED_NULLARY[kind]
            return ctor(tok.span, layer)
        if kind in _SATURATED_UNARY:
            self.next()
            (arg,) = self._atoms(1, kind)
            return _SATURATED_UNARY[kind]((tok.span[0], arg.span[1]), arg)
        if kind in ("Sum", "SumS"):
            self.next()
            left, right = self._atoms(2, kind)
            return RSum((tok.span[0], right.span[1]), FIB if kind == "Sum" else STRICT, left, right)
        if kind in ("refl", "reflS"):
            self.next()
            ty, arg = self._atoms(2, kind)
            return RRefl((tok.span[0], arg.span[1]), FIB if kind == "refl" else STRICT, ty, arg)
        if kind in ("Id", "Eq"):
            self.next()
            ty, lhs, rhs = self._atoms(3, kind)
            return RId((tok.span[0], rhs.span[1]), FIB if kind == "Id" else STRICT, ty, lhs, rhs)
        if kind in ("exfalso", "exfalsoS"):
            self.next()
            motive, scrut = self._atoms(2, kind)
            return REmptyElim((tok.span[0], scrut.span[1]), FIB if kind == "exfalso" else STRICT, motive, scrut)
        if kind in ("natelim", "natelimS"):
            self.next()
            motive, zcase, scase, scrut = self._atoms(4, kind)
            layer = FIB if kind == "natelim" else STRICT
            return RNatElim((tok.span[0], scrut.span[1]), layer, motive, zcase, scase, scrut)
        if kind in ("sumelim", "sumelimS"):
            self.next()
            motive, lcase, rcase, scrut = self._atoms(4, kind)
            layer = FIB if kind == "sumelim" else STRICT
            return RSumElim((tok.span[0], scrut.span[1]), layer, motive, lcase, rcase, scrut)
        if kind in ("J", "JS"):
            self.next()
            motive, base, lhs, rhs, proof = self._atoms(5, kind)
            layer = FIB if kind == "J" else STRICT
            return RJ((tok.span[0], proof.span[1]), layer, motive, base, lhs, rhs, proof)
        if kind == "LPAREN":
            self.next()
            inner = self.parse_term()
            if self.peek().kind == "COMMA":
                parts = [inner]
                while self.peek().kind == "COMMA":
                    self.next()
                    parts.append(self.parse_term())
                close = self.expect("RPAREN")
                pair = parts[-1]
                for part in reversed(parts[:-1]):
                    pair = RPair((tok.span[0], close.span[1]), part, pair)
                return pair
            self.expect("RPAREN")
            return inner
        raise self.fail("a term")


def parse_term(source: str) -> Raw:
    parser = _Parser(lex(source))
    term = parser.parse_term()
    parser.expect("EOF")
    return term


def parse_file(source: str) -> list[RawDecl]:
    """Parse a whole surface file; total on text (declarations or a
    Diagnostic, never divergence)."""
    return _Parser(lex(source)).parse_file()
