"""Printers for core terms and raw terms.

Core output is valid surface syntax: re-parsing and re-checking a printed
term against its original type reproduces the term, which the test suite
uses as a stability check.  Precedence levels match the parser: lambda and
arrow bind loosest, then the pair former, then application, then atoms.
"""

from __future__ import annotations

from typing import Optional

from . import core, parse
from .core import FIB, Signature, Term

TERM, SIGMA, APP, ATOM = 0, 1, 2, 3


def _wrap(text: str, needed: bool) -> str:
    return f"({text})" if needed else text


def _occurs(t: Term, index: int) -> bool:
    if isinstance(t, core.Var):
        return t.index == index
    return any(_occurs(getattr(t, name), index + off) for name, off in t.SUB)


class _CorePrinter:
    def __init__(self, avoid: set[str]):
        self.avoid = avoid
        self.counter = 0

    def fresh_name(self) -> str:
        while True:
            name = f"v{self.counter}"
            self.counter += 1
            if name not in self.avoid:
                return name

    def show(self, t: Term, names: tuple[str, ...], prec: int) -> str:
        match t:
            case core.Var(index):
                if index >= len(names):
                    return f"?v{index - len(names)}"
                return names[len(names) - 1 - index]
            case core.Const(name):
                return name
            case core.Univ(sort):
                return str(sort)
            case core.Pi(dom, cod):
                if _occurs(cod, 0):
                    x = self.fresh_name()
                    body = self.show(cod, names + (x,), TERM)
                    out = f"({x} : {self.show(dom, names, TERM)}) -> {body}"
                else:
                    out = f"{self.show(dom, names, SIGMA)} -> {self.show(cod, names + ('_',), TERM)}"
                return _wrap(out, prec > TERM)
            case core.Lam(body):
                x = self.fresh_name()
                out = f"\\{x}. {self.show(body, names + (x,), TERM)}"
                return _wrap(out, prec > TERM)
            case core.App(fn, arg):
                out = f"{self.show(fn, names, APP)} {self.show(arg, names, ATOM)}"
                return _wrap(out, prec > APP)
            case core.Sigma(fst, snd):
                if _occurs(snd, 0):
                    x = self.fresh_name()
                    body = self.show(snd, names + (x,), SIGMA)
                    out = f"({x} : {self.show(fst, names, TERM)}) × {body}"
                else:
                    out = f"{self.show(fst, names, APP)} × {self.show(snd, names + ('_',), SIGMA)}"
                return _wrap(out, prec > SIGMA)
            case core.Pair(fst, snd):
                return f"({self.show(fst, names, TERM)} , {self.show(snd, names, TERM)})"
            case core.Fst(pair):
                return _wrap(f"fst {self.show(pair, names, ATOM)}", prec > APP)
            case core.Snd(pair):
                return _wrap(f"snd {self.show(pair, names, ATOM)}", prec > APP)
            case core.Unit():
                return "Unit"
            case core.Star():
                return "star"
            case core.Id(layer, ty, lhs, rhs):
                kw = "Id" if layer is FIB else "Eq"
                out = f"{kw} {self.show(ty, names, ATOM)} {self.show(lhs, names, ATOM)} {self.show(rhs, names, ATOM)}"
                return _wrap(out, prec > APP)
            case core.Refl(layer, ty, arg):
                kw = "refl" if layer is FIB else "reflS"
                out = f"{kw} {self.show(ty, names, ATOM)} {self.show(arg, names, ATOM)}"
                return _wrap(out, prec > APP)
            case core.J(layer, motive, base, lhs, rhs, proof):
                kw = "J" if layer is FIB else "JS"
                m = self._binder(motive, names, 2)
                parts = [
                    kw, m,
                    self.show(base, names, ATOM), self.show(lhs, names, ATOM),
                    self.show(rhs, names, ATOM), self.show(proof, names, ATOM),
                ]
                return _wrap(" ".join(parts), prec > APP)
            case core.Nat(layer):
                return "Nat" if layer is FIB else "NatS"
            case core.Zero(_):
                return "zero"
            case core.Suc(_, pred):
                return _wrap(f"suc {self.show(pred, names, ATOM)}", prec > APP)
            case core.NatElim(layer, motive, zcase, scase, scrut):
                kw = "natelim" if layer is FIB else "natelimS"
                parts = [
                    kw, self._binder(motive, names, 1),
                    self.show(zcase, names, ATOM), self._binder(scase, names, 2),
                    self.show(scrut, names, ATOM),
                ]
                return _wrap(" ".join(parts), prec > APP)
            case core.Sum(layer, left, right):
                kw = "Sum" if layer is FIB else "SumS"
                out = f"{kw} {self.show(left, names, ATOM)} {self.show(right, names, ATOM)}"
                return _wrap(out, prec > APP)
            case core.Inl(_, arg):
                return _wrap(f"inl {self.show(arg, names, ATOM)}", prec > APP)
            case core.Inr(_, arg):
                return _wrap(f"inr {self.show(arg, names, ATOM)}", prec > APP)
            case core.SumElim(layer, motive, lcase, rcase, scrut):
                kw = "sumelim" if layer is FIB else "sumelimS"
                parts = [
                    kw, self._binder(motive, names, 1),
                    self._binder(lcase, names, 1), self._binder(rcase, names, 1),
                    self.show(scrut, names, ATOM),
                ]
                return _wrap(" ".join(parts), prec > APP)
            case core.Empty(layer):
                return "Empty" if layer is FIB else "EmptyS"
            case core.EmptyElim(layer, motive, scrut):
                kw = "exfalso" if layer is FIB else "exfalsoS"
                parts = [kw, self._binder(motive, names, 1), self.show(scrut, names, ATOM)]
                return _wrap(" ".join(parts), prec > APP)
        raise core.InternalError(f"pretty: unhandled term {type(t).__name__}")

    def _binder(self, body: Term, names: tuple[str, ...], arity: int) -> str:
        bound = tuple(self.fresh_name() for _ in range(arity))
        inner = self.show(body, names + bound, TERM)
        heads = " ".join(bound)
        return f"(\\{heads}. {inner})"


def pretty(t: Term, sig: Optional[Signature] = None,
           names: tuple[str, ...] = ()) -> str:
    """Render a core term as surface syntax, avoiding capture of
    signature-level names."""
    avoid = set(sig.entries) if sig is not None else set()
    avoid.update(names)
    return _CorePrinter(avoid).show(t, names, TERM)


# ---------------------------------------------------------------------------
# Raw printer (used for the parse/print fixed-point property)


def pretty_raw(t: parse.Raw, prec: int = TERM) -> str:
    match t:
        case parse.RVar(_, name):
            return name
        case parse.RUniv(_, layer, level):
            return f"U{level}" if layer is FIB else f"US{level}"
        case parse.RPi(_, binder, dom, cod):
            if binder is None:
                out = f"{pretty_raw(dom, SIGMA)} -> {pretty_raw(cod, TERM)}"
            else:
                out = f"({binder} : {pretty_raw(dom, TERM)}) -> {pretty_raw(cod, TERM)}"
            return _wrap(out, prec > TERM)
        case parse.RSigma(_, binder, fst, snd):
            if binder is None:
                out = f"{pretty_raw(fst, APP)} × {pretty_raw(snd, SIGMA)}"
            else:
                out = f"({binder} : {pretty_raw(fst, TERM)}) × {pretty_raw(snd, SIGMA)}"
            return _wrap(out, prec > SIGMA)
        case parse.RLam(_, binder, body):
            return _wrap(f"\\{binder}. {pretty_raw(body, TERM)}", prec > TERM)
        case parse.RApp(_, fn, arg):
            return _wrap(f"{pretty_raw(fn, APP)} {pretty_raw(arg, ATOM)}", prec > APP)
        case parse.RPair(_, fst, snd):
            return f"({pretty_raw(fst, TERM)} , {pretty_raw(snd, TERM)})"
        case parse.RFst(_, arg):
            return _wrap(f"fst {pretty_raw(arg, ATOM)}", prec > APP)
        case parse.RSnd(_, arg):
            return _wrap(f"snd {pretty_raw(arg, ATOM)}", prec > APP)
        case parse.RUnit(_):
            return "Unit"
        case parse.RStar(_):
            return "star"
        case parse.RNat(_, layer):
            return "Nat" if layer is FIB else "NatS"
        case parse.RZero(_):
            return "zero"
        case parse.RSuc(_, pred):
            return _wrap(f"suc {pretty_raw(pred, ATOM)}", prec > APP)
        case parse.RNatElim(_, layer, motive, zcase, scase, scrut):
            kw = "natelim" if layer is FIB else "natelimS"
            out = " ".join([kw] + [pretty_raw(x, ATOM) for x in (motive, zcase, scase, scrut)])
            return _wrap(out, prec > APP)
        case parse.RSum(_, layer, left, right):
            kw = "Sum" if layer is FIB else "SumS"
            return _wrap(f"{kw} {pretty_raw(left, ATOM)} {pretty_raw(right, ATOM)}", prec > APP)
        case parse.RInl(_, arg):
            return _wrap(f"inl {pretty_raw(arg, ATOM)}", prec > APP)
        case parse.RInr(_, arg):
            return _wrap(f"inr {pretty_raw(arg, ATOM)}", prec > APP)
        case parse.RSumElim(_, layer, motive, lcase, rcase, scrut):
            kw = "sumelim" if layer is FIB else "sumelimS"
            out = " ".join([kw] + [pretty_raw(x, ATOM) for x in (motive, lcase, rcase, scrut)])
            return _wrap(out, prec > APP)
        case parse.REmpty(_, layer):
            return "Empty" if layer is FIB else "EmptyS"
        case parse.REmptyElim(_, layer, motive, scrut):
            kw = "exfalso" if layer is FIB else "exfalsoS"
            return _wrap(f"{kw} {pretty_raw(motive, ATOM)} {pretty_raw(scrut, ATOM)}", prec > APP)
        case parse.RId(_, layer, ty, lhs, rhs):
            kw = "Id" if layer is FIB else "Eq"
            out = " ".join([kw] + [pretty_raw(x, ATOM) for x in (ty, lhs, rhs)])
            return _wrap(out, prec > APP)
        case parse.RRefl(_, layer, ty, arg):
            kw = "refl" if layer is FIB else "reflS"
            return _wrap(f"{kw} {pretty_raw(ty, ATOM)} {pretty_raw(arg, ATOM)}", prec > APP)
        case parse.RJ(_, layer, motive, base, lhs, rhs, proof):
            kw = "J" if layer is FIB else "JS"
            out = " ".join([kw] + [pretty_raw(x, ATOM) for x in (motive, base, lhs, rhs, proof)])
            return _wrap(out, prec > APP)
        case parse.RHole(_):
            return "_"
    raise core.InternalError(f"pretty_raw: unhandled {type(t).__name__}")


def pretty_raw_decl(d: parse.RawDecl) -> str:
    binders = "".join(f" ({name} : {pretty_raw(ty, TERM)})" for name, ty in d.telescope)
    head = f"{d.kind} {d.name}{binders} : {pretty_raw(d.result, TERM)}"
    if d.body is None:
        return head
    return f"{head} := {pretty_raw(d.body, TERM)}"


def pretty_raw_file(decls: list[parse.RawDecl]) -> str:
    return "\n".join(pretty_raw_decl(d) for d in decls) + "\n"
