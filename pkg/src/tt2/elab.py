"""Bidirectional elaboration of raw terms into core.

Inference synthesizes a type value; checking pushes an expected type value
into introduction forms.  Fibrant-to-strict coercion is pure subsumption:
no wrapper node exists, a term checked at a strict sort is the same core
term that was synthesized at a fibrant one.  The fibrancy guards reject
fibrant eliminators whose motive lands in a strict sort; the strict
eliminators are unrestricted, which is what lets strict naturals
large-eliminate into the fibrant universes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import conv, core, parse, pretty
from .conv import (
    Closure, VEmpty, VId, VNat, VNeutral, VPi, VRefl, VSigma, VSuc, VSum,
    VUniv, VUnit, VZero, VInl, VInr, Value, evaluate,
)
from .core import (
    DeclKind, FIB, Layer, SigEntry, Signature, Sort, Term, sort_join,
    sort_leq,
)
from .diagnostics import (
    CANNOT_INFER, Diagnostic, DUPLICATE, FIBRANCY, HOLE, LEVEL,
    NOT_A_TYPE, SORT_MISMATCH, Span, TYPE_MISMATCH, UNBOUND,
)


@dataclass(frozen=True)
class Config:
    universes: int = 3
    collapse_fibrant_universes: bool = False
    json_diagnostics: bool = False
    color: bool = False
    include_paths: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.universes < 1:
            raise ValueError("at least one universe level is required")


@dataclass(frozen=True)
class Ctx:
    names: tuple[Optional[str], ...] = ()
    types: tuple[Value, ...] = ()
    env: tuple[Value, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.env)

    def extend(self, name: Optional[str], ty: Value) -> "Ctx":
        var = conv.fresh(self.depth, ty)
        return Ctx(self.names + (name,), self.types + (ty,), self.env + (var,))

    def lookup(self, name: str) -> Optional[tuple[int, Value]]:
        for i in range(len(self.names) - 1, -1, -1):
            if self.names[i] == name:
                return len(self.names) - 1 - i, self.types[i]
        return None


_FIBRANT_ELIMS = {"J", "natelim", "sumelim", "exfalso"}


def check_elim(kind: str, layer: Layer, motive_sort: Sort, span: Span) -> None:
    """Fibrant eliminators may only target fibrant motives; strict
    eliminators are unrestricted."""
    if layer is FIB and motive_sort.layer is not FIB:
        raise Diagnostic(
            FIBRANCY, span,
            f"the fibrant eliminator {kind} cannot target a strict motive "
            f"(motive lands in {motive_sort})",
        )


class Elaborator:
    def __init__(self, sig: Signature, config: Config = Config()):
        self.sig = sig
        self.config = config

    # -- helpers ------------------------------------------------------------

    def subsume(self, got: Sort, want: Sort) -> bool:
        return sort_leq(got, want, self.config.collapse_fibrant_universes)

    def join(self, a: Sort, b: Sort) -> Sort:
        return sort_join(a, b, self.config.collapse_fibrant_universes)

    def eval(self, ctx: Ctx, t: Term) -> Value:
        return evaluate(self.sig, ctx.env, t)

    def _show(self, ctx: Ctx, v: Value) -> str:
        names = tuple(n if n is not None else "_" for n in ctx.names)
        return pretty.pretty(conv.quote(self.sig, ctx.depth, v), self.sig, names)

    def _universe_sort(self, layer: Layer, level: int, span: Span) -> Sort:
        if not 0 <= level < self.config.universes:
            raise Diagnostic(
                LEVEL, span,
                f"universe level {level} out of range (configured count "
                f"{self.config.universes})",
            )
        return Sort(layer, level)

    def _successor_sort(self, sort: Sort, span: Span) -> Sort:
        if sort.level + 1 >= self.config.universes:
            raise Diagnostic(
                LEVEL, span,
                f"the top universe {sort} has no classifying universe at "
                f"count {self.config.universes}",
            )
        return Sort(sort.layer, sort.level + 1)

    def sort_of(self, depth: int, ty: Value, span: Span = (0, 0)) -> Sort:
        """Sort of a semantic type; neutral types read their sort off the
        universe annotation."""
        match ty:
            case VUniv(s):
                return self._successor_sort(s, span)
            case VPi(dom, cod) | VSigma(dom, cod):
                s1 = self.sort_of(depth, dom, span)
                var = conv.fresh(depth, dom)
                s2 = self.sort_of(depth + 1, cod.apply(self.sig, var), span)
                return self.join(s1, s2)
            case VUnit():
                return Sort(FIB, 0)
            case VId(layer, t, _, _):
                inner = self.sort_of(depth, t, span)
                return Sort(layer, inner.level)
            case VNat(layer) | VEmpty(layer):
                return Sort(layer, 0)
            case VSum(layer, left, right):
                sl = self.sort_of(depth, left, span)
                sr = self.sort_of(depth, right, span)
                return Sort(layer, max(sl.level, sr.level))
            case VNeutral(_, _, anno):
                if isinstance(anno, VUniv):
                    return anno.sort
                raise Diagnostic(NOT_A_TYPE, span, "not a type: unannotated neutral value")
        raise Diagnostic(NOT_A_TYPE, span, "not a type")

    def ensure_type(self, ctx: Ctx, raw: parse.Raw) -> tuple[Term, Sort]:
        tm, ty = self.infer(ctx, raw)
        if isinstance(ty, VUniv):
            return tm, ty.sort
        raise Diagnostic(
            NOT_A_TYPE, raw.span,
            f"expected a type, but this has type {self._show(ctx, ty)}",
        )

    def _peel_lambdas(self, raw: parse.Raw, arity: int, what: str) -> tuple[list[str], parse.Raw]:
        names = []
        body = raw
        for _ in range(arity):
            if not isinstance(body, parse.RLam):
                raise Diagnostic(
                    CANNOT_INFER, raw.span,
                    f"the {what} must be written as a {arity}-argument lambda",
                )
            names.append(body.binder)
            body = body.body
        return names, body

    # -- inference ----------------------------------------------------------

    def infer(self, ctx: Ctx, raw: parse.Raw) -> tuple[Term, Value]:
        match raw:
            case parse.RVar(span, name):
                hit = ctx.lookup(name)
                if hit is not None:
                    index, ty = hit
                    return core.Var(index), ty
                entry = self.sig.lookup(name)
                if entry is not None:
                    return core.Const(name), conv.const_type_value(self.sig, name)
                raise Diagnostic(UNBOUND, span, f"unbound name {name!r}")
            case parse.RUniv(span, layer, level):
                sort = self._universe_sort(layer, level, span)
                return core.Univ(sort), VUniv(self._successor_sort(sort, span))
            case parse.RPi(_, binder, dom, cod):
                dom_core, s1 = self.ensure_type(ctx, dom)
                inner = ctx.extend(binder, self.eval(ctx, dom_core))
                cod_core, s2 = self.ensure_type(inner, cod)
                return core.Pi(dom_core, cod_core), VUniv(self.join(s1, s2))
            case parse.RSigma(_, binder, fst, snd):
                fst_core, s1 = self.ensure_type(ctx, fst)
                inner = ctx.extend(binder, self.eval(ctx, fst_core))
                snd_core, s2 = self.ensure_type(inner, snd)
                return core.Sigma(fst_core, snd_core), VUniv(self.join(s1, s2))
            case parse.RLam(span, _, _):
                raise Diagnostic(CANNOT_INFER, span, "cannot infer the type of a bare lambda")
            case parse.RPair(span, _, _):
                raise Diagnostic(CANNOT_INFER, span, "cannot infer the type of a bare pair")
            case parse.RApp(span, fn, arg):
                fn_core, fn_ty = self.infer(ctx, fn)
                if not isinstance(fn_ty, VPi):
                    raise Diagnostic(
                        TYPE_MISMATCH, span,
                        f"expected a function, but this has type {self._show(ctx, fn_ty)}",
                    )
                arg_core = self.check(ctx, arg, fn_ty.dom)
                result = fn_ty.cod.apply(self.sig, self.eval(ctx, arg_core))
                return core.App(fn_core, arg_core), result
            case parse.RFst(span, pair):
                pair_core, pair_ty = self.infer(ctx, pair)
                if not isinstance(pair_ty, VSigma):
                    raise Diagnostic(
                        TYPE_MISMATCH, span,
                        f"expected a pair, but this has type {self._show(ctx, pair_ty)}",
                    )
                return core.Fst(pair_core), pair_ty.fst
            case parse.RSnd(span, pair):
                pair_core, pair_ty = self.infer(ctx, pair)
                if not isinstance(pair_ty, VSigma):
                    raise Diagnostic(
                        TYPE_MISMATCH, span,
                        f"expected a pair, but this has type {self._show(ctx, pair_ty)}",
                    )
                fst_v = conv.do_fst(self.sig, self.eval(ctx, pair_core))
                return core.Snd(pair_core), pair_ty.snd.apply(self.sig, fst_v)
            case parse.RUnit(_):
                return core.Unit(), VUniv(Sort(FIB, 0))
            case parse.RStar(_):
                return core.Star(), VUnit()
            case parse.RNat(span, layer):
                return core.Nat(layer), VUniv(self._universe_sort(layer, 0, span))
            case parse.REmpty(span, layer):
                return core.Empty(layer), VUniv(self._universe_sort(layer, 0, span))
            case parse.RZero(span) | parse.RSuc(span, _):
                raise Diagnostic(
                    CANNOT_INFER, span,
                    "cannot infer the layer of a bare numeral; check it against "
                    "Nat or NatS",
                )
            case parse.RInl(span, _) | parse.RInr(span, _):
                raise Diagnostic(
                    CANNOT_INFER, span,
                    "cannot infer the type of a bare injection",
                )
            case parse.RSum(span, layer, left, right):
                left_core, sl = self.ensure_type(ctx, left)
                right_core, sr = self.ensure_type(ctx, right)
                if layer is FIB and (sl.layer is not FIB or sr.layer is not FIB):
                    bad = sl if sl.layer is not FIB else sr
                    raise Diagnostic(
                        SORT_MISMATCH, span,
                        f"fibrant sums need fibrant summands, got sort {bad}",
                    )
                sort = Sort(layer, max(sl.level, sr.level))
                return core.Sum(layer, left_core, right_core), VUniv(sort)
            case parse.RId(span, layer, ty, lhs, rhs):
                ty_core, s = self.ensure_type(ctx, ty)
                if layer is FIB and s.layer is not FIB:
                    raise Diagnostic(
                        SORT_MISMATCH, span,
                        f"fibrant equality requires a fibrant type, got sort {s}",
                    )
                ty_v = self.eval(ctx, ty_core)
                lhs_core = self.check(ctx, lhs, ty_v)
                rhs_core = self.check(ctx, rhs, ty_v)
                return core.Id(layer, ty_core, lhs_core, rhs_core), VUniv(Sort(layer, s.level))
            case parse.RRefl(span, layer, ty, arg):
                ty_core, s = self.ensure_type(ctx, ty)
                if layer is FIB and s.layer is not FIB:
                    raise Diagnostic(
                        SORT_MISMATCH, span,
                        f"fibrant equality requires a fibrant type, got sort {s}",
                    )
                ty_v = self.eval(ctx, ty_core)
                arg_core = self.check(ctx, arg, ty_v)
                arg_v = self.eval(ctx, arg_core)
                return core.Refl(layer, ty_core, arg_core), VId(layer, ty_v, arg_v, arg_v)
            case parse.RJ(span, layer, motive, base, lhs, rhs, proof):
                return self._infer_j(ctx, raw)
            case parse.RNatElim(_, _, _, _, _, _):
                return self._infer_natelim(ctx, raw)
            case parse.RSumElim(_, _, _, _, _, _):
                return self._infer_sumelim(ctx, raw)
            case parse.REmptyElim(_, _, _, _):
                return self._infer_emptyelim(ctx, raw)
            case parse.RHole(span):
                raise Diagnostic(HOLE, span, "holes are not supported; write the term explicitly")
        raise core.InternalError(f"infer: unhandled raw {type(raw).__name__}")

    def _infer_j(self, ctx: Ctx, raw: parse.RJ) -> tuple[Term, Value]:
        kw = "J" if raw.layer is FIB else "JS"
        proof_core, proof_ty = self.infer(ctx, raw.proof)
        if not isinstance(proof_ty, VId) or proof_ty.layer is not raw.layer:
            eq = "fibrant" if raw.layer is FIB else "strict"
            raise Diagnostic(
                TYPE_MISMATCH, raw.proof.span,
                f"{kw} expects a proof of {eq} equality, but this has type "
                f"{self._show(ctx, proof_ty)}",
            )
        ty_v = proof_ty.ty
        lhs_core = self.check(ctx, raw.lhs, ty_v)
        lhs_v = self.eval(ctx, lhs_core)
        if not conv.convert(self.sig, ctx.depth, lhs_v, proof_ty.lhs, ty_v):
            raise Diagnostic(
                TYPE_MISMATCH, raw.lhs.span,
                f"{kw}: stated left endpoint does not match the proof's endpoint",
            )
        rhs_core = self.check(ctx, raw.rhs, ty_v)
        rhs_v = self.eval(ctx, rhs_core)
        if not conv.convert(self.sig, ctx.depth, rhs_v, proof_ty.rhs, ty_v):
            raise Diagnostic(
                TYPE_MISMATCH, raw.rhs.span,
                f"{kw}: stated right endpoint does not match the proof's endpoint",
            )
        (bname, pname), mbody = self._peel_lambdas(raw.motive, 2, f"motive of {kw}")
        inner = ctx.extend(None if bname == "_" else bname, ty_v)
        endpoint = inner.env[-1]
        proof_var_ty = VId(raw.layer, ty_v, lhs_v, endpoint)
        inner2 = inner.extend(None if pname == "_" else pname, proof_var_ty)
        motive_core, motive_ty = self.infer(inner2, mbody)
        if not isinstance(motive_ty, VUniv):
            raise Diagnostic(
                NOT_A_TYPE, mbody.span,
                f"the motive of {kw} must produce a type",
            )
        check_elim(kw, raw.layer, motive_ty.sort, raw.motive.span)
        motive_cl = Closure(ctx.env, motive_core, 2)
        refl_v = VRefl(raw.layer, ty_v, lhs_v)
        base_expected = motive_cl.apply(self.sig, lhs_v, refl_v)
        base_core = self.check(ctx, raw.base, base_expected)
        proof_v = self.eval(ctx, proof_core)
        result = motive_cl.apply(self.sig, rhs_v, proof_v)
        term = core.J(raw.layer, motive_core, base_core, lhs_core, rhs_core, proof_core)
        return term, result

    def _infer_natelim(self, ctx: Ctx, raw: parse.RNatElim) -> tuple[Term, Value]:
        kw = "natelim" if raw.layer is FIB else "natelimS"
        scrut_core = self.check(ctx, raw.scrut, VNat(raw.layer))
        (mname,), mbody = self._peel_lambdas(raw.motive, 1, f"motive of {kw}")
        inner = ctx.extend(None if mname == "_" else mname, VNat(raw.layer))
        motive_core, motive_ty = self.infer(inner, mbody)
        if not isinstance(motive_ty, VUniv):
            raise Diagnostic(NOT_A_TYPE, mbody.span, f"the motive of {kw} must produce a type")
        check_elim(kw, raw.layer, motive_ty.sort, raw.motive.span)
        motive_cl = Closure(ctx.env, motive_core)
        zcase_core = self.check(ctx, raw.zcase, motive_cl.apply(self.sig, VZero(raw.layer)))
        (pname, ihname), sbody = self._peel_lambdas(raw.scase, 2, f"step case of {kw}")
        step1 = ctx.extend(None if pname == "_" else pname, VNat(raw.layer))
        pred_var = step1.env[-1]
        step2 = step1.extend(
            None if ihname == "_" else ihname, motive_cl.apply(self.sig, pred_var)
        )
        scase_expected = motive_cl.apply(self.sig, VSuc(raw.layer, pred_var))
        scase_core = self.check(step2, sbody, scase_expected)
        scrut_v = self.eval(ctx, scrut_core)
        result = motive_cl.apply(self.sig, scrut_v)
        term = core.NatElim(raw.layer, motive_core, zcase_core, scase_core, scrut_core)
        return term, result

    def _infer_sumelim(self, ctx: Ctx, raw: parse.RSumElim) -> tuple[Term, Value]:
        kw = "sumelim" if raw.layer is FIB else "sumelimS"
        scrut_core, scrut_ty = self.infer(ctx, raw.scrut)
        if not isinstance(scrut_ty, VSum) or scrut_ty.layer is not raw.layer:
            raise Diagnostic(
                TYPE_MISMATCH, raw.scrut.span,
                f"{kw} expects a {'fibrant' if raw.layer is FIB else 'strict'} sum, "
                f"but this has type {self._show(ctx, scrut_ty)}",
            )
        (mname,), mbody = self._peel_lambdas(raw.motive, 1, f"motive of {kw}")
        inner = ctx.extend(None if mname == "_" else mname, scrut_ty)
        motive_core, motive_ty = self.infer(inner, mbody)
        if not isinstance(motive_ty, VUniv):
            raise Diagnostic(NOT_A_TYPE, mbody.span, f"the motive of {kw} must produce a type")
        check_elim(kw, raw.layer, motive_ty.sort, raw.motive.span)
        motive_cl = Closure(ctx.env, motive_core)
        (lname,), lbody = self._peel_lambdas(raw.lcase, 1, f"left case of {kw}")
        lctx = ctx.extend(None if lname == "_" else lname, scrut_ty.left)
        lvar = lctx.env[-1]
        lcase_core = self.check(
            lctx, lbody, motive_cl.apply(self.sig, VInl(raw.layer, lvar))
        )
        (rname,), rbody = self._peel_lambdas(raw.rcase, 1, f"right case of {kw}")
        rctx = ctx.extend(None if rname == "_" else rname, scrut_ty.right)
        rvar = rctx.env[-1]
        rcase_core = self.check(
            rctx, rbody, motive_cl.apply(self.sig, VInr(raw.layer, rvar))
        )
        scrut_v = self.eval(ctx, scrut_core)
        term = core.SumElim(raw.layer, motive_core, lcase_core, rcase_core, scrut_core)
        return term, motive_cl.apply(self.sig, scrut_v)

    def _infer_emptyelim(self, ctx: Ctx, raw: parse.REmptyElim) -> tuple[Term, Value]:
        kw = "exfalso" if raw.layer is FIB else "exfalsoS"
        scrut_core = self.check(ctx, raw.scrut, VEmpty(raw.layer))
        (mname,), mbody = self._peel_lambdas(raw.motive, 1, f"motive of {kw}")
        inner = ctx.extend(None if mname == "_" else mname, VEmpty(raw.layer))
        motive_core, motive_ty = self.infer(inner, mbody)
        if not isinstance(motive_ty, VUniv):
            raise Diagnostic(NOT_A_TYPE, mbody.span, f"the motive of {kw} must produce a type")
        check_elim(kw, raw.layer, motive_ty.sort, raw.motive.span)
        motive_cl = Closure(ctx.env, motive_core)
        scrut_v = self.eval(ctx, scrut_core)
        term = core.EmptyElim(raw.layer, motive_core, scrut_core)
        return term, motive_cl.apply(self.sig, scrut_v)

    # -- checking -----------------------------------------------------------

    def check(self, ctx: Ctx, raw: parse.Raw, expected: Value) -> Term:
        match raw:
            case parse.RLam(span, binder, body):
                if not isinstance(expected, VPi):
                    raise Diagnostic(
                        TYPE_MISMATCH, span,
                        f"lambda checked against non-function type "
                        f"{self._show(ctx, expected)}",
                    )
                inner = ctx.extend(None if binder == "_" else binder, expected.dom)
                var = inner.env[-1]
                body_core = self.check(inner, body, expected.cod.apply(self.sig, var))
                return core.Lam(body_core)
            case parse.RPair(span, fst, snd):
                if not isinstance(expected, VSigma):
                    raise Diagnostic(
                        TYPE_MISMATCH, span,
                        f"pair checked against non-pair type {self._show(ctx, expected)}",
                    )
                fst_core = self.check(ctx, fst, expected.fst)
                fst_v = self.eval(ctx, fst_core)
                snd_core = self.check(ctx, snd, expected.snd.apply(self.sig, fst_v))
                return core.Pair(fst_core, snd_core)
            case parse.RZero(span):
                if isinstance(expected, VNat):
                    return core.Zero(expected.layer)
                raise Diagnostic(
                    TYPE_MISMATCH, span,
                    f"numeral checked against {self._show(ctx, expected)}",
                )
            case parse.RSuc(span, pred):
                if isinstance(expected, VNat):
                    return core.Suc(expected.layer, self.check(ctx, pred, expected))
                raise Diagnostic(
                    TYPE_MISMATCH, span,
                    f"numeral checked against {self._show(ctx, expected)}",
                )
            case parse.RInl(span, arg):
                if isinstance(expected, VSum):
                    return core.Inl(expected.layer, self.check(ctx, arg, expected.left))
                raise Diagnostic(
                    TYPE_MISMATCH, span,
                    f"injection checked against {self._show(ctx, expected)}",
                )
            case parse.RInr(span, arg):
                if isinstance(expected, VSum):
                    return core.Inr(expected.layer, self.check(ctx, arg, expected.right))
                raise Diagnostic(
                    TYPE_MISMATCH, span,
                    f"injection checked against {self._show(ctx, expected)}",
                )
            case parse.RHole(span):
                raise Diagnostic(HOLE, span, "holes are not supported; write the term explicitly")
        term, got = self.infer(ctx, raw)
        if isinstance(got, VUniv) and isinstance(expected, VUniv):
            if self.subsume(got.sort, expected.sort):
                return term
            raise Diagnostic(
                SORT_MISMATCH, raw.span,
                f"universe {got.sort} is not contained in {expected.sort}",
            )
        if conv.convert_type(self.sig, ctx.depth, got, expected):
            return term
        raise Diagnostic(
            TYPE_MISMATCH, raw.span,
            f"expected {self._show(ctx, expected)}, got {self._show(ctx, got)}",
        )


# ---------------------------------------------------------------------------
# Declarations


def _decl_to_raw(decl: parse.RawDecl) -> tuple[parse.Raw, Optional[parse.Raw]]:
    """Fold the telescope into the result type (and the body into lambdas)."""
    ty: parse.Raw = decl.result
    for name, binder_ty in reversed(decl.telescope):
        binder = None if name == "_" else name
        ty = parse.RPi((binder_ty.span[0], ty.span[1]), binder, binder_ty, ty)
    body = decl.body
    if body is not None:
        for name, _ in reversed(decl.telescope):
            body = parse.RLam((decl.span[0], body.span[1]), name, body)
    return ty, body


def elaborate_signature(
    decls: list[parse.RawDecl],
    sig: Optional[Signature] = None,
    config: Config = Config(),
    kind_override: Optional[DeclKind] = None,
) -> tuple[Signature, list[Diagnostic]]:
    """Process declarations in order, collecting one diagnostic per failed
    declaration and continuing with the rest."""
    if sig is None:
        sig = Signature()
    diagnostics: list[Diagnostic] = []
    elab = Elaborator(sig, config)
    for decl in decls:
        try:
            if sig.lookup(decl.name) is not None:
                raise Diagnostic(
                    DUPLICATE, decl.span, f"duplicate top-level name {decl.name!r}"
                )
            ty_raw, body_raw = _decl_to_raw(decl)
            ty_core, _ = elab.ensure_type(Ctx(), ty_raw)
            body_core = None
            if decl.kind == "def":
                ty_v = evaluate(sig, (), ty_core)
                body_core = elab.check(Ctx(), body_raw, ty_v)
                kind = DeclKind.DEFINITION
            else:
                kind = DeclKind.POSTULATE
            if kind_override is not None:
                kind = kind_override
            sig.add(SigEntry(decl.name, ty_core, body_core, kind))
        except Diagnostic as diag:
            diagnostics.append(diag)
    return sig, diagnostics
