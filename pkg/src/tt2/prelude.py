"""Built-in axioms, stated in surface syntax and elaborated at start-up.

The strict fragment gets uniqueness of identity proofs and function
extensionality; each fibrant universe that can be quantified over gets a
univalence axiom whose statement is the fully unfolded equivalence type of
the coercion map.  All three are inert: none carries a computation rule.

Quantifying over a universe needs the next level up, so in a hierarchy of
L levels the axioms live at level L-2 and the top universe has no
univalence axiom of its own.
"""

from __future__ import annotations

from .core import DeclKind, InternalError, Signature
from .elab import Config, elaborate_signature
from .parse import parse_file


def _is_equiv(a: str, b: str, f: str) -> str:
    """The unfolded statement that ``f`` (an atom) is an equivalence from
    ``a`` to ``b`` (atoms): half-adjoint-free, two one-sided inverses."""
    return (
        f"((g : {b} -> {a}) × Id ({a} -> {a}) (\\x. g ({f} x)) (\\x. x))"
        f" × ((h : {b} -> {a}) × Id ({b} -> {b}) (\\x. {f} (h x)) (\\x. x))"
    )


def _ua_axiom(i: int) -> str:
    eq = f"(Id U{i} A B)"
    equiv_at = lambda b: f"((f : A -> {b}) × ({_is_equiv('A', b, 'f')}))"
    id_equiv = (
        "((\\x. x) , (((\\x. x) , refl (A -> A) (\\x. x)) ,"
        " ((\\x. x) , refl (A -> A) (\\x. x))))"
    )
    coe = lambda p: f"(J (\\B2. \\q. {equiv_at('B2')}) {id_equiv} A B {p})"
    stmt = (
        f"((g : {equiv_at('B')} -> {eq}) ×"
        f" Id ({eq} -> {eq}) (\\p. g {coe('p')}) (\\p. p))"
        f" × ((h : {equiv_at('B')} -> {eq}) ×"
        f" Id ({equiv_at('B')} -> {equiv_at('B')}) (\\e. {coe('(h e)')}) (\\e. e))"
    )
    return f"postulate ua{i} : (A : U{i}) -> (B : U{i}) -> {stmt}"


def prelude_source(config: Config) -> str:
    """Surface text of the built-in axioms for the configured hierarchy."""
    top = config.universes - 2
    if top < 0:
        return ""
    lines = [
        "postulate uip : "
        f"(A : US{top}) -> (a : A) -> (b : A) -> (p : Eq A a b) -> "
        "(q : Eq A a b) -> Eq (Eq A a b) p q",
        "postulate funextS : "
        f"(A : US{top}) -> (B : A -> US{top}) -> (f : (x : A) -> B x) -> "
        "(g : (x : A) -> B x) -> ((x : A) -> Eq (B x) (f x) (g x)) -> "
        "Eq ((x : A) -> B x) f g",
    ]
    for i in range(config.universes - 1):
        lines.append(_ua_axiom(i))
    return "\n".join(lines) + "\n"


def initial_signature(config: Config = Config()) -> Signature:
    """A fresh signature containing exactly the built-in axioms."""
    source = prelude_source(config)
    if not source:
        return Signature()
    decls = parse_file(source)
    sig, diagnostics = elaborate_signature(
        decls, config=config, kind_override=DeclKind.AXIOM
    )
    if diagnostics:
        raise InternalError(
            "the built-in axioms failed to elaborate: "
            + "; ".join(d.message for d in diagnostics)
        )
    return sig
