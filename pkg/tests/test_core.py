import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import elab_corpus
from unfoldtt import nbe
from unfoldtt.core import check_signature, check_term, check_type, infer_term, load_signature, print_signature
from unfoldtt.core import syntax as S
from unfoldtt.core.printer import print_term
from unfoldtt.errors import (
    BoundaryMismatch,
    DuplicateConst,
    DuplicateProp,
    IllTypedDecl,
    NotAType,
    PropNotTrue,
    TypeMismatch,
)
from unfoldtt.oracle import TermGen, fragment
from unfoldtt.proplattice import TOP, Atom, Prop, entails, meet

NAT = S.Nat()
PLUS_BODY = S.Lam(S.Lam(S.NatElim(NAT, S.Var(0), S.Suc(S.Var(0)), S.Var(1), ("_", "_", "ih")), "n"), "m")
PLUS_TY = S.Pi(NAT, S.Pi(NAT, NAT, "n"), "m")
A0 = Prop(frozenset({Atom(0, "(+)")}))


def plus_sig():
    return S.Signature(
        (S.PropLe("(+)", TOP), S.ConstDecl("(+)", S.Ext(PLUS_TY, A0, PLUS_BODY), role="def", assumes=TOP))
    )


def ctx_for(sig, *hyps):
    ctx = nbe.Ctx.empty(load_signature(sig))
    for h in hyps:
        ctx = ctx.assume(h)
    return ctx


def test_empty_signature():
    table, tele = check_signature(S.Signature())
    assert table.names() == [] and len(tele) == 0


def test_plus_signature_checks():
    table, tele = check_signature(plus_sig())
    assert table.lookup("(+)") == A0
    (entry,) = tele
    assert entry.name == "(+)" and entry.type == S.Ext(PLUS_TY, A0, PLUS_BODY)


def test_plus_signature_prints_three_lines():
    assert print_signature(plus_sig()).splitlines() == [
        "prop Υ(+) ≤ ⊤",
        "δ(+) : {⊤} Nat → Nat → Nat := λ m n. natelim [_. Nat] n [_ ih. suc ih] m",
        "const (+) : {Nat → Nat → Nat | Υ(+) ↪ δ(+)}",
    ]


def test_undeclared_prop_in_const_type():
    sig = S.Signature((S.ConstDecl("c", S.Ext(NAT, A0, S.Zero())),))
    with pytest.raises(IllTypedDecl):
        check_signature(sig)


def test_duplicates_rejected():
    with pytest.raises(DuplicateConst):
        check_signature(S.Signature((S.ConstDecl("c", NAT), S.ConstDecl("c", NAT))))
    with pytest.raises(DuplicateProp):
        check_signature(S.Signature((S.PropLe("p", TOP), S.PropLe("p", TOP))))


def test_constant_boundary_extension_type():
    check_type(ctx_for(plus_sig()), S.Ext(NAT, A0, S.Zero()))


def test_prop_pi_scopes_its_hypothesis():
    sig = plus_sig().extend(S.ConstDecl("k", S.PropPi(A0, NAT)))
    a = S.Id(NAT, S.PropApp(S.Const("k"), A0), S.Zero())
    check_type(ctx_for(sig), S.PropPi(A0, a))
    with pytest.raises(PropNotTrue):
        check_type(ctx_for(sig), a)


def test_el_of_nat_code_is_nat():
    ctx = ctx_for(S.Signature())
    check_type(ctx, S.El(S.NatCode()))
    assert nbe.conv_type(ctx, ctx.eval(S.El(S.NatCode())), nbe.NAT)


def test_not_a_type():
    with pytest.raises(NotAType):
        check_type(ctx_for(S.Signature()), S.Zero())


def test_in_of_the_boundary():
    ctx = ctx_for(plus_sig())
    check_term(ctx, S.In(A0, PLUS_BODY), ctx.eval(S.Ext(PLUS_TY, A0, PLUS_BODY)))


def test_in_with_wrong_boundary():
    ctx = ctx_for(plus_sig())
    with pytest.raises(BoundaryMismatch):
        check_term(ctx, S.In(A0, S.Zero()), ctx.eval(S.Ext(NAT, A0, S.numeral(1))))


def test_prop_app_needs_truth():
    sig = plus_sig().extend(S.ConstDecl("k", S.PropPi(A0, NAT)))
    with pytest.raises(PropNotTrue):
        infer_term(ctx_for(sig), S.PropApp(S.Const("k"), A0))
    assert infer_term(ctx_for(sig, A0), S.PropApp(S.Const("k"), A0)) == nbe.NAT


def test_out_in_cancels():
    ctx = ctx_for(plus_sig())
    t = S.Out(A0, S.In(A0, S.numeral(2)))
    check_term(ctx, t, nbe.NAT)
    assert nbe.conv(ctx, nbe.NAT, ctx.eval(t), ctx.eval(S.numeral(2)))


def test_refl_needs_the_unfolding():
    n = S.Var(0)
    lhs = S.App(S.App(S.Out(A0, S.Const("(+)")), S.Zero()), n)
    goal = S.Id(NAT, lhs, n)
    ctx = ctx_for(plus_sig()).bind("n", nbe.NAT)
    with pytest.raises(TypeMismatch):
        check_term(ctx, S.Refl(n), ctx.eval(goal))
    check_term(ctx.assume(A0), S.Refl(n), ctx.assume(A0).eval(goal))


def test_printer_spells_binders_and_props():
    t = S.Pi(NAT, S.Id(NAT, S.Var(0), S.Var(0)), "x")
    assert print_term(t) == "(x : Nat) → Id Nat x x"
    assert print_term(S.Pi(NAT, NAT)) == "Nat → Nat"
    assert print_term(S.PropLam(TOP, S.Zero())) == "λ{⊤}. ze"


def test_printer_depth_cap():
    assert print_term(S.numeral(3), max_depth=2) == "suc (suc …)"


def test_prefix_closure_on_corpus():
    st_ = elab_corpus("transitive.utt")
    decls = st_.sig.decls
    full, _ = check_signature(st_.sig)
    for k in range(len(decls) + 1):
        table, tele = check_signature(S.Signature(decls[:k]))
        for name in table.names():
            assert full.lookup(name) == table.lookup(name)


# -- weakening and strengthening on generated terms ---------------------------

FR = fragment()
SIGENV = load_signature(FR.sig)
SETTINGS = list(FR.settings.values())


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(SETTINGS), st.sampled_from(SETTINGS))
def test_weakening(seed, h, extra):
    t = TermGen(FR, random.Random(seed)).nat(5, 1, h)
    ctx = nbe.Ctx.empty(SIGENV).assume(h).bind("n", nbe.NAT)
    check_term(ctx, t, nbe.NAT)
    check_term(ctx.assume(extra), t, nbe.NAT)
    check_term(ctx.bind("z", nbe.NAT), S.shift(t, 1), nbe.NAT)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(SETTINGS), st.sampled_from(SETTINGS))
def test_truth_strengthening(seed, h, p):
    if not entails(h, p):
        h = meet(h, p)
    t = TermGen(FR, random.Random(seed)).nat(5, 1, h)
    ctx = nbe.Ctx.empty(SIGENV).assume(h).bind("n", nbe.NAT)
    check_term(ctx.assume(p), t, nbe.NAT)
    check_term(ctx, t, nbe.NAT)
