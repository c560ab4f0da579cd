import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import elab_corpus
from unfoldtt import nbe
from unfoldtt.core import check_term, load_signature
from unfoldtt.core import syntax as S
from unfoldtt.errors import Inconclusive
from unfoldtt.oracle import TermGen, fragment, oracle_conv, oracle_for, rewrite_step
from unfoldtt.proplattice import TOP

FR = fragment()
SIGENV = load_signature(FR.sig)
ORACLE = oracle_for(FR.sig)


@pytest.fixture(scope="module")
def plus():
    st_ = elab_corpus("plus.utt")
    return st_.sig, st_.table.lookup("(+)")


def plus_ze_n(p):
    return S.App(S.App(S.Out(p, S.Const("(+)")), S.Zero()), S.Var(0))


def test_out_in_step():
    a = S.numeral(2)
    assert a in ORACLE.rewrite_step(TOP, S.Out(FR.a, S.In(FR.a, a)))


def test_collapse_step_yields_the_boundary():
    one = S.Out(FR.a, S.Const("one"))
    assert ORACLE.rewrite_step(FR.a, one) == {S.Suc(S.Zero())}
    assert ORACLE.rewrite_step(TOP, one) == frozenset()


def test_collapse_through_application():
    t = S.Out(FR.b, S.App(S.Const("chi"), S.Var(0)))
    assert ORACLE.rewrite_step(FR.b, t) == {S.Suc(S.Var(0))}


def test_zero_is_normal():
    assert ORACLE.rewrite_step(TOP, S.Zero()) == frozenset()


def test_eta_contractions():
    x = S.App(S.Const("chi"), S.Var(0))
    assert x in ORACLE.rewrite_step(TOP, S.In(FR.b, S.Out(FR.b, x)))
    assert S.Const("f") in ORACLE.rewrite_step(TOP, S.Lam(S.App(S.Const("f"), S.Var(0))))


def test_plus_examples(plus):
    sig, p = plus
    assert oracle_conv(sig, TOP, S.Zero(), S.Zero())
    assert oracle_conv(sig, p, plus_ze_n(p), S.Var(0))
    assert not oracle_conv(sig, TOP, plus_ze_n(p), S.Var(0))
    assert rewrite_step(sig, TOP, plus_ze_n(p)) == frozenset()


def test_budget_exhaustion_is_not_a_boolean():
    gen = TermGen(FR, random.Random(0))
    t = S.Zero()
    for _ in range(6):
        t = S.App(S.App(S.Out(FR.a, S.Const("plus")), t), S.Out(FR.a, S.Const("one")))
    with pytest.raises(Inconclusive):
        ORACLE.conv(FR.b, t, gen.nat(3, 1, FR.b), budget=50)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(list(FR.settings.values())))
def test_rewrite_steps_preserve_typing(seed, h):
    rng = random.Random(seed)
    t = TermGen(FR, rng).nat(4, 1, h)
    ctx = nbe.Ctx.empty(SIGENV).bind("n", nbe.NAT).assume(h)
    for r in sorted(ORACLE.rewrite_step(h, t), key=repr)[:10]:
        check_term(ctx, r, nbe.NAT)
        assert nbe.conv(ctx, nbe.NAT, ctx.eval(t), ctx.eval(r))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(list(FR.settings.values())))
def test_oracle_agrees_with_nbe(seed, h):
    rng = random.Random(seed)
    gen = TermGen(FR, rng)
    t1 = gen.nat(4, 1, h)
    t2 = gen.reduct(ORACLE, h, t1, 3) if rng.random() < 0.5 else gen.nat(4, 1, h)
    ctx = nbe.Ctx.empty(SIGENV).bind("n", nbe.NAT).assume(h)
    try:
        expected = ORACLE.conv(h, t1, t2)
    except Inconclusive:
        return
    assert nbe.conv(ctx, nbe.NAT, ctx.eval(t1), ctx.eval(t2)) == expected
