import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus_text, elab_corpus
from generators import dag_program, paths
from unfoldtt import nbe
from unfoldtt.core import check_signature, print_signature
from unfoldtt.core import syntax as S
from unfoldtt.core.printer import print_term
from unfoldtt.elab import ElabState, Elaborator, elab_program, elaborate_source, report_goals
from unfoldtt.errors import (
    AbstractUnfoldTarget,
    ConvMismatch,
    DuplicateDefinition,
    UnboundName,
    UnknownUnfoldTarget,
)
from unfoldtt.proplattice import TOP, entails, meet, meet_all
from unfoldtt.surface import ast as A

PLUS = "def (+) : Nat -> Nat -> Nat := \\m n => natelim (\\_ => Nat) n (\\_ ih => suc ih) m\n"
OPLUS = "def (⊕) unfolds (+) : Nat -> Nat -> Nat := \\m n => suc ((+) m n)\n"


def kinds(sig):
    return [(type(d).__name__, d.name) for d in sig]


def test_empty_program():
    st_ = elab_program(ElabState(), [])
    assert len(st_.sig) == 0 and st_.goals == []


def test_program_order():
    st_ = elaborate_source(PLUS + OPLUS)
    assert kinds(st_.sig) == [("PropLe", "(+)"), ("ConstDecl", "(+)"), ("PropLe", "(⊕)"), ("ConstDecl", "(⊕)")]
    assert entails(st_.table.lookup("(⊕)"), st_.table.lookup("(+)"))


def test_unknown_unfold_target():
    with pytest.raises(UnknownUnfoldTarget):
        elaborate_source("def a unfolds b : Nat := ze")


def test_unbound_name_and_builtin_clash():
    with pytest.raises(UnboundName):
        elaborate_source("def a : Nat := b")
    with pytest.raises(DuplicateDefinition):
        elaborate_source("def suc : Nat := ze")


def test_plus_elaborates_to_prop_and_const():
    st_ = elaborate_source(PLUS)
    p = st_.table.lookup("(+)")
    assert st_.sig.decls[0] == S.PropLe("(+)", TOP)
    assert p.atoms and not entails(TOP, p)
    const = st_.sig.const("(+)")
    assert isinstance(const.type, S.Ext) and const.type.prop == p


def test_abbreviation_names_the_meet():
    src = PLUS + "def map : Nat -> Nat := \\x => x\n" + OPLUS + (
        "abbreviation def map-⊕ unfolds map (⊕) : Nat := ze\n"
    )
    st_ = elaborate_source(src)
    t = st_.table
    assert st_.sig.decls[-2] == S.PropEq("map-⊕", meet(t.lookup("map"), t.lookup("(⊕)")))
    assert "prop Υmap-⊕ = Υmap ∧ Υ(⊕)" in print_signature(st_.sig)


def test_abstract_definitions_hide_their_prop():
    src = "abstract def f : Nat := ze\n"
    st_ = elaborate_source(src)
    assert "f" not in st_.table
    (hidden,) = [n for n in st_.table.names() if n.startswith("%abs.")]
    assert st_.table.is_hidden(hidden)
    with pytest.raises(AbstractUnfoldTarget) as exc:
        elaborate_source(src + "def g unfolds f : Nat := f\n")
    assert exc.value.name == "f" and exc.value.abstract_site is not None


def test_abstract_may_unfold():
    st_ = elaborate_source(PLUS + "abstract def z unfolds (+) : Id Nat ((+) ze 3) 3 := refl\n")
    check_signature(st_.sig)


def test_refl_needs_unfolds_to_see_through_plus():
    good = PLUS + "def lem unfolds (+) : (n : Nat) -> Id Nat ((+) ze n) n := \\n => refl\n"
    check_signature(elaborate_source(good).sig)
    with pytest.raises(ConvMismatch) as exc:
        elaborate_source(good.replace(" unfolds (+)", ""))
    assert "out{Υ(+)} (+) ze n" in exc.value.found


def test_bare_constant_synthesizes_out():
    st_ = elaborate_source(PLUS)
    el = Elaborator(st_)
    ctx = nbe.Ctx.empty(st_.sigenv)
    t, ty = el.synth(ctx, A.Name("(+)"))
    assert t == S.Out(st_.table.lookup("(+)"), S.Const("(+)"))
    assert nbe.readback_type(ctx, ty) == S.Pi(S.Nat(), S.Pi(S.Nat(), S.Nat(), "n"), "m")


def test_unfold_hoists_over_the_context():
    st_ = elaborate_source(PLUS + "def lem : (n : Nat) -> Id Nat ((+) ze n) n := \\n => unfold (+) in refl\n")
    chi = st_.sig.const("%unfold.0")
    p = st_.table.lookup("(+)")
    assert isinstance(chi.type, S.Pi) and isinstance(chi.type.cod, S.Ext)
    assert chi.type.cod.prop == p and isinstance(chi.type.cod.boundary, S.Refl)
    body = st_.sig.const("lem").type.boundary
    assert body == S.Lam(S.Out(p, S.App(S.Const("%unfold.0"), S.Var(0))), "n")


def test_unfold_in_empty_context():
    st_ = elaborate_source(PLUS + "def lem : Id Nat ((+) ze 2) 2 := unfold (+) in refl\n")
    chi = st_.sig.const("%unfold.0")
    assert isinstance(chi.type, S.Ext)
    assert st_.sig.const("lem").type.boundary == S.Out(chi.type.prop, S.Const("%unfold.0"))


def test_unfold_under_hypothesis_abstracts_it():
    src = PLUS + OPLUS + "def lem unfolds (+) : Id Nat ((⊕) ze 2) 3 := unfold (⊕) in refl\n"
    st_ = elaborate_source(src)
    chi = st_.sig.const("%unfold.0")
    assert isinstance(chi.type, S.PropPi) and chi.type.prop == st_.table.lookup("(+)")
    assert isinstance(st_.sig.const("lem").type.boundary.tm, S.PropApp)


def test_goals_in_source_order():
    st_ = elaborate_source("def a : Nat := ?\ndef b : Id Nat a a := ?\n")
    assert [g.number for g in report_goals(st_)] == [0, 1]
    assert report_goals(elaborate_source(PLUS)) == []


def test_goal_progression_of_left_unit():
    def goal(name):
        st_ = elab_corpus(name)
        (g,) = report_goals(st_)
        return print_term(g.type, [e.name for e in g.telescope.term_vars], st_.table)

    assert goal("left-unit-1.utt").startswith("El (out{Υ(⊕)-left-unit-type}")
    assert goal("left-unit-2.utt") == "Id (El (out{ΥVec} Vec n)) (out{Υ(⊕)} (⊕) ze n (out{Υvnil} vnil) u) u"
    assert goal("unfold-in-1.utt") == "El (out{Υ(+)} (%unfold.0 n u))"
    assert goal("unfold-in-2.utt") == goal("left-unit-2.utt")


def test_two_styles_differ_only_in_entailment():
    st_ = elab_corpus("unfold-in-3.utt")
    check_signature(st_.sig)
    t = st_.table
    assert entails(t.lookup("(⊕)-left-unit"), t.lookup("(⊕)"))
    assert not entails(t.lookup("(⊕)-left-unit'"), t.lookup("(⊕)"))


def test_elaboration_is_deterministic():
    text = corpus_text("unfold-in-3.utt")
    assert print_signature(elaborate_source(text).sig) == print_signature(elaborate_source(text).sig)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8))
def test_dag_laws(seed, n):
    prog = dag_program(random.Random(seed), n)
    st_ = elaborate_source(prog.source)
    check_signature(st_.sig)

    def prop(x):
        return st_.table.lookup(st_.defs[x].prop)

    for a, b in paths(prog.deps):
        assert entails(prop(a), prop(b))
    for a in prog.abbrv:
        m = meet_all(prop(d) for d in prog.deps[a])
        assert entails(prop(a), m) and entails(m, prop(a))
