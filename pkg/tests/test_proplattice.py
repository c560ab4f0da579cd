import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from generators import random_props, random_table
from unfoldtt.errors import DuplicateProp, UnknownProp
from unfoldtt.proplattice import (
    FALSE,
    TOP,
    Atom,
    Prop,
    PropTable,
    entails,
    extend_eq,
    extend_le,
    frontier_or,
    frontier_true,
    meet,
    top,
)

props = st.frozensets(st.integers(0, 6).map(Atom), max_size=5).map(Prop)


def _plus_oplus():
    t = extend_le(PropTable.empty(), "(+)", TOP)
    return extend_le(t, "(⊕)", t.lookup("(+)"))


def test_top_is_empty_conjunction():
    assert top().atoms == frozenset()
    assert entails(top(), top())


def test_meet_is_union():
    a, b = Prop(frozenset({Atom(0)})), Prop(frozenset({Atom(1)}))
    assert meet(a, b).atoms == {Atom(0), Atom(1)}


def test_transitive_unfolding_entailment():
    t = _plus_oplus()
    assert entails(t.lookup("(⊕)"), t.lookup("(+)"))
    assert not entails(t.lookup("(+)"), t.lookup("(⊕)"))


def test_extend_le_allocates_fresh_atom():
    t = extend_le(PropTable.empty(), "(+)", TOP)
    assert t.lookup("(+)").atoms == {Atom(0)}
    assert t.next_atom == 1


def test_duplicate_names_rejected():
    t = extend_le(PropTable.empty(), "p", TOP)
    with pytest.raises(DuplicateProp):
        extend_le(t, "p", TOP)
    with pytest.raises(DuplicateProp):
        extend_eq(t, "p", TOP)


def test_unknown_lookup():
    with pytest.raises(UnknownProp):
        PropTable.empty().lookup("nope")


def test_extend_eq_names_the_meet():
    t = extend_le(PropTable.empty(), "map", TOP)
    t = extend_le(t, "(⊕)", TOP)
    m = meet(t.lookup("map"), t.lookup("(⊕)"))
    t = extend_eq(t, "map-⊕", m)
    assert t.lookup("map-⊕") == m
    assert t.next_atom == 2


def test_extend_eq_top_is_always_true():
    t = extend_eq(PropTable.empty(), "p", TOP)
    assert entails(TOP, t.lookup("p"))


def test_hidden_atoms_are_tracked():
    t = extend_le(PropTable.empty(), "%abs.0", TOP, hidden=True)
    assert t.is_hidden("%abs.0")
    assert t.knows(t.lookup("%abs.0"))


def test_frontier_examples():
    t = _plus_oplus()
    p, q = t.lookup("(+)"), t.lookup("(⊕)")
    r = extend_le(t, "r", TOP).lookup("r")
    assert frontier_or(FALSE, p).disjuncts == {p}
    assert frontier_or(frontier_or(FALSE, p), meet(p, r)).disjuncts == {p}
    assert frontier_or(frontier_or(FALSE, p), r).disjuncts == {p, r}
    assert not frontier_true(q, FALSE)
    assert frontier_true(q, frontier_or(FALSE, p))
    assert not frontier_true(TOP, frontier_or(FALSE, p))


def test_frontier_weaker_disjunct_replaces_stronger():
    t = _plus_oplus()
    p, q = t.lookup("(+)"), t.lookup("(⊕)")
    assert frontier_or(frontier_or(FALSE, q), p).disjuncts == {p}


@given(props, props, props)
def test_semilattice_laws(p, q, r):
    assert meet(p, meet(q, r)) == meet(meet(p, q), r)
    assert meet(p, q) == meet(q, p)
    assert meet(p, p) == p
    assert meet(p, TOP) == p
    assert entails(meet(p, q), p)


@given(props, props, props)
def test_entailment_is_a_partial_order(p, q, r):
    assert entails(p, p)
    if entails(p, q) and entails(q, r):
        assert entails(p, r)
    if entails(p, q) and entails(q, p):
        assert p == q
    assert entails(p, q) == (meet(p, q) == p)


@given(st.integers(0, 2**32 - 1), st.integers(0, 30))
def test_entailment_stable_under_extension(seed, n):
    rng = random.Random(seed)
    t = random_table(rng, n)
    ps = random_props(rng, t, 4)
    before = {(i, j): entails(a, b) for i, a in enumerate(ps) for j, b in enumerate(ps)}
    t2 = extend_le(t, "fresh", rng.choice(ps))
    assert t2.lookup("fresh").atoms - ps[0].atoms
    for (i, j), v in before.items():
        assert entails(ps[i], ps[j]) == v
    # entailments involving already-named props survive in the new table
    for name in t.names():
        assert t2.lookup(name) == t.lookup(name)


@given(st.lists(props, max_size=4), props, props)
def test_frontier_truth_monotone(ds, h1, extra):
    f = FALSE
    for d in ds:
        f = frontier_or(f, d)
    if frontier_true(h1, f):
        assert frontier_true(meet(h1, extra), f)


@given(st.lists(props, max_size=5))
def test_frontier_is_antichain(ds):
    f = FALSE
    for d in ds:
        f = frontier_or(f, d)
    for a in f.disjuncts:
        for b in f.disjuncts:
            assert a == b or not entails(a, b)
    # the frontier is equivalent to the plain disjunction
    for d in ds:
        assert frontier_true(d, f)
