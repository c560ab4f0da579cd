"""The free bounded meet semilattice of unfolding propositions.

A proposition is a finite set of atoms read as their conjunction, so ``⊤`` is
the empty set, meet is union and ``p ≤ q`` is ``atoms(q) ⊆ atoms(p)``.
Declaring ``prop p ≤ q`` allocates one fresh atom and conjoins it with ``q``;
declaring ``prop p = q`` simply names ``q``'s atom set.

Frontiers are finite disjunctions of propositions kept as antichains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from unfoldtt.errors import DuplicateProp, UnknownProp


@dataclass(frozen=True, order=True)
class Atom:
    id: int
    hint: str = field(default="", compare=False)

    def __repr__(self):
        return f"a{self.id}" + (f"<{self.hint}>" if self.hint else "")


@dataclass(frozen=True)
class Prop:
    atoms: frozenset = frozenset()

    def __repr__(self):
        if not self.atoms:
            return "⊤"
        return " ∧ ".join(repr(a) for a in sorted(self.atoms))

    @property
    def is_top(self) -> bool:
        return not self.atoms


TOP = Prop()


def top() -> Prop:
    return TOP


def meet(p: Prop, q: Prop) -> Prop:
    if not q.atoms or p.atoms >= q.atoms:
        return p
    if not p.atoms:
        return q
    return Prop(p.atoms | q.atoms)


def meet_all(props: Iterable[Prop]) -> Prop:
    out = TOP
    for p in props:
        out = meet(out, p)
    return out


def entails(p: Prop, q: Prop) -> bool:
    """``p ≤ q``: every atom of ``q`` is among the atoms of ``p``."""
    return q.atoms <= p.atoms


@dataclass(frozen=True)
class PropTable:
    """Named propositions of one elaboration session.

    Tables are persistent: ``extend_le`` / ``extend_eq`` return new tables and
    leave the receiver untouched.  Atom ids come from ``next_atom``, so folding
    the same declarations over an empty table always yields the same atoms.
    """

    entries: Mapping[str, Prop] = field(default_factory=lambda: MappingProxyType({}))
    hidden: frozenset = frozenset()
    next_atom: int = 0

    @classmethod
    def empty(cls) -> "PropTable":
        return cls()

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def lookup(self, name: str) -> Prop:
        try:
            return self.entries[name]
        except KeyError:
            raise UnknownProp(f"unknown proposition {name!r}") from None

    def knows(self, p: Prop) -> bool:
        """Whether every atom of ``p`` has been allocated by this table."""
        return all(0 <= a.id < self.next_atom for a in p.atoms)

    def is_hidden(self, name: str) -> bool:
        p = self.entries.get(name)
        return p is not None and any(a in self.hidden for a in p.atoms)

    def names(self) -> list[str]:
        return list(self.entries)

    def _with(self, name: str, p: Prop, **kw) -> "PropTable":
        entries = dict(self.entries)
        entries[name] = p
        return PropTable(
            MappingProxyType(entries),
            kw.get("hidden", self.hidden),
            kw.get("next_atom", self.next_atom),
        )


def extend_le(t: PropTable, name: str, q: Prop, hidden: bool = False) -> PropTable:
    """``prop name ≤ q``: a fresh atom conjoined with ``q``."""
    if name in t.entries:
        raise DuplicateProp(f"proposition {name!r} already declared")
    a = Atom(t.next_atom, name)
    hid = t.hidden | {a} if hidden else t.hidden
    return t._with(name, Prop(q.atoms | {a}), hidden=hid, next_atom=t.next_atom + 1)


def extend_eq(t: PropTable, name: str, q: Prop) -> PropTable:
    """``prop name = q``: no new atom, ``name`` abbreviates ``q``."""
    if name in t.entries:
        raise DuplicateProp(f"proposition {name!r} already declared")
    return t._with(name, q)


@dataclass(frozen=True)
class Frontier:
    """Disjunction of propositions; the empty frontier is false."""

    disjuncts: frozenset = frozenset()

    def __repr__(self):
        if not self.disjuncts:
            return "⊥"
        return " ∨ ".join(repr(d) for d in sorted(self.disjuncts, key=_prop_key))

    def __bool__(self):
        return bool(self.disjuncts)


FALSE = Frontier()


def _prop_key(p: Prop):
    return sorted(a.id for a in p.atoms)


def frontier_or(f: Frontier, p: Prop) -> Frontier:
    # p is absorbed if it is stronger than some existing disjunct
    if any(entails(p, d) for d in f.disjuncts):
        return f
    kept = frozenset(d for d in f.disjuncts if not entails(d, p))
    return Frontier(kept | {p})


def frontier_join(f: Frontier, g: Frontier) -> Frontier:
    for p in sorted(g.disjuncts, key=_prop_key):
        f = frontier_or(f, p)
    return f


def frontier_true(hyps: Prop, f: Frontier) -> bool:
    return any(entails(hyps, d) for d in f.disjuncts)
