"""Brute-force definitional equality on a small first-order fragment.

The oracle reads the equations of the core calculus as rewrite rules and
decides ``t1 ≡ t2`` by searching the two forward rewrite closures for a
common term.  It shares nothing with :mod:`unfoldtt.nbe` except the term
datatype: substitution, the typing needed to find boundaries, and the rules
themselves are all reimplemented here, so agreement between the two is
meaningful evidence.

η rules are used only as contractions, which keeps every closure finite.
"""

from __future__ import annotations

import heapq
import itertools
import random
from collections import deque
from dataclasses import dataclass, field

from unfoldtt.core import syntax as S
from unfoldtt.core.syntax import (
    App,
    Const,
    Ext,
    In,
    Lam,
    Nat,
    NatElim,
    Out,
    Pi,
    PropApp,
    PropLam,
    PropPi,
    Suc,
    Var,
    Zero,
)
from unfoldtt.errors import Inconclusive
from unfoldtt.proplattice import TOP, Prop, PropTable, entails, extend_le, meet

DEFAULT_BUDGET = 10_000


# -- de Bruijn plumbing (deliberately independent of core.syntax) -------------


def _lift(t, by: int, cutoff: int = 0):
    match t:
        case Var(i):
            return Var(i + by) if i >= cutoff else t
        case App(f, a):
            return App(_lift(f, by, cutoff), _lift(a, by, cutoff))
        case Lam(b):
            return Lam(_lift(b, by, cutoff + 1), t.name)
        case Suc(n):
            return Suc(_lift(n, by, cutoff))
        case NatElim(m, b, s, x):
            return NatElim(
                _lift(m, by, cutoff + 1), _lift(b, by, cutoff), _lift(s, by, cutoff + 2), _lift(x, by, cutoff), t.names
            )
        case Out(p, x):
            return Out(p, _lift(x, by, cutoff))
        case In(p, x):
            return In(p, _lift(x, by, cutoff))
        case PropApp(x, p):
            return PropApp(_lift(x, by, cutoff), p)
        case PropLam(p, x):
            return PropLam(p, _lift(x, by, cutoff))
        case Pi(d, c):
            return Pi(_lift(d, by, cutoff), _lift(c, by, cutoff + 1), t.name)
        case PropPi(p, x):
            return PropPi(p, _lift(x, by, cutoff))
        case Ext(a, p, m):
            return Ext(_lift(a, by, cutoff), p, _lift(m, by, cutoff))
    return t  # closed leaves: Const, Nat, Zero


def _subst(t, j: int, s):
    """Replace ``Var(j)`` by ``s`` and close the gap left by the binder."""
    match t:
        case Var(i):
            if i == j:
                return _lift(s, j)
            return Var(i - 1) if i > j else t
        case App(f, a):
            return App(_subst(f, j, s), _subst(a, j, s))
        case Lam(b):
            return Lam(_subst(b, j + 1, s), t.name)
        case Suc(n):
            return Suc(_subst(n, j, s))
        case NatElim(m, b, st, x):
            return NatElim(_subst(m, j + 1, s), _subst(b, j, s), _subst(st, j + 2, s), _subst(x, j, s), t.names)
        case Out(p, x):
            return Out(p, _subst(x, j, s))
        case In(p, x):
            return In(p, _subst(x, j, s))
        case PropApp(x, p):
            return PropApp(_subst(x, j, s), p)
        case PropLam(p, x):
            return PropLam(p, _subst(x, j, s))
        case Pi(d, c):
            return Pi(_subst(d, j, s), _subst(c, j + 1, s), t.name)
        case PropPi(p, x):
            return PropPi(p, _subst(x, j, s))
        case Ext(a, p, m):
            return Ext(_subst(a, j, s), p, _subst(m, j, s))
    return t


def _occurs(t, j: int) -> bool:
    match t:
        case Var(i):
            return i == j
        case App(f, a):
            return _occurs(f, j) or _occurs(a, j)
        case Lam(b):
            return _occurs(b, j + 1)
        case Suc(n):
            return _occurs(n, j)
        case NatElim(m, b, s, x):
            return _occurs(m, j + 1) or _occurs(b, j) or _occurs(s, j + 2) or _occurs(x, j)
        case Out(_, x) | In(_, x) | PropApp(x, _) | PropLam(_, x):
            return _occurs(x, j)
    return False


# -- the rewrite system --------------------------------------------------------


class Oracle:
    """Rewriting over a fixed signature of constant types."""

    def __init__(self, const_types: dict, budget: int = DEFAULT_BUDGET):
        self.types = dict(const_types)
        self.budget = budget
        self._steps: dict = {}

    def type_of(self, t):
        """Syntactic type of an elimination spine, enough to find boundaries."""
        match t:
            case Const(name):
                return self.types.get(name)
            case App(f, a):
                ft = self.type_of(f)
                if isinstance(ft, Pi):
                    return _subst(ft.cod, 0, a)
            case PropApp(f, _):
                ft = self.type_of(f)
                if isinstance(ft, PropPi):
                    return ft.body
            case Out(_, x):
                xt = self.type_of(x)
                if isinstance(xt, Ext):
                    return xt.ty
            case In(p, x):
                return Ext(Nat(), p, x)
        return None

    def _root(self, hyps: Prop, t):
        """Rewrites applying at the root of ``t``."""
        match t:
            case App(Lam(b), a):
                yield _subst(b, 0, a)
            case NatElim(_, base, _, Zero()):
                yield base
            case NatElim(m, base, step, Suc(n)):
                ih = NatElim(m, base, step, n, t.names)
                yield _subst(_subst(step, 1, n), 0, ih)
            case Out(p, In(_, a)):
                yield a
            case PropApp(PropLam(_, b), _):
                yield b
            case In(p, Out(q, x)) if p == q:
                yield x
            case PropLam(p, PropApp(x, q)) if p == q:
                yield x
            case Lam(App(f, Var(0))) if not _occurs(f, 0):
                yield _subst(f, 0, Zero())  # drop the binder; Var 0 is absent
        if isinstance(t, Out) and entails(hyps, t.prop):
            ty = self.type_of(t.tm)
            if isinstance(ty, Ext) and entails(hyps, ty.prop):
                yield ty.boundary

    def rewrite_step(self, hyps: Prop, t) -> frozenset:
        key = (hyps, t)
        hit = self._steps.get(key)
        if hit is not None:
            return hit
        out = set(self._root(hyps, t))
        match t:
            case App(f, a):
                out |= {App(f2, a) for f2 in self.rewrite_step(hyps, f)}
                out |= {App(f, a2) for a2 in self.rewrite_step(hyps, a)}
            case Lam(b):
                out |= {Lam(b2, t.name) for b2 in self.rewrite_step(hyps, b)}
            case Suc(n):
                out |= {Suc(n2) for n2 in self.rewrite_step(hyps, n)}
            case NatElim(m, b, s, x):
                out |= {NatElim(m, b2, s, x, t.names) for b2 in self.rewrite_step(hyps, b)}
                out |= {NatElim(m, b, s2, x, t.names) for s2 in self.rewrite_step(hyps, s)}
                out |= {NatElim(m, b, s, x2, t.names) for x2 in self.rewrite_step(hyps, x)}
            case Out(p, x):
                out |= {Out(p, x2) for x2 in self.rewrite_step(hyps, x)}
            case In(p, x):
                out |= {In(p, x2) for x2 in self.rewrite_step(hyps, x)}
            case PropApp(x, p):
                out |= {PropApp(x2, p) for x2 in self.rewrite_step(hyps, x)}
            case PropLam(p, x):
                out |= {PropLam(p, x2) for x2 in self.rewrite_step(meet(hyps, p), x)}
        res = frozenset(out)
        self._steps[key] = res
        return res

    def conv(self, hyps: Prop, t1, t2, budget: int | None = None) -> bool:
        """Joinability of ``t1`` and ``t2``; raises Inconclusive past the budget.

        Both forward closures are explored to exhaustion, terms with the
        fewest pending redexes first, so joinable pairs usually meet early.
        """
        if t1 == t2:
            return True
        budget = self.budget if budget is None else budget
        seen = [{t1}, {t2}]
        heaps = [[], []]
        tick = itertools.count()
        for side, t in ((0, t1), (1, t2)):
            heapq.heappush(heaps[side], (len(self.rewrite_step(hyps, t)), next(tick), t))
        side = 0
        while heaps[0] or heaps[1]:
            if not heaps[side]:
                side = 1 - side
            _, _, t = heapq.heappop(heaps[side])
            for r in self.rewrite_step(hyps, t):
                if r in seen[1 - side]:
                    return True
                if r not in seen[side]:
                    seen[side].add(r)
                    heapq.heappush(heaps[side], (len(self.rewrite_step(hyps, r)), next(tick), r))
                    if len(seen[0]) + len(seen[1]) > budget:
                        raise Inconclusive(f"rewrite closure exceeded {budget} states")
            side = 1 - side
        return False

    def normal_forms(self, hyps: Prop, t, budget: int | None = None) -> set:
        """Irreducible members of the forward closure of ``t``."""
        budget = self.budget if budget is None else budget
        seen, queue, nfs = {t}, deque([t]), set()
        while queue:
            u = queue.popleft()
            rs = self.rewrite_step(hyps, u)
            if not rs:
                nfs.add(u)
            for r in rs:
                if r not in seen:
                    seen.add(r)
                    queue.append(r)
                    if len(seen) > budget:
                        raise Inconclusive(f"rewrite closure exceeded {budget} states")
        return nfs


def oracle_for(sig: S.Signature, budget: int = DEFAULT_BUDGET) -> Oracle:
    return Oracle({d.name: d.type for d in sig if isinstance(d, S.ConstDecl)}, budget)


def rewrite_step(sig: S.Signature, hyps: Prop, t) -> frozenset:
    return oracle_for(sig).rewrite_step(hyps, t)


def oracle_conv(sig: S.Signature, hyps: Prop, t1, t2, budget: int = DEFAULT_BUDGET) -> bool:
    return oracle_for(sig, budget).conv(hyps, t1, t2)


# -- the test fragment ---------------------------------------------------------


def _plus_body():
    return Lam(Lam(NatElim(Nat(), Var(0), Suc(Var(0)), Var(1), ("_", "_", "ih")), "n"), "m")


@dataclass
class Fragment:
    """A small signature with props ``a`` and ``b ≤ a`` for differential tests.

    Constants: ``plus`` and ``one`` unfold under ``a``; ``double`` and the
    family ``chi`` unfold under ``b``; ``f`` is a bare postulate.  Generated
    terms live in the context ``[n : Nat]``.
    """

    sig: S.Signature
    table: PropTable
    a: Prop
    b: Prop
    settings: dict = field(default_factory=dict)


def fragment() -> Fragment:
    t = extend_le(PropTable.empty(), "a", TOP)
    a = t.lookup("a")
    t = extend_le(t, "b", a)
    b = t.lookup("b")
    nat = Nat()
    nn = Pi(nat, Pi(nat, nat, "n"), "m")
    decls = (
        S.PropLe("a", TOP),
        S.PropLe("b", a),
        S.ConstDecl("plus", Ext(nn, a, _plus_body()), role="def", assumes=TOP),
        S.ConstDecl("one", Ext(nat, a, Suc(Zero())), role="def", assumes=TOP),
        S.ConstDecl(
            "double",
            Ext(Pi(nat, nat, "x"), b, Lam(App(App(Out(a, Const("plus")), Var(0)), Var(0)), "x")),
            role="def",
            assumes=a,
        ),
        S.ConstDecl("chi", Pi(nat, Ext(nat, b, Suc(Var(0))), "x"), role="unfold"),
        S.ConstDecl("f", Pi(nat, nat, "x")),
    )
    settings = {"⊤": TOP, "a": a, "b≤a": b}
    return Fragment(S.Signature(decls), t, a, b, settings)


class TermGen:
    """Random well-typed Nat terms over :func:`fragment` of bounded depth."""

    def __init__(self, frag: Fragment, rng: random.Random):
        self.fr = frag
        self.rng = rng

    def props_true(self, hyps: Prop):
        return [p for p in (TOP, self.fr.a, self.fr.b) if entails(hyps, p)]

    def nat(self, depth: int, scope: int, hyps: Prop):
        rng, fr = self.rng, self.fr
        if depth <= 1 or rng.random() < 0.15:
            leaves = [Zero(), Out(fr.a, Const("one"))] + [Var(i) for i in range(scope)]
            return rng.choice(leaves)
        d = depth - 1
        k = rng.randrange(10)
        match k:
            case 0:
                return Suc(self.nat(d, scope, hyps))
            case 1:
                return App(App(Out(fr.a, Const("plus")), self.nat(d, scope, hyps)), self.nat(d, scope, hyps))
            case 2:
                return App(Out(fr.b, Const("double")), self.nat(d, scope, hyps))
            case 3:
                return Out(fr.b, App(Const("chi"), self.nat(d, scope, hyps)))
            case 4:
                return App(Const("f"), self.nat(d, scope, hyps))
            case 5:
                step = self.nat(max(d - 1, 1), scope + 2, hyps)
                return NatElim(
                    Nat(), self.nat(d, scope, hyps), step, self.nat(d, scope, hyps), ("_", "k", "ih")
                )
            case 6:
                return App(Lam(self.nat(d, scope + 1, hyps), "y"), self.nat(d, scope, hyps))
            case 7:
                p = rng.choice((TOP, fr.a, fr.b))
                return Out(p, In(p, self.nat(d, scope, hyps)))
            case 8:
                p = rng.choice(self.props_true(hyps))
                return PropApp(PropLam(p, self.nat(d, scope, meet(hyps, p))), p)
            case _:
                return Suc(self.nat(d, scope, hyps))

    def reduct(self, oracle: Oracle, hyps: Prop, t, steps: int):
        """Walk ``steps`` random rewrites from ``t``."""
        for _ in range(steps):
            rs = sorted(oracle.rewrite_step(hyps, t), key=repr)
            if not rs:
                break
            t = self.rng.choice(rs)
        return t
