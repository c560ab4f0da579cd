"""Core syntax: terms with de Bruijn indices, telescopes, signatures.

Indices count term variables only.  Proposition hypotheses occupy telescope
slots but bind nothing, so ``{p} A``, ``{A | p ↪ M}``, and ``λ{p}. M`` leave
the scope of their bodies unchanged.

Binder names are printing hints and never take part in equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from unfoldtt.proplattice import Prop


def _term(cls):
    cls = dataclass(frozen=True)(cls)
    base_hash = cls.__hash__

    # terms are hashed a lot by the oracle; dataclass hashes are recomputed each call
    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = base_hash(self)
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__
    return cls


class Term:
    def __str__(self):
        from unfoldtt.core.printer import print_term

        return print_term(self)


@_term
class Var(Term):
    index: int


@_term
class Const(Term):
    name: str


@_term
class Pi(Term):
    dom: Term
    cod: Term
    name: str = field(default="x", compare=False)


@_term
class Lam(Term):
    body: Term
    name: str = field(default="x", compare=False)


@_term
class App(Term):
    fn: Term
    arg: Term


@_term
class Nat(Term):
    pass


@_term
class Zero(Term):
    pass


@_term
class Suc(Term):
    pred: Term


@_term
class NatElim(Term):
    """``natelim [x. motive] base [n ih. step] target``."""

    motive: Term
    base: Term
    step: Term
    target: Term
    names: tuple = field(default=("x", "n", "ih"), compare=False)


@_term
class Id(Term):
    ty: Term
    lhs: Term
    rhs: Term


@_term
class Refl(Term):
    tm: Term


@_term
class J(Term):
    """``J [x y q. motive] [z. refl_case] target``."""

    motive: Term
    refl_case: Term
    target: Term
    names: tuple = field(default=("x", "y", "q", "z"), compare=False)


@_term
class Univ(Term):
    pass


@_term
class El(Term):
    code: Term


@_term
class PiCode(Term):
    dom: Term
    cod: Term
    name: str = field(default="x", compare=False)


@_term
class NatCode(Term):
    pass


@_term
class IdCode(Term):
    ty: Term
    lhs: Term
    rhs: Term


@_term
class ExtCode(Term):
    ty: Term
    prop: Prop
    boundary: Term


@_term
class PropPiCode(Term):
    prop: Prop
    body: Term


@_term
class PropPi(Term):
    prop: Prop
    body: Term


@_term
class PropLam(Term):
    prop: Prop
    body: Term


@_term
class PropApp(Term):
    tm: Term
    prop: Prop


@_term
class Ext(Term):
    ty: Term
    prop: Prop
    boundary: Term


@_term
class In(Term):
    prop: Prop
    tm: Term


@_term
class Out(Term):
    prop: Prop
    tm: Term


NAT = Nat()
ZERO = Zero()
UNIV = Univ()
NAT_CODE = NatCode()


def numeral(n: int) -> Term:
    t: Term = ZERO
    for _ in range(n):
        t = Suc(t)
    return t


# -- traversal helpers ------------------------------------------------------

# number of term variables bound around each child, by constructor
_BINDERS = {
    Pi: {"cod": 1},
    PiCode: {"cod": 1},
    Lam: {"body": 1},
    NatElim: {"motive": 1, "step": 2},
    J: {"motive": 3, "refl_case": 1},
}

_CHILDREN = {
    Var: (),
    Const: (),
    Pi: ("dom", "cod"),
    Lam: ("body",),
    App: ("fn", "arg"),
    Nat: (),
    Zero: (),
    Suc: ("pred",),
    NatElim: ("motive", "base", "step", "target"),
    Id: ("ty", "lhs", "rhs"),
    Refl: ("tm",),
    J: ("motive", "refl_case", "target"),
    Univ: (),
    El: ("code",),
    PiCode: ("dom", "cod"),
    NatCode: (),
    IdCode: ("ty", "lhs", "rhs"),
    ExtCode: ("ty", "boundary"),
    PropPiCode: ("body",),
    PropPi: ("body",),
    PropLam: ("body",),
    PropApp: ("tm",),
    Ext: ("ty", "boundary"),
    In: ("tm",),
    Out: ("tm",),
}


def children(t: Term):
    """Yield ``(field, child, binders)`` for each immediate subterm."""
    binders = _BINDERS.get(type(t), {})
    for f in _CHILDREN[type(t)]:
        yield f, getattr(t, f), binders.get(f, 0)


def replace(t: Term, **changes) -> Term:
    from dataclasses import replace as dc_replace

    return dc_replace(t, **changes)


def map_vars(t: Term, fn, depth: int = 0) -> Term:
    """Rebuild ``t`` replacing each ``Var(i)`` free at ``depth`` by ``fn(i, depth)``."""
    if isinstance(t, Var):
        return fn(t.index, depth) if t.index >= depth else t
    changes = {}
    for f, c, k in children(t):
        nc = map_vars(c, fn, depth + k)
        if nc is not c:
            changes[f] = nc
    return replace(t, **changes) if changes else t


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    if by == 0:
        return t
    return map_vars(t, lambda i, d: Var(i + by), cutoff)


def has_var(t: Term, index: int) -> bool:
    if isinstance(t, Var):
        return t.index == index
    return any(has_var(c, index + k) for _, c, k in children(t))


def props_of(t: Term):
    """Every proposition embedded anywhere in ``t``."""
    p = getattr(t, "prop", None)
    if p is not None:
        yield p
    for _, c, _ in children(t):
        yield from props_of(c)


def depth(t: Term) -> int:
    return 1 + max((depth(c) for _, c, _ in children(t)), default=0)


# -- telescopes and signatures -------------------------------------------


@dataclass(frozen=True)
class TermVar:
    name: str
    type: Term


@dataclass(frozen=True)
class PropHyp:
    prop: Prop


Entry = Union[TermVar, PropHyp]


@dataclass(frozen=True)
class Telescope:
    entries: tuple = ()

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def extend(self, entry: Entry) -> "Telescope":
        return Telescope(self.entries + (entry,))

    @property
    def term_vars(self) -> list[TermVar]:
        return [e for e in self.entries if isinstance(e, TermVar)]


@dataclass(frozen=True)
class ConstDecl:
    """``const name : type``.

    ``role`` and ``assumes`` only steer printing: a ``def`` constant carries
    its definiens as the extension-type boundary, and ``assumes`` is the
    conjunction the definiens was elaborated under.
    """

    name: str
    type: Term
    role: str = field(default="postulate", compare=False)
    assumes: Prop | None = field(default=None, compare=False)


@dataclass(frozen=True)
class PropLe:
    name: str
    rhs: Prop
    hidden: bool = False


@dataclass(frozen=True)
class PropEq:
    name: str
    rhs: Prop


Declaration = Union[ConstDecl, PropLe, PropEq]


@dataclass(frozen=True)
class Signature:
    decls: tuple = ()

    def __iter__(self):
        return iter(self.decls)

    def __len__(self):
        return len(self.decls)

    def extend(self, *ds: Declaration) -> "Signature":
        return Signature(self.decls + tuple(ds))

    def const(self, name: str) -> ConstDecl:
        for d in self.decls:
            if isinstance(d, ConstDecl) and d.name == name:
                return d
        raise KeyError(name)


def instantiate(body: Term, arg: Term) -> Term:
    """``body[arg/0]``: substitute for the outermost bound variable."""

    def go(i, d):
        if i == d:
            return shift(arg, d)
        return Var(i - 1)

    return map_vars(body, go)
