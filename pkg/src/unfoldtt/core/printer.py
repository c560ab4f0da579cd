"""Pretty-printing of core terms, telescopes and signatures."""

from __future__ import annotations

from unfoldtt.core import syntax as S
from unfoldtt.proplattice import Prop, PropTable, extend_eq, extend_le

# precedence levels
_TOP, _APP, _ATOM = 0, 1, 2


def prop_display_name(name: str) -> str:
    return name if name.startswith("%") else f"Υ{name}"


def print_prop(p: Prop, table: PropTable | None = None) -> str:
    if p.is_top:
        return "⊤"
    if table is None:
        return " ∧ ".join(prop_display_name(a.hint) if a.hint else repr(a) for a in sorted(p.atoms))
    # greedy cover by declared names, biggest first, then drop redundant picks
    order = {n: i for i, n in enumerate(table.entries)}
    cands = [n for n, q in table.entries.items() if q.atoms and q.atoms <= p.atoms]
    cands.sort(key=lambda n: (-len(table.entries[n].atoms), order[n]))
    picked, covered = [], set()
    for n in cands:
        q = table.entries[n].atoms
        if not q <= covered:
            picked.append(n)
            covered |= q
        if covered == p.atoms:
            break
    for n in list(picked):
        rest = set().union(*(table.entries[m].atoms for m in picked if m != n))
        if table.entries[n].atoms <= rest:
            picked.remove(n)
    parts = [prop_display_name(n) for n in sorted(picked, key=order.get)]
    parts += [repr(a) for a in sorted(p.atoms - covered)]
    return " ∧ ".join(parts)


class _Printer:
    def __init__(self, table: PropTable | None, max_depth: int | None = None):
        self.table = table
        self.max_depth = max_depth
        self.level = 0

    def prop(self, p: Prop) -> str:
        return print_prop(p, self.table)

    def out_prop(self, p: Prop, tm: S.Term) -> str:
        # a definition's own proposition reads better than an equal earlier one
        if self.table is not None and isinstance(tm, S.Const):
            q = self.table.entries.get(tm.name)
            if q is not None and q.atoms == p.atoms:
                return prop_display_name(tm.name)
        return self.prop(p)

    def fresh(self, name: str, names: list[str]) -> str:
        if name not in names or name == "_":
            return name
        i = 1
        while f"{name}{i}" in names:
            i += 1
        return f"{name}{i}"

    def binders(self, hints, names):
        names = list(names)
        out = []
        for h in hints:
            x = self.fresh(h, names)
            names.append(x)
            out.append(x)
        return out, names

    def go(self, t: S.Term, names: list[str], prec: int = _TOP) -> str:
        if self.max_depth is not None and self.level >= self.max_depth:
            return "…"
        self.level += 1
        try:
            s, lvl = self.render(t, names)
        finally:
            self.level -= 1
        return f"({s})" if lvl < prec else s

    def render(self, t: S.Term, names: list[str]) -> tuple[str, int]:
        match t:
            case S.Var(i):
                if 0 <= i < len(names):
                    return names[len(names) - 1 - i], _ATOM
                return f"#{i}", _ATOM
            case S.Const(name):
                return name, _ATOM
            case S.Nat() | S.NatCode():
                return "Nat", _ATOM
            case S.Univ():
                return "Type", _ATOM
            case S.Zero():
                return "ze", _ATOM
            case S.Pi(dom, cod) | S.PiCode(dom, cod):
                return self.pi(t.name, dom, cod, names), _TOP
            case S.Lam():
                hints = []
                body = t
                while isinstance(body, S.Lam):
                    hints.append(body.name)
                    body = body.body
                xs, inner = self.binders(hints, names)
                return f"λ {' '.join(xs)}. {self.go(body, inner)}", _TOP
            case S.PropPi(p, body) | S.PropPiCode(p, body):
                return f"{{{self.prop(p)}}} {self.go(body, names)}", _TOP
            case S.PropLam(p, body):
                return f"λ{{{self.prop(p)}}}. {self.go(body, names)}", _TOP
            case S.Ext(ty, p, bd) | S.ExtCode(ty, p, bd):
                return f"{{{self.go(ty, names)} | {self.prop(p)} ↪ {self.go(bd, names)}}}", _ATOM
            case S.App():
                fn, args = t, []
                while isinstance(fn, S.App):
                    args.append(fn.arg)
                    fn = fn.fn
                parts = [self.go(fn, names, _APP)] + [self.go(a, names, _ATOM) for a in reversed(args)]
                return " ".join(parts), _APP
            case S.Suc(pred):
                return f"suc {self.go(pred, names, _ATOM)}", _APP
            case S.Refl(tm):
                return f"refl {self.go(tm, names, _ATOM)}", _APP
            case S.El(code):
                return f"El {self.go(code, names, _ATOM)}", _APP
            case S.Id(ty, lhs, rhs) | S.IdCode(ty, lhs, rhs):
                return "Id " + " ".join(self.go(x, names, _ATOM) for x in (ty, lhs, rhs)), _APP
            case S.In(p, tm):
                return f"in{{{self.prop(p)}}} {self.go(tm, names, _ATOM)}", _APP
            case S.Out(p, tm):
                return f"out{{{self.out_prop(p, tm)}}} {self.go(tm, names, _ATOM)}", _APP
            case S.PropApp(tm, p):
                return f"{self.go(tm, names, _APP)} @ {{{self.prop(p)}}}", _APP
            case S.NatElim(motive, base, step, target):
                (x,), mn = self.binders(t.names[:1], names)
                (n, ih), sn = self.binders(t.names[1:], names)
                return (
                    f"natelim [{x}. {self.go(motive, mn)}] {self.go(base, names, _ATOM)} "
                    f"[{n} {ih}. {self.go(step, sn)}] {self.go(target, names, _ATOM)}",
                    _APP,
                )
            case S.J(motive, refl_case, target):
                xyq, mn = self.binders(t.names[:3], names)
                (z,), rn = self.binders(t.names[3:], names)
                return (
                    f"J [{' '.join(xyq)}. {self.go(motive, mn)}] [{z}. {self.go(refl_case, rn)}] "
                    f"{self.go(target, names, _ATOM)}",
                    _APP,
                )
        raise TypeError(f"cannot print {t!r}")

    def pi(self, name, dom, cod, names) -> str:
        if S.has_var(cod, 0):
            (x,), inner = self.binders([name], names)
            return f"({x} : {self.go(dom, names)}) → {self.go(cod, inner)}"
        # non-dependent: the bound name is never printed, but still occupies a slot
        return f"{self.go(dom, names, _APP)} → {self.go(cod, names + ['_'])}"


def print_term(t: S.Term, names=None, table: PropTable | None = None, max_depth: int | None = None) -> str:
    """Render ``t``; subterms nested deeper than ``max_depth`` print as ``…``."""
    return _Printer(table, max_depth).go(t, list(names or []))


def print_telescope(tele: S.Telescope, table: PropTable | None = None) -> str:
    """``x : A, {p}, y : B``; the empty telescope prints as ``·``."""
    pr = _Printer(table)
    names: list[str] = []
    parts = []
    for e in tele:
        if isinstance(e, S.PropHyp):
            parts.append(f"{{{pr.prop(e.prop)}}}")
        else:
            x = pr.fresh(e.name, names)
            parts.append(f"{x} : {pr.go(e.type, names)}")
            names.append(x)
    return ", ".join(parts) if parts else "·"


def telescope_names(tele: S.Telescope) -> list[str]:
    pr = _Printer(None)
    names: list[str] = []
    for e in tele:
        if isinstance(e, S.TermVar):
            names.append(pr.fresh(e.name, names))
    return names


def _own_prop(name: str, p: Prop, table: PropTable | None) -> str:
    if table is not None and name in table and table.entries[name].atoms == p.atoms:
        return prop_display_name(name)
    return print_prop(p, table)


def print_decl(d, table: PropTable | None = None) -> list[str]:
    """Lines for one declaration; ``table`` is the table just before ``d``."""
    match d:
        case S.PropLe(name, rhs):
            return [f"prop {prop_display_name(name)} ≤ {print_prop(rhs, table)}"]
        case S.PropEq(name, rhs):
            return [f"prop {prop_display_name(name)} = {print_prop(rhs, table)}"]
        case S.ConstDecl(name, ty) if d.role == "def" and isinstance(ty, S.Ext):
            assumes = d.assumes if d.assumes is not None else Prop()
            delta = f"δ{name}"
            return [
                f"{delta} : {{{print_prop(assumes, table)}}} {print_term(ty.ty, [], table)} := "
                f"{print_term(ty.boundary, [], table)}",
                f"const {name} : {{{print_term(ty.ty, [], table)} | {_own_prop(name, ty.prop, table)} ↪ {delta}}}",
            ]
        case S.ConstDecl(name, ty):
            return [f"const {name} : {print_term(ty, [], table)}"]
    raise TypeError(d)


def print_signature(sig: S.Signature) -> str:
    """Render ``sig``, naming propositions by the table in force at each line."""
    table = PropTable.empty()
    lines = []
    for d in sig:
        lines += print_decl(d, table)
        match d:
            case S.PropLe(name, rhs, hidden):
                table = extend_le(table, name, rhs, hidden=hidden)
            case S.PropEq(name, rhs):
                table = extend_eq(table, name, rhs)
    return "".join(line + "\n" for line in lines)
