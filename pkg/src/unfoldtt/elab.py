"""Bidirectional elaboration of surface programs into core signatures.

Each ``def θ unfolds κ… : A := e`` becomes a proposition ``Υθ`` (or a hidden
``%abs.N`` when abstract) followed by a constant whose type is the extension
type ``{A | Υθ ↪ M}``.  References to θ elaborate to ``out{Υθ} θ``, which
computes only where ``Υθ`` is assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from unfoldtt import nbe
from unfoldtt.core import syntax as S
from unfoldtt.core.printer import print_term
from unfoldtt.errors import (
    AbstractUnfoldTarget,
    ConvMismatch,
    DuplicateDefinition,
    ElabError,
    Span,
    UnboundName,
    UnknownUnfoldTarget,
    UnfoldError,
)
from unfoldtt.nbe import (
    NAT,
    UNIV,
    CHyp,
    Closure,
    Ctx,
    SigEnv,
    VExt,
    VId,
    VPi,
    VPropPi,
    VRefl,
    VSuc,
    VUniv,
    ZERO,
    force,
)
from unfoldtt.proplattice import Prop, PropTable, extend_eq, extend_le, meet_all
from unfoldtt.surface import ast as A

BUILTINS = ("Nat", "ze", "suc")


@dataclass(frozen=True)
class Goal:
    number: int
    span: Span | None
    telescope: S.Telescope
    type: S.Term  # normal form relative to the telescope
    raw_type: S.Term  # read back without the telescope's unfoldings
    label: str | None = None


@dataclass(frozen=True)
class DefInfo:
    name: str
    prop: str
    abstract: bool
    span: Span | None


@dataclass
class ElabState:
    sigenv: SigEnv = field(default_factory=SigEnv)
    decls: list = field(default_factory=list)
    gensym: dict = field(default_factory=dict)
    goals: list = field(default_factory=list)
    defs: dict = field(default_factory=dict)

    @property
    def sig(self) -> S.Signature:
        return S.Signature(tuple(self.decls))

    @property
    def table(self) -> PropTable:
        return self.sigenv.table

    def fresh(self, prefix: str) -> str:
        n = self.gensym.get(prefix, 0)
        self.gensym[prefix] = n + 1
        return f"{prefix}.{n}"

    def emit(self, d) -> None:
        self.decls.append(d)
        match d:
            case S.PropLe(name, rhs, hidden):
                self.sigenv.table = extend_le(self.sigenv.table, name, rhs, hidden=hidden)
            case S.PropEq(name, rhs):
                self.sigenv.table = extend_eq(self.sigenv.table, name, rhs)
            case S.ConstDecl(name, ty):
                self.sigenv.add_const(name, ty)


def _names(ctx: Ctx) -> list[str]:
    return list(ctx.names)


def _show(ctx: Ctx, t: S.Term) -> str:
    return print_term(t, _names(ctx), ctx.table)


class Elaborator:
    def __init__(self, state: ElabState | None = None):
        self.st = state if state is not None else ElabState()

    # -- helpers -------------------------------------------------------------

    def resolve_unfolds(self, names, spans=()) -> Prop:
        props = []
        for i, n in enumerate(names):
            span = spans[i] if i < len(spans) else None
            info = self.st.defs.get(n)
            if info is None:
                raise UnknownUnfoldTarget(f"cannot unfold {n}: no such definition", span)
            if info.abstract:
                raise AbstractUnfoldTarget(
                    f"cannot unfold {n}: it is declared abstract", n, info.span, span
                )
            props.append(self.st.table.lookup(info.prop))
        return meet_all(props)

    def close(self, ctx: Ctx, t: S.Term) -> S.Term:
        """``Π Γ. t`` over the whole context, hypotheses included."""
        tele = nbe.telescope_of(ctx)
        for e in reversed(tele.entries):
            if isinstance(e, S.PropHyp):
                t = S.PropPi(e.prop, t)
            else:
                t = S.Pi(e.type, t, e.name)
        return t

    def apply_ctx(self, ctx: Ctx, t: S.Term) -> S.Term:
        """``t[Γ]``: apply to every variable and hypothesis of the context."""
        level = 0
        for e in ctx.entries:
            if isinstance(e, CHyp):
                t = S.PropApp(t, e.prop)
            else:
                t = S.App(t, S.Var(ctx.size - 1 - level))
                level += 1
        return t

    def mismatch(self, ctx: Ctx, expected: S.Term, found: S.Term, span, what="type mismatch"):
        e, f = _show(ctx, expected), _show(ctx, found)
        return ConvMismatch(what, e, f, span)

    # -- types -----------------------------------------------------------------

    def elab_type(self, ctx: Ctx, e: A.Expr) -> S.Term:
        match e:
            case A.Name("Nat") if ctx.lookup("Nat") is None:
                return S.NAT
            case A.UnivExpr():
                return S.UNIV
            case A.Arrow(dom, cod):
                d = self.elab_type(ctx, dom)
                return S.Pi(d, self.elab_type(ctx.bind("_", ctx.eval(d)), cod), "_")
            case A.Pi(params, dom, cod):
                d = self.elab_type(ctx, dom)
                return self._pi_type(ctx, params, d, cod)
            case A.IdExpr(ty, lhs, rhs):
                t = self.elab_type(ctx, ty)
                tv = ctx.eval(t)
                return S.Id(t, self.check(ctx, lhs, tv), self.check(ctx, rhs, tv))
            case A.Unfold(names, body):
                return S.El(self.elab_unfold(ctx, names, body, UNIV, e.span))
        return S.El(self.check(ctx, e, UNIV))

    def _pi_type(self, ctx, params, d, cod) -> S.Term:
        # the domain is elaborated once and shifted under earlier binders
        inner, doms = ctx, []
        for k, x in enumerate(params):
            dk = S.shift(d, k)
            doms.append((x, dk))
            inner = inner.bind(x, inner.eval(dk))
        t = self.elab_type(inner, cod)
        for x, dk in reversed(doms):
            t = S.Pi(dk, t, x)
        return t

    # -- checking --------------------------------------------------------------

    def check(self, ctx: Ctx, e: A.Expr, ty) -> S.Term:
        ty = force(ctx.hyps, ty)
        # propositional binders and extension types are introduced silently
        if isinstance(ty, VPropPi) and not isinstance(e, (A.Hole, A.Unfold)):
            inner = ctx.assume(ty.prop)
            return S.PropLam(ty.prop, self.check(inner, e, ty.body.under(ty.prop)))
        if isinstance(ty, VExt) and not isinstance(e, (A.Hole, A.Unfold)):
            m = self.check(ctx, e, ty.ty)
            inner = ctx.assume(ty.prop)
            if not nbe.conv(inner, ty.ty, ctx.eval(m), ty.boundary.under(ty.prop)):
                exp = nbe.readback(inner, ty.ty, ty.boundary.under(ty.prop))
                raise self.mismatch(
                    inner, exp, nbe.readback(inner, ty.ty, ctx.eval(m)), e.span, "boundary mismatch"
                )
            return S.In(ty.prop, m)
        match e:
            case A.Lam(params, body):
                if not isinstance(ty, VPi):
                    raise ElabError(
                        f"a function was given where {_show(ctx, nbe.readback_type(ctx, ty))} is expected",
                        e.span,
                    )
                x, rest = params[0], params[1:]
                inner_e = A.Lam(rest, body, e.span) if rest else body
                v = ctx.fresh(ty.dom)
                return S.Lam(self.check(ctx.bind(x, ty.dom), inner_e, ty.cod.apply(v)), x)
            case A.ReflExpr():
                if not isinstance(ty, VId):
                    raise ElabError(
                        f"refl checked against {_show(ctx, nbe.readback_type(ctx, ty))}, which is not an identity type",
                        e.span,
                    )
                if not nbe.conv(ctx, ty.ty, ty.lhs, ty.rhs):
                    found = VId(ty.ty, ty.lhs, ty.lhs)
                    raise self.mismatch(
                        ctx, nbe.readback_type(ctx, ty), nbe.readback_type(ctx, found), e.span
                    )
                return S.Refl(nbe.readback(ctx, ty.ty, ty.lhs))
            case A.Hole(label):
                return self.hole(ctx, ty, e.span, label)
            case A.Unfold(names, body):
                return self.elab_unfold(ctx, names, body, ty, e.span)
        if isinstance(ty, VUniv):
            code = self.check_code(ctx, e)
            if code is not None:
                return code
        t, found = self.synth(ctx, e)
        if not nbe.conv_type(ctx, found, ty):
            raise self.mismatch(ctx, nbe.readback_type(ctx, ty), nbe.readback_type(ctx, found), e.span)
        return t

    def check_code(self, ctx: Ctx, e: A.Expr) -> S.Term | None:
        match e:
            case A.Name("Nat") if ctx.lookup("Nat") is None:
                return S.NAT_CODE
            case A.UnivExpr():
                raise ElabError("Type is not itself a code (there is a single universe)", e.span)
            case A.Arrow(dom, cod):
                d = self.check(ctx, dom, UNIV)
                el = nbe.do_el(ctx.hyps, ctx.eval(d))
                return S.PiCode(d, self.check(ctx.bind("_", el), cod, UNIV), "_")
            case A.Pi(params, dom, cod):
                d = self.check(ctx, dom, UNIV)
                inner, doms = ctx, []
                for k, x in enumerate(params):
                    dk = S.shift(d, k)
                    doms.append((x, dk))
                    inner = inner.bind(x, nbe.do_el(inner.hyps, inner.eval(dk)))
                t = self.check(inner, cod, UNIV)
                for x, dk in reversed(doms):
                    t = S.PiCode(dk, t, x)
                return t
            case A.IdExpr(ty, lhs, rhs):
                c = self.check(ctx, ty, UNIV)
                el = nbe.do_el(ctx.hyps, ctx.eval(c))
                return S.IdCode(c, self.check(ctx, lhs, el), self.check(ctx, rhs, el))
        return None

    # -- synthesis -------------------------------------------------------------

    def synth(self, ctx: Ctx, e: A.Expr):
        match e:
            case A.Name(name):
                return self.synth_name(ctx, name, e.span)
            case A.NatLit(n):
                return S.numeral(n), NAT
            case A.App():
                return self.synth_app(ctx, e)
            case A.NatElimExpr(motive, base, step, target):
                return self.synth_natelim(ctx, motive, base, step, target)
            case A.JExpr(motive, refl_case, target):
                return self.synth_j(ctx, e, motive, refl_case, target)
            case A.Arrow() | A.Pi() | A.IdExpr():
                return self.check_code(ctx, e), UNIV
            case A.Unfold(names, body):
                u = self.resolve_unfolds(names)
                t, ty = self.synth(ctx.assume(u), body)
                return self._hoist(ctx, u, t, ty), ty
            case A.UnivExpr():
                raise ElabError("Type has no type here (there is a single universe)", e.span)
            case A.Lam():
                raise ElabError("cannot infer the type of a function; give it a type", e.span)
            case A.ReflExpr():
                raise ElabError("cannot infer the type of refl; give it a type", e.span)
            case A.Hole():
                raise ElabError("cannot infer the type of a hole", e.span)
        raise ElabError(f"cannot elaborate {type(e).__name__}", getattr(e, "span", None))

    def synth_name(self, ctx: Ctx, name: str, span):
        found = ctx.lookup(name)
        if found is not None:
            i, ty = found
            return S.Var(i), ty
        info = self.st.defs.get(name)
        if info is not None:
            p = self.st.table.lookup(info.prop)
            ext = self.st.sigenv.const_type(name)
            return S.Out(p, S.Const(name)), ext.ty
        match name:
            case "Nat":
                return S.NAT_CODE, UNIV
            case "ze":
                return S.ZERO, NAT
            case "suc":
                return S.Lam(S.Suc(S.Var(0)), "n"), VPi(NAT, Closure(ctx.env, S.NAT), "n")
        raise UnboundName(f"unbound name {name}", span)

    def synth_app(self, ctx: Ctx, e: A.App):
        args = []
        head = e
        while isinstance(head, A.App):
            args.append(head.arg)
            head = head.fn
        args.reverse()
        if isinstance(head, A.Name) and head.name == "suc" and ctx.lookup("suc") is None and "suc" not in self.st.defs:
            t, ty = S.Suc(self.check(ctx, args[0], NAT)), NAT
            args = args[1:]
        else:
            t, ty = self.synth(ctx, head)
        for a in args:
            ty = force(ctx.hyps, ty)
            if not isinstance(ty, VPi):
                raise ElabError(
                    f"{_show(ctx, t)} has type {_show(ctx, nbe.readback_type(ctx, ty))}, which is not a function type",
                    a.span,
                )
            at = self.check(ctx, a, ty.dom)
            t = S.App(t, at)
            ty = ty.cod.apply(ctx.eval(at))
        return t, ty

    def _binder_lam(self, e: A.Expr, k: int):
        """Split a k-ary lambda into its parameter names and body, or η-expand."""
        params, body = [], e
        while len(params) < k and isinstance(body, A.Lam):
            take = body.params[: k - len(params)]
            rest = body.params[len(take):]
            params += take
            body = A.Lam(rest, body.body, body.span) if rest else body.body
        if len(params) < k:
            fresh = [f"%{i}" for i in range(len(params), k)]
            for x in fresh:
                body = A.App(body, A.Name(x, e.span), e.span)
            params += fresh
        return params, body

    def synth_natelim(self, ctx, motive, base, step, target):
        (x,), mbody = self._binder_lam(motive, 1)
        mot = self.elab_type(ctx.bind(x, NAT), mbody)
        tgt = self.check(ctx, target, NAT)
        mclo = Closure(ctx.env, mot)
        b = self.check(ctx, base, mclo.apply(ZERO))
        (n, ih), sbody = self._binder_lam(step, 2)
        nv = ctx.fresh(NAT)
        c1 = ctx.bind(n, NAT)
        ih_ty = mclo.apply(nv)
        s = self.check(c1.bind(ih, ih_ty), sbody, mclo.apply(VSuc(nv)))
        names = (_hint(x), _hint(n), _hint(ih))
        return S.NatElim(mot, b, s, tgt, names), mclo.apply(ctx.eval(tgt))

    def synth_j(self, ctx, e, motive, refl_case, target):
        tgt, tty = self.synth(ctx, target)
        tty = force(ctx.hyps, tty)
        if not isinstance(tty, VId):
            raise ElabError(
                f"j eliminates an identification, but the target has type {_show(ctx, nbe.readback_type(ctx, tty))}",
                target.span,
            )
        a = tty.ty
        (x, y, q), mbody = self._binder_lam(motive, 3)
        xv = ctx.fresh(a)
        c1 = ctx.bind(x, a)
        yv = c1.fresh(a)
        c2 = c1.bind(y, a)
        mot = self.elab_type(c2.bind(q, VId(a, xv, yv)), mbody)
        mclo = Closure(ctx.env, mot)
        (z,), rbody = self._binder_lam(refl_case, 1)
        zv = ctx.fresh(a)
        r = self.check(ctx.bind(z, a), rbody, mclo.apply(zv, zv, VRefl(zv)))
        names = (_hint(x), _hint(y), _hint(q), _hint(z))
        return S.J(mot, r, tgt, names), mclo.apply(tty.lhs, tty.rhs, ctx.eval(tgt))

    # -- holes and unfold ------------------------------------------------------

    def hole(self, ctx: Ctx, ty, span, label=None) -> S.Term:
        n = len(self.st.goals)
        name = f"?{n}"
        nf = nbe.readback_type(ctx, ty)
        bare = Ctx(nbe.Env(ctx.sig, ctx.env.values), (), ctx.names, ctx.types)
        try:
            raw = nbe.readback_type(bare, ty)
        except Exception:
            raw = nf
        self.st.goals.append(Goal(n, span, nbe.telescope_of(ctx), nf, raw, label))
        self.st.emit(S.ConstDecl(name, self.close(ctx, nf), role="hole"))
        return self.apply_ctx(ctx, S.Const(name))

    def elab_unfold(self, ctx: Ctx, names, body: A.Expr, ty, span=None) -> S.Term:
        u = self.resolve_unfolds(names)
        m = self.check(ctx.assume(u), body, ty)
        return self._hoist(ctx, u, m, ty)

    def _hoist(self, ctx: Ctx, u: Prop, m: S.Term, ty) -> S.Term:
        a = nbe.readback_type(ctx, ty)
        chi = self.st.fresh("%unfold")
        self.st.emit(S.ConstDecl(chi, self.close(ctx, S.Ext(a, u, m)), role="unfold"))
        return S.Out(u, self.apply_ctx(ctx, S.Const(chi)))

    # -- declarations ----------------------------------------------------------

    def elab_def(self, d: A.SurfaceDecl) -> None:
        st = self.st
        if d.name in st.defs or d.name in BUILTINS:
            raise DuplicateDefinition(f"{d.name} is already defined", d.name_span)
        u = self.resolve_unfolds(d.unfolds, d.unfold_spans)
        ctx0 = Ctx.empty(st.sigenv)
        a = self.elab_type(ctx0, d.type)
        ctx1 = ctx0.assume(u) if d.unfolds else ctx0
        m = self.check(ctx1, d.body, ctx0.eval(a))
        pname = st.fresh("%abs") if d.abstr else d.name
        st.emit(S.PropEq(pname, u) if d.abbrv else S.PropLe(pname, u, hidden=d.abstr))
        p = st.table.lookup(pname)
        st.emit(S.ConstDecl(d.name, S.Ext(a, p, m), role="def", assumes=u))
        st.defs[d.name] = DefInfo(d.name, pname, d.abstr, d.name_span)


def _hint(x: str) -> str:
    return "x" if x.startswith("%") else x


def elab_def(state: ElabState, d: A.SurfaceDecl) -> ElabState:
    Elaborator(state).elab_def(d)
    return state


def elab_program(state: ElabState, decls) -> ElabState:
    el = Elaborator(state)
    for d in decls:
        try:
            el.elab_def(d)
        except UnfoldError as err:
            if err.span is None:
                err.span = d.span
            raise
    return state


def report_goals(state: ElabState) -> list[Goal]:
    return sorted(state.goals, key=lambda g: (g.span.start if g.span else -1, g.number))


def elaborate_source(text: str, path: str = "<input>") -> ElabState:
    from unfoldtt.surface.parser import parse_program

    src = parse_program(text, path)
    return elab_program(ElabState(), src.decls)
