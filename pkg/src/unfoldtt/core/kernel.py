"""Trusted checker for core terms and signatures.

The kernel is syntax-directed and bidirectional.  Every equality side
condition (conversion, ``in`` boundaries, ``refl`` endpoints) is decided by
comparing normal forms computed by :mod:`unfoldtt.nbe`.
"""

from __future__ import annotations

from unfoldtt import nbe
from unfoldtt.core import syntax as S
from unfoldtt.errors import (
    BoundaryMismatch,
    DuplicateConst,
    IllTypedDecl,
    KernelError,
    NotAType,
    PropNotTrue,
    TypeMismatch,
    UnfoldError,
)
from unfoldtt.nbe import (
    NAT,
    UNIV,
    Closure,
    Ctx,
    SigEnv,
    VExt,
    VId,
    VPi,
    VPropPi,
    VRefl,
    VSuc,
    ZERO,
    force,
)
from unfoldtt.proplattice import Prop, PropTable, entails, extend_eq, extend_le


def _check_prop(ctx: Ctx, p: Prop) -> None:
    if not ctx.table.knows(p):
        raise KernelError(f"undeclared proposition {p!r}")


def _same_prop(p: Prop, q: Prop) -> bool:
    return entails(p, q) and entails(q, p)


def _mismatch(ctx: Ctx, expected, found, what="type mismatch") -> TypeMismatch:
    from unfoldtt.core.printer import print_term

    e = nbe.readback_type(ctx, expected)
    f = nbe.readback_type(ctx, found)
    names = list(ctx.names)
    return TypeMismatch(
        f"{what}: expected {print_term(e, names, ctx.table)}, found {print_term(f, names, ctx.table)}",
        expected=e,
        found=f,
    )


def check_type(ctx: Ctx, a: S.Term) -> None:
    match a:
        case S.Pi(dom, cod):
            check_type(ctx, dom)
            check_type(ctx.bind(a.name, ctx.eval(dom)), cod)
        case S.Nat() | S.Univ():
            pass
        case S.Id(ty, lhs, rhs):
            check_type(ctx, ty)
            tv = ctx.eval(ty)
            check_term(ctx, lhs, tv)
            check_term(ctx, rhs, tv)
        case S.El(code):
            check_term(ctx, code, UNIV)
        case S.PropPi(p, body):
            _check_prop(ctx, p)
            check_type(ctx.assume(p), body)
        case S.Ext(ty, p, boundary):
            check_type(ctx, ty)
            _check_prop(ctx, p)
            check_term(ctx.assume(p), boundary, ctx.eval(ty))
        case _:
            raise NotAType(f"not a type: {type(a).__name__}")


def check_term(ctx: Ctx, m: S.Term, ty) -> None:
    ty = force(ctx.hyps, ty)
    match m:
        case S.Lam(body):
            if not isinstance(ty, VPi):
                raise KernelError(f"lambda checked against non-function type {type(ty).__name__}")
            x = ctx.fresh(ty.dom)
            check_term(ctx.bind(m.name, ty.dom), body, ty.cod.apply(x))
            return
        case S.PropLam(p, body):
            _check_prop(ctx, p)
            if not isinstance(ty, VPropPi) or not _same_prop(p, ty.prop):
                raise KernelError("proposition lambda checked against a mismatched type")
            check_term(ctx.assume(p), body, ty.body.under(p))
            return
        case S.In(p, tm) if isinstance(ty, VExt):
            _check_prop(ctx, p)
            if not _same_prop(p, ty.prop):
                raise KernelError("in: proposition does not match the extension type")
            check_term(ctx, tm, ty.ty)
            inner = ctx.assume(p)
            if not nbe.conv(inner, ty.ty, ctx.eval(tm), ty.boundary.under(p)):
                raise BoundaryMismatch("in: element does not agree with the boundary")
            return
        case S.Refl(tm) if isinstance(ty, VId):
            check_term(ctx, tm, ty.ty)
            v = ctx.eval(tm)
            if not (nbe.conv(ctx, ty.ty, v, ty.lhs) and nbe.conv(ctx, ty.ty, v, ty.rhs)):
                raise _mismatch(ctx, ty, VId(ty.ty, v, v))
            return
    found = infer_term(ctx, m)
    if not nbe.conv_type(ctx, found, ty):
        raise _mismatch(ctx, ty, found)


def _redex_head(m: S.Term):
    args = []
    while isinstance(m, S.App):
        args.append(m.arg)
        m = m.fn
    return m, args[::-1]


def infer_term(ctx: Ctx, m: S.Term):
    match m:
        case S.Var(i):
            if not 0 <= i < ctx.size:
                raise KernelError(f"variable index {i} out of scope")
            return ctx.types[ctx.size - 1 - i]
        case S.Const(name):
            return ctx.sig.const_type(name)
        case S.App(fn, arg):
            head, _ = _redex_head(m)
            if isinstance(fn, S.Lam):
                # β-redex: the argument fixes the binder's type
                infer_term(ctx, arg)
                return infer_term(ctx, S.instantiate(fn.body, arg))
            if isinstance(head, S.Lam):
                return infer_term(ctx, S.App(_contract_head(fn), arg))
            fty = force(ctx.hyps, infer_term(ctx, fn))
            if not isinstance(fty, VPi):
                raise KernelError(f"application of a non-function ({type(fty).__name__})")
            check_term(ctx, arg, fty.dom)
            return fty.cod.apply(ctx.eval(arg))
        case S.Zero():
            return NAT
        case S.Suc(pred):
            check_term(ctx, pred, NAT)
            return NAT
        case S.NatElim(motive, base, step, target):
            xn, nn, ihn = m.names
            check_type(ctx.bind(xn, NAT), motive)
            check_term(ctx, target, NAT)
            mot = Closure(ctx.env, motive)
            check_term(ctx, base, mot.apply(ZERO))
            n = ctx.fresh(NAT)
            c1 = ctx.bind(nn, NAT)
            ih_ty = mot.apply(n)
            check_term(c1.bind(ihn, ih_ty), step, mot.apply(VSuc(n)))
            return mot.apply(ctx.eval(target))
        case S.Refl(tm):
            a = infer_term(ctx, tm)
            v = ctx.eval(tm)
            return VId(a, v, v)
        case S.J(motive, refl_case, target):
            tty = force(ctx.hyps, infer_term(ctx, target))
            if not isinstance(tty, VId):
                raise KernelError("J target is not an identification")
            a = tty.ty
            xn, yn, qn, zn = m.names
            x = ctx.fresh(a)
            c1 = ctx.bind(xn, a)
            y = c1.fresh(a)
            c2 = c1.bind(yn, a)
            check_type(c2.bind(qn, VId(a, x, y)), motive)
            mot = Closure(ctx.env, motive)
            z = ctx.fresh(a)
            check_term(ctx.bind(zn, a), refl_case, mot.apply(z, z, VRefl(z)))
            return mot.apply(tty.lhs, tty.rhs, ctx.eval(target))
        case S.PropApp(tm, p):
            _check_prop(ctx, p)
            if not entails(ctx.hyps, p):
                raise PropNotTrue(f"proposition {p!r} is not true in this context")
            if isinstance(tm, S.PropLam):
                if not _same_prop(tm.prop, p):
                    raise KernelError("prop application at a different proposition")
                return infer_term(ctx.assume(p), tm.body)
            tty = force(ctx.hyps, infer_term(ctx, tm))
            if not isinstance(tty, VPropPi) or not _same_prop(tty.prop, p):
                raise KernelError("prop application of a term without a matching {p} type")
            return tty.body.under(p)
        case S.Out(p, tm):
            _check_prop(ctx, p)
            tty = force(ctx.hyps, infer_term(ctx, tm))
            if not isinstance(tty, VExt) or not _same_prop(tty.prop, p):
                raise KernelError("out of a term whose type is not a matching extension type")
            return tty.ty
        case S.In(p, tm):
            # in without an expected type: the element is its own boundary
            _check_prop(ctx, p)
            a = infer_term(ctx, tm)
            return VExt(a, p, Closure(ctx.env, tm))
        case S.NatCode():
            return UNIV
        case S.PiCode(dom, cod):
            check_term(ctx, dom, UNIV)
            el = nbe.do_el(ctx.hyps, ctx.eval(dom))
            check_term(ctx.bind(m.name, el), cod, UNIV)
            return UNIV
        case S.IdCode(ty, lhs, rhs):
            check_term(ctx, ty, UNIV)
            el = nbe.do_el(ctx.hyps, ctx.eval(ty))
            check_term(ctx, lhs, el)
            check_term(ctx, rhs, el)
            return UNIV
        case S.ExtCode(ty, p, boundary):
            check_term(ctx, ty, UNIV)
            _check_prop(ctx, p)
            inner = ctx.assume(p)
            check_term(inner, boundary, nbe.do_el(inner.hyps, ctx.eval(ty)))
            return UNIV
        case S.PropPiCode(p, body):
            _check_prop(ctx, p)
            check_term(ctx.assume(p), body, UNIV)
            return UNIV
        case S.Lam() | S.PropLam():
            raise KernelError(f"cannot infer the type of {type(m).__name__} without annotation")
    raise KernelError(f"{type(m).__name__} is a type, not a term")


def _contract_head(m: S.Term) -> S.Term:
    """Contract the innermost head redex of an application spine."""
    if isinstance(m, S.App) and isinstance(m.fn, S.Lam):
        return S.instantiate(m.fn.body, m.arg)
    assert isinstance(m, S.App)
    return S.App(_contract_head(m.fn), m.arg)


def check_telescope(sig: SigEnv, tele: S.Telescope) -> Ctx:
    ctx = Ctx.empty(sig)
    for e in tele:
        if isinstance(e, S.PropHyp):
            _check_prop(ctx, e.prop)
            ctx = ctx.assume(e.prop)
        else:
            check_type(ctx, e.type)
            ctx = ctx.bind(e.name, ctx.eval(e.type))
    return ctx


def load_signature(sig: S.Signature) -> SigEnv:
    """Check ``sig`` declaration by declaration and return its evaluated form."""
    env = SigEnv()
    for d in sig:
        table = env.table
        match d:
            case S.PropLe(name, rhs, hidden):
                if not table.knows(rhs):
                    raise IllTypedDecl(name, "right-hand side mentions an undeclared proposition")
                env.table = extend_le(table, name, rhs, hidden=hidden)
            case S.PropEq(name, rhs):
                if not table.knows(rhs):
                    raise IllTypedDecl(name, "right-hand side mentions an undeclared proposition")
                env.table = extend_eq(table, name, rhs)
            case S.ConstDecl(name, ty):
                if name in env.consts:
                    raise DuplicateConst(f"constant {name} declared twice")
                try:
                    check_type(Ctx.empty(env), ty)
                except KernelError as e:
                    raise IllTypedDecl(name, e.message) from e
                except UnfoldError as e:
                    raise IllTypedDecl(name, e.message) from e
                env.add_const(name, ty)
    return env


def check_signature(sig: S.Signature) -> tuple[PropTable, S.Telescope]:
    """``⊢ Σ sig → P, Γ``: the proposition table and the constant telescope."""
    env = load_signature(sig)
    tele = S.Telescope(tuple(S.TermVar(n, env.const_terms[n]) for n in env.consts))
    return env.table, tele
