"""Normalization by evaluation with stabilized neutrals.

Values are produced by ``eval`` relative to an environment that knows which
propositions are currently assumed.  Eliminating an extension-typed neutral
with ``out`` when its proposition is not (yet) true yields a neutral whose
*frontier* records that proposition; the neutral keeps its spine so that, if
it is later read back in a context where the frontier holds, the boundary is
recomputed and the remaining eliminations replayed.  ``readback`` is therefore
context-relative, and it never emits a neutral whose frontier is true.
"""

from __future__ import annotations

from dataclasses import dataclass

from unfoldtt.core import syntax as S
from unfoldtt.errors import KernelError, UnstableLeak
from unfoldtt.proplattice import (
    FALSE,
    TOP,
    Frontier,
    Prop,
    PropTable,
    entails,
    frontier_or,
    frontier_true,
    meet,
)


class SigEnv:
    """Evaluated signature: the proposition table plus constant types."""

    def __init__(self, table: PropTable | None = None):
        self.table = table if table is not None else PropTable.empty()
        self.consts: dict[str, Value] = {}
        self.const_terms: dict[str, S.Term] = {}

    def add_const(self, name: str, ty: S.Term) -> None:
        self.const_terms[name] = ty
        self.consts[name] = eval_term(Env(self), ty)

    def const_type(self, name: str) -> "Value":
        try:
            return self.consts[name]
        except KeyError:
            raise KernelError(f"unknown constant {name}") from None


@dataclass(frozen=True)
class Env:
    sig: SigEnv
    values: tuple = ()
    hyps: Prop = TOP

    def extend(self, vals) -> "Env":
        return Env(self.sig, self.values + tuple(vals), self.hyps)

    def assume(self, p: Prop) -> "Env":
        return Env(self.sig, self.values, meet(self.hyps, p))


# -- values ----------------------------------------------------------------


class Value:
    pass


def _value(cls):
    return dataclass(frozen=True, eq=False)(cls)


@_value
class Closure:
    env: Env
    body: S.Term

    def apply(self, *args: Value) -> Value:
        return eval_term(self.env.extend(args), self.body)

    def under(self, p: Prop) -> Value:
        return eval_term(self.env.assume(p), self.body)


@_value
class ElClosure:
    """Decodes whatever the wrapped code-valued closure produces."""

    inner: Closure

    def apply(self, *args: Value) -> Value:
        return do_el(self.inner.env.hyps, self.inner.apply(*args))

    def under(self, p: Prop) -> Value:
        return do_el(meet(self.inner.env.hyps, p), self.inner.under(p))


@_value
class VPi(Value):
    dom: Value
    cod: Closure
    name: str = "x"


@_value
class VLam(Value):
    body: Closure
    name: str = "x"


@_value
class VNat(Value):
    pass


@_value
class VZero(Value):
    pass


@_value
class VSuc(Value):
    pred: Value


@_value
class VId(Value):
    ty: Value
    lhs: Value
    rhs: Value


@_value
class VRefl(Value):
    tm: Value


@_value
class VUniv(Value):
    pass


@_value
class VSort(Value):
    """Marker type of neutral types (``El`` of a neutral code)."""


@_value
class VPiCode(Value):
    dom: Value
    cod: Closure
    name: str = "x"


@_value
class VNatCode(Value):
    pass


@_value
class VIdCode(Value):
    ty: Value
    lhs: Value
    rhs: Value


@_value
class VExtCode(Value):
    ty: Value
    prop: Prop
    boundary: Closure


@_value
class VPropPiCode(Value):
    prop: Prop
    body: Closure


@_value
class VPropPi(Value):
    prop: Prop
    body: Closure


@_value
class VPropLam(Value):
    prop: Prop
    body: Closure


@_value
class VExt(Value):
    ty: Value
    prop: Prop
    boundary: Closure


@_value
class VIn(Value):
    prop: Prop
    val: Value


@_value
class HVar:
    level: int


@_value
class HConst:
    name: str


@_value
class FApp:
    arg: Value
    dom: Value


@_value
class FNatElim:
    motive: Closure
    base: Value
    step: Closure
    names: tuple = ("x", "n", "ih")


@_value
class FJ:
    idty: VId
    motive: Closure
    refl: Closure
    names: tuple = ("x", "y", "q", "z")


@_value
class FPropApp:
    prop: Prop


@_value
class FOut:
    prop: Prop
    ext: VExt


@_value
class FEl:
    pass


@_value
class Neutral:
    head: object
    spine: tuple = ()
    frontier: Frontier = FALSE

    def push(self, frame) -> "Neutral":
        f = frontier_or(self.frontier, frame.ext.prop) if isinstance(frame, FOut) else self.frontier
        return Neutral(self.head, self.spine + (frame,), f)


@_value
class VNeutral(Value):
    ty: Value
    ne: Neutral


NAT = VNat()
ZERO = VZero()
UNIV = VUniv()
SORT = VSort()
NAT_CODE = VNatCode()


# -- evaluation ------------------------------------------------------------


def eval_term(env: Env, t: S.Term) -> Value:
    match t:
        case S.Var(i):
            return env.values[len(env.values) - 1 - i]
        case S.Const(name):
            return VNeutral(env.sig.const_type(name), Neutral(HConst(name)))
        case S.Pi(dom, cod):
            return VPi(eval_term(env, dom), Closure(env, cod), t.name)
        case S.Lam(body):
            return VLam(Closure(env, body), t.name)
        case S.App(fn, arg):
            return do_app(env.hyps, eval_term(env, fn), eval_term(env, arg))
        case S.Nat():
            return NAT
        case S.Zero():
            return ZERO
        case S.Suc(pred):
            return VSuc(eval_term(env, pred))
        case S.NatElim(motive, base, step, target):
            return do_natelim(
                env.hyps,
                Closure(env, motive),
                eval_term(env, base),
                Closure(env, step),
                eval_term(env, target),
                t.names,
            )
        case S.Id(ty, lhs, rhs):
            return VId(eval_term(env, ty), eval_term(env, lhs), eval_term(env, rhs))
        case S.Refl(tm):
            return VRefl(eval_term(env, tm))
        case S.J(motive, refl_case, target):
            return do_j(
                env.hyps, Closure(env, motive), Closure(env, refl_case), eval_term(env, target), t.names
            )
        case S.Univ():
            return UNIV
        case S.El(code):
            return do_el(env.hyps, eval_term(env, code))
        case S.PiCode(dom, cod):
            return VPiCode(eval_term(env, dom), Closure(env, cod), t.name)
        case S.NatCode():
            return NAT_CODE
        case S.IdCode(ty, lhs, rhs):
            return VIdCode(eval_term(env, ty), eval_term(env, lhs), eval_term(env, rhs))
        case S.ExtCode(ty, p, boundary):
            return VExtCode(eval_term(env, ty), p, Closure(env, boundary))
        case S.PropPiCode(p, body):
            return VPropPiCode(p, Closure(env, body))
        case S.PropPi(p, body):
            return VPropPi(p, Closure(env, body))
        case S.PropLam(p, body):
            return VPropLam(p, Closure(env, body))
        case S.PropApp(tm, p):
            return do_prop_app(env.hyps, eval_term(env, tm), p)
        case S.Ext(ty, p, boundary):
            return VExt(eval_term(env, ty), p, Closure(env, boundary))
        case S.In(p, tm):
            return VIn(p, force(env.hyps, eval_term(env, tm)))
        case S.Out(p, tm):
            return do_out(env.hyps, p, eval_term(env, tm))
    raise TypeError(f"eval: not a term: {t!r}")


def force(hyps: Prop, v: Value) -> Value:
    """Collapse ``v`` while it is a neutral whose frontier holds under ``hyps``."""
    while isinstance(v, VNeutral) and v.ne.frontier and frontier_true(hyps, v.ne.frontier):
        v = _collapse(hyps, v)
    return v


def _collapse(hyps: Prop, v: VNeutral) -> Value:
    spine = v.ne.spine
    for i, fr in enumerate(spine):
        if isinstance(fr, FOut) and entails(hyps, fr.ext.prop):
            cur = fr.ext.boundary.under(fr.ext.prop)
            for rest in spine[i + 1 :]:
                cur = _elim(hyps, cur, rest)
            return cur
    raise AssertionError("frontier true but no out frame fires")


def _elim(hyps: Prop, v: Value, fr) -> Value:
    match fr:
        case FApp(arg):
            return do_app(hyps, v, arg)
        case FNatElim(motive, base, step):
            return do_natelim(hyps, motive, base, step, v, fr.names)
        case FJ(_, motive, refl):
            return do_j(hyps, motive, refl, v, fr.names)
        case FPropApp(p):
            return do_prop_app(hyps, v, p)
        case FOut(p):
            return do_out(hyps, p, v)
        case FEl():
            return do_el(hyps, v)
    raise TypeError(fr)


def _neutral_type(hyps: Prop, v: VNeutral, want: type) -> Value:
    ty = force(hyps, v.ty)
    if not isinstance(ty, want):
        raise KernelError(f"ill-typed elimination: expected {want.__name__}, got {type(ty).__name__}")
    return ty


def do_app(hyps: Prop, f: Value, a: Value) -> Value:
    f = force(hyps, f)
    if isinstance(f, VLam):
        return f.body.apply(a)
    if isinstance(f, VNeutral):
        ty = _neutral_type(hyps, f, VPi)
        return VNeutral(ty.cod.apply(a), f.ne.push(FApp(a, ty.dom)))
    raise KernelError(f"cannot apply {type(f).__name__}")


def do_natelim(hyps, motive: Closure, base: Value, step: Closure, target: Value, names=("x", "n", "ih")):
    target = force(hyps, target)
    # iterate over the successor chain instead of recursing on it
    preds = []
    while isinstance(target, VSuc):
        preds.append(target.pred)
        target = force(hyps, target.pred)
    if isinstance(target, VZero):
        acc = base
    elif isinstance(target, VNeutral):
        acc = VNeutral(motive.apply(target), target.ne.push(FNatElim(motive, base, step, names)))
    else:
        raise KernelError(f"natelim on {type(target).__name__}")
    for n in reversed(preds):
        acc = step.apply(n, acc)
    return acc


def do_j(hyps, motive: Closure, refl: Closure, target: Value, names=("x", "y", "q", "z")):
    target = force(hyps, target)
    if isinstance(target, VRefl):
        return refl.apply(target.tm)
    if isinstance(target, VNeutral):
        ty = _neutral_type(hyps, target, VId)
        return VNeutral(motive.apply(ty.lhs, ty.rhs, target), target.ne.push(FJ(ty, motive, refl, names)))
    raise KernelError(f"J on {type(target).__name__}")


def do_prop_app(hyps: Prop, v: Value, p: Prop) -> Value:
    v = force(hyps, v)
    if isinstance(v, VPropLam):
        return v.body.under(v.prop)
    if isinstance(v, VNeutral):
        ty = _neutral_type(hyps, v, VPropPi)
        return VNeutral(ty.body.under(ty.prop), v.ne.push(FPropApp(p)))
    raise KernelError(f"prop application of {type(v).__name__}")


def do_out(hyps: Prop, p: Prop, v: Value) -> Value:
    """``out`` of an extension-typed value.

    ``in`` cancels; a true proposition yields the boundary; anything else
    becomes a neutral whose frontier now includes the proposition.
    """
    v = force(hyps, v)
    if isinstance(v, VIn):
        return v.val
    if isinstance(v, VNeutral):
        ty = _neutral_type(hyps, v, VExt)
        if entails(hyps, ty.prop):
            return force(hyps, ty.boundary.under(ty.prop))
        return VNeutral(ty.ty, v.ne.push(FOut(p, ty)))
    raise KernelError(f"out of {type(v).__name__}")


def do_el(hyps: Prop, v: Value) -> Value:
    v = force(hyps, v)
    match v:
        case VNatCode():
            return NAT
        case VPiCode(dom, cod):
            return VPi(do_el(hyps, dom), ElClosure(cod), v.name)
        case VIdCode(ty, lhs, rhs):
            return VId(do_el(hyps, ty), lhs, rhs)
        case VExtCode(ty, p, boundary):
            return VExt(do_el(hyps, ty), p, boundary)
        case VPropPiCode(p, body):
            return VPropPi(p, ElClosure(body))
        case VNeutral(_, ne):
            return VNeutral(SORT, ne.push(FEl()))
    raise KernelError(f"El of non-code {type(v).__name__}")


# -- contexts --------------------------------------------------------------


@dataclass(frozen=True)
class CVar:
    name: str
    ty: Value


@dataclass(frozen=True)
class CHyp:
    prop: Prop


@dataclass(frozen=True)
class Ctx:
    """A telescope in semantic form: term variables are fresh neutrals."""

    env: Env
    entries: tuple = ()
    names: tuple = ()
    types: tuple = ()

    @classmethod
    def empty(cls, sig: SigEnv) -> "Ctx":
        return cls(Env(sig))

    @property
    def sig(self) -> SigEnv:
        return self.env.sig

    @property
    def table(self) -> PropTable:
        return self.env.sig.table

    @property
    def hyps(self) -> Prop:
        return self.env.hyps

    @property
    def size(self) -> int:
        return len(self.names)

    def fresh(self, ty: Value) -> VNeutral:
        return VNeutral(ty, Neutral(HVar(self.size)))

    def bind(self, name: str, ty: Value) -> "Ctx":
        x = self.fresh(ty)
        return Ctx(self.env.extend((x,)), self.entries + (CVar(name, ty),), self.names + (name,), self.types + (ty,))

    def assume(self, p: Prop) -> "Ctx":
        return Ctx(self.env.assume(p), self.entries + (CHyp(p),), self.names, self.types)

    def var(self, level: int) -> Value:
        return self.env.values[level]

    def lookup(self, name: str):
        """``(index, type)`` of the innermost variable called ``name``."""
        for lvl in range(self.size - 1, -1, -1):
            if self.names[lvl] == name:
                return self.size - 1 - lvl, self.types[lvl]
        return None

    def eval(self, t: S.Term) -> Value:
        return eval_term(self.env, t)


def ctx_of(sig: SigEnv, tele: S.Telescope) -> Ctx:
    ctx = Ctx.empty(sig)
    for e in tele:
        if isinstance(e, S.PropHyp):
            ctx = ctx.assume(e.prop)
        else:
            ctx = ctx.bind(e.name, ctx.eval(e.type))
    return ctx


def telescope_of(ctx: Ctx) -> S.Telescope:
    """Read a semantic context back into a syntactic telescope."""
    out = []
    cur = Ctx.empty(ctx.sig)
    for e in ctx.entries:
        if isinstance(e, CHyp):
            out.append(S.PropHyp(e.prop))
            cur = cur.assume(e.prop)
        else:
            out.append(S.TermVar(e.name, readback_type(cur, e.ty)))
            cur = cur.bind(e.name, e.ty)
    return S.Telescope(tuple(out))


# -- readback --------------------------------------------------------------


def readback(ctx: Ctx, ty: Value, v: Value) -> S.Term:
    """Type-directed quotation into β-normal η-long form relative to ``ctx``."""
    hyps = ctx.hyps
    ty = force(hyps, ty)
    v = force(hyps, v)
    match ty:
        case VPi(dom, cod):
            x = ctx.fresh(dom)
            body = readback(ctx.bind(ty.name, dom), cod.apply(x), do_app(hyps, v, x))
            return S.Lam(body, ty.name)
        case VPropPi(p, body):
            inner = ctx.assume(p)
            return S.PropLam(p, readback(inner, body.under(p), do_prop_app(inner.hyps, v, p)))
        case VExt(a, p, _):
            return S.In(p, readback(ctx, a, do_out(hyps, p, v)))
        case VNat():
            n = 0
            while isinstance(v, VSuc):
                n += 1
                v = force(hyps, v.pred)
            if isinstance(v, VZero):
                t = S.ZERO
            else:
                t = _readback_neutral_value(ctx, v)
            for _ in range(n):
                t = S.Suc(t)
            return t
        case VId(a, _, _):
            if isinstance(v, VRefl):
                return S.Refl(readback(ctx, a, v.tm))
            return _readback_neutral_value(ctx, v)
        case VUniv():
            return _readback_code(ctx, v)
        case VNeutral():
            return _readback_neutral_value(ctx, v)
    raise KernelError(f"readback at non-type {type(ty).__name__}")


def _readback_code(ctx: Ctx, v: Value) -> S.Term:
    match v:
        case VNatCode():
            return S.NAT_CODE
        case VPiCode(dom, cod):
            el = do_el(ctx.hyps, dom)
            x = ctx.fresh(el)
            return S.PiCode(
                _readback_code(ctx, force(ctx.hyps, dom)),
                readback(ctx.bind(v.name, el), UNIV, cod.apply(x)),
                v.name,
            )
        case VIdCode(a, lhs, rhs):
            el = do_el(ctx.hyps, a)
            return S.IdCode(readback(ctx, UNIV, a), readback(ctx, el, lhs), readback(ctx, el, rhs))
        case VExtCode(a, p, boundary):
            inner = ctx.assume(p)
            return S.ExtCode(
                readback(ctx, UNIV, a), p, readback(inner, do_el(inner.hyps, a), boundary.under(p))
            )
        case VPropPiCode(p, body):
            inner = ctx.assume(p)
            return S.PropPiCode(p, readback(inner, UNIV, body.under(p)))
    return _readback_neutral_value(ctx, v)


def _readback_neutral_value(ctx: Ctx, v: Value) -> S.Term:
    if not isinstance(v, VNeutral):
        raise KernelError(f"readback: expected a neutral, got {type(v).__name__}")
    return readback_neutral(ctx, v.ne)


def readback_neutral(ctx: Ctx, ne: Neutral) -> S.Term:
    if frontier_true(ctx.hyps, ne.frontier):
        raise UnstableLeak(f"neutral with true frontier {ne.frontier!r} reached readback")
    match ne.head:
        case HVar(level):
            t: S.Term = S.Var(ctx.size - 1 - level)
        case HConst(name):
            t = S.Const(name)
    for fr in ne.spine:
        match fr:
            case FApp(arg, dom):
                t = S.App(t, readback(ctx, dom, arg))
            case FNatElim(motive, base, step):
                xn, nn, ihn = fr.names
                x = ctx.fresh(NAT)
                mot = readback_type(ctx.bind(xn, NAT), motive.apply(x))
                base_t = readback(ctx, motive.apply(ZERO), base)
                n = ctx.fresh(NAT)
                c1 = ctx.bind(nn, NAT)
                ih_ty = motive.apply(n)
                ih = c1.fresh(ih_ty)
                c2 = c1.bind(ihn, ih_ty)
                step_t = readback(c2, motive.apply(VSuc(n)), step.apply(n, ih))
                t = S.NatElim(mot, base_t, step_t, t, fr.names)
            case FJ(idty, motive, refl):
                a = idty.ty
                xn, yn, qn, zn = fr.names
                x = ctx.fresh(a)
                c1 = ctx.bind(xn, a)
                y = c1.fresh(a)
                c2 = c1.bind(yn, a)
                q_ty = VId(a, x, y)
                q = c2.fresh(q_ty)
                c3 = c2.bind(qn, q_ty)
                mot = readback_type(c3, motive.apply(x, y, q))
                z = ctx.fresh(a)
                r = readback(ctx.bind(zn, a), motive.apply(z, z, VRefl(z)), refl.apply(z))
                t = S.J(mot, r, t, fr.names)
            case FPropApp(p):
                t = S.PropApp(t, p)
            case FOut(p):
                t = S.Out(p, t)
            case FEl():
                t = S.El(t)
    return t


def readback_type(ctx: Ctx, ty: Value) -> S.Term:
    ty = force(ctx.hyps, ty)
    match ty:
        case VPi(dom, cod):
            x = ctx.fresh(dom)
            return S.Pi(readback_type(ctx, dom), readback_type(ctx.bind(ty.name, dom), cod.apply(x)), ty.name)
        case VNat():
            return S.NAT
        case VUniv():
            return S.UNIV
        case VId(a, lhs, rhs):
            return S.Id(readback_type(ctx, a), readback(ctx, a, lhs), readback(ctx, a, rhs))
        case VPropPi(p, body):
            return S.PropPi(p, readback_type(ctx.assume(p), body.under(p)))
        case VExt(a, p, boundary):
            inner = ctx.assume(p)
            return S.Ext(readback_type(ctx, a), p, readback(inner, a, boundary.under(p)))
        case VNeutral(_, ne):
            return readback_neutral(ctx, ne)
    raise KernelError(f"not a type: {type(ty).__name__}")


def conv(ctx: Ctx, ty: Value, v1: Value, v2: Value) -> bool:
    return readback(ctx, ty, v1) == readback(ctx, ty, v2)


def conv_type(ctx: Ctx, t1: Value, t2: Value) -> bool:
    return readback_type(ctx, t1) == readback_type(ctx, t2)


def normalize(ctx: Ctx, ty: S.Term, m: S.Term) -> S.Term:
    return readback(ctx, ctx.eval(ty), ctx.eval(m))


def normalize_type(ctx: Ctx, ty: S.Term) -> S.Term:
    return readback_type(ctx, ctx.eval(ty))
