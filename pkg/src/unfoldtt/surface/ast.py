"""Surface syntax trees.  Spans never take part in equality."""

from __future__ import annotations

from dataclasses import dataclass, field

from unfoldtt.errors import Span


def _span():
    return field(default=None, compare=False, repr=False)


class Expr:
    span: Span | None


@dataclass(frozen=True)
class Name(Expr):
    name: str
    span: Span | None = _span()


@dataclass(frozen=True)
class App(Expr):
    fn: Expr
    arg: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class Lam(Expr):
    params: tuple
    body: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class Pi(Expr):
    """``(x y : dom) -> cod``."""

    params: tuple
    dom: Expr
    cod: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class Arrow(Expr):
    dom: Expr
    cod: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class NatLit(Expr):
    value: int
    span: Span | None = _span()


@dataclass(frozen=True)
class NatElimExpr(Expr):
    motive: Expr
    base: Expr
    step: Expr
    target: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class IdExpr(Expr):
    ty: Expr
    lhs: Expr
    rhs: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class ReflExpr(Expr):
    span: Span | None = _span()


@dataclass(frozen=True)
class JExpr(Expr):
    motive: Expr
    refl_case: Expr
    target: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class UnivExpr(Expr):
    span: Span | None = _span()


@dataclass(frozen=True)
class Unfold(Expr):
    names: tuple
    body: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class Hole(Expr):
    label: str | None = None
    span: Span | None = _span()


@dataclass(frozen=True)
class SurfaceDecl:
    name: str
    abbrv: bool
    abstr: bool
    unfolds: tuple
    type: Expr
    body: Expr
    span: Span | None = _span()
    name_span: Span | None = _span()
    unfold_spans: tuple = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class SourceFile:
    path: str
    decls: tuple
