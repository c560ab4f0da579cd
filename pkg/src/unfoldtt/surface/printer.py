"""Re-parseable printing of surface syntax."""

from __future__ import annotations

from unfoldtt.surface import ast as A

_EXPR, _APP, _ATOM = 0, 1, 2


def _render(e: A.Expr) -> tuple[str, int]:
    match e:
        case A.Name(name):
            return name, _ATOM
        case A.NatLit(v):
            return str(v), _ATOM
        case A.Hole(label):
            return "?" + (label or ""), _ATOM
        case A.ReflExpr():
            return "refl", _ATOM
        case A.UnivExpr():
            return "Type", _ATOM
        case A.App(fn, arg):
            return f"{_go(fn, _APP)} {_go(arg, _ATOM)}", _APP
        case A.IdExpr(ty, lhs, rhs):
            return "Id " + " ".join(_go(x, _ATOM) for x in (ty, lhs, rhs)), _APP
        case A.NatElimExpr(m, b, s, t):
            return "natelim " + " ".join(_go(x, _ATOM) for x in (m, b, s, t)), _APP
        case A.JExpr(m, d, t):
            return "j " + " ".join(_go(x, _ATOM) for x in (m, d, t)), _APP
        case A.Lam(params, body):
            return f"\\{' '.join(params)} => {_go(body, _EXPR)}", _EXPR
        case A.Unfold(names, body):
            return f"unfold {' '.join(names)} in {_go(body, _EXPR)}", _EXPR
        case A.Pi(params, dom, cod):
            return f"({' '.join(params)} : {_go(dom, _EXPR)}) -> {_go(cod, _EXPR)}", _EXPR
        case A.Arrow(dom, cod):
            return f"{_go(dom, _APP)} -> {_go(cod, _EXPR)}", _EXPR
    raise TypeError(f"not a surface expression: {e!r}")


def _go(e: A.Expr, prec: int) -> str:
    s, lvl = _render(e)
    return f"({s})" if lvl < prec else s


def print_expr(e: A.Expr) -> str:
    return _go(e, _EXPR)


def print_decl(d: A.SurfaceDecl) -> str:
    prefix = "abbreviation " if d.abbrv else "abstract " if d.abstr else ""
    unfolds = f" unfolds {' '.join(d.unfolds)}" if d.unfolds else ""
    return f"{prefix}def {d.name}{unfolds} : {print_expr(d.type)} := {print_expr(d.body)}"


def print_surface(x) -> str:
    """Print an expression, a declaration, or a whole source file."""
    if isinstance(x, A.SourceFile):
        return "".join(print_decl(d) + "\n" for d in x.decls)
    if isinstance(x, A.SurfaceDecl):
        return print_decl(x)
    return print_expr(x)
