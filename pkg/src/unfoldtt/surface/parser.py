"""Recursive-descent parser for the surface language.

    decl  ::= [abbreviation | abstract] def NAME [unfolds NAME+] : expr := expr
    expr  ::= \\ NAME+ => expr | unfold NAME+ in expr
            | (NAME+ : expr)+ -> expr | app [-> expr]
    app   ::= Id atom atom atom atom* | natelim atom^4 atom* | j atom^3 atom* | atom+
    atom  ::= NAME | NUM | ? | ?label | Type | refl | ( expr )
"""

from __future__ import annotations

from unfoldtt.errors import DuplicateDefinition, ParseError, Span
from unfoldtt.surface import ast as A
from unfoldtt.surface.lexer import Token, tokenize

_ATOM_START = {"ident", "num", "hole", "Type", "refl", "("}
_EXPR_START = _ATOM_START | {"\\", "unfold", "Id", "natelim", "j"}
_DECL_START = {"def", "abbreviation", "abstract"}

_DESCR = {"ident": "identifier", "num": "number", "hole": "?", "eof": "end of input"}


def _describe(kind: str) -> str:
    return _DESCR.get(kind, kind)


class Parser:
    def __init__(self, toks: list[Token], path: str = "<input>"):
        self.toks = toks
        self.pos = 0
        self.path = path

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, *kinds) -> bool:
        return self.peek().kind in kinds

    def advance(self) -> Token:
        t = self.peek()
        self.pos += 1
        return t

    def fail(self, expected) -> ParseError:
        t = self.peek()
        found = "end of input" if t.kind == "eof" else repr(t.text)
        exp = sorted(_describe(k) for k in expected)
        return ParseError(f"unexpected {found}", exp, t.span)

    def expect(self, kind: str) -> Token:
        if not self.at(kind):
            raise self.fail({kind})
        return self.advance()

    def span_from(self, start: Token) -> Span:
        end = self.toks[self.pos - 1].span.end
        return Span(start.span.start, end, self.path)

    # -- declarations ------------------------------------------------------

    def program(self) -> A.SourceFile:
        decls = []
        seen: dict[str, A.SurfaceDecl] = {}
        while not self.at("eof"):
            if not self.at(*_DECL_START):
                raise self.fail(_DECL_START | {"eof"})
            d = self.decl()
            if d.name in seen:
                raise DuplicateDefinition(f"{d.name} is defined twice", d.name_span)
            seen[d.name] = d
            decls.append(d)
        return A.SourceFile(self.path, tuple(decls))

    def decl(self) -> A.SurfaceDecl:
        start = self.peek()
        abbrv = abstr = False
        if self.at("abbreviation"):
            self.advance()
            abbrv = True
        elif self.at("abstract"):
            self.advance()
            abstr = True
        self.expect("def")
        name = self.expect("ident")
        unfolds, spans = [], []
        if self.at("unfolds"):
            self.advance()
            t = self.expect("ident")
            unfolds.append(t.text)
            spans.append(t.span)
            while self.at("ident"):
                t = self.advance()
                unfolds.append(t.text)
                spans.append(t.span)
        if not self.at(":"):
            raise self.fail({":", "ident"} if unfolds else {":", "unfolds"})
        self.advance()
        ty = self.expr()
        self.expect(":=")
        body = self.expr()
        return A.SurfaceDecl(
            name.text, abbrv, abstr, tuple(unfolds), ty, body,
            span=self.span_from(start), name_span=name.span, unfold_spans=tuple(spans),
        )  # fmt: skip

    # -- expressions -------------------------------------------------------

    def _pi_binder_ahead(self) -> bool:
        if not self.at("(") or self.peek(1).kind != "ident":
            return False
        k = 1
        while self.peek(k).kind == "ident":
            k += 1
        return self.peek(k).kind == ":"

    def expr(self) -> A.Expr:
        start = self.peek()
        if self.at("\\"):
            self.advance()
            params = [self.expect("ident").text]
            while self.at("ident"):
                params.append(self.advance().text)
            self.expect("=>")
            body = self.expr()
            return A.Lam(tuple(params), body, self.span_from(start))
        if self.at("unfold"):
            self.advance()
            names = [self.expect("ident").text]
            while self.at("ident"):
                names.append(self.advance().text)
            self.expect("in")
            body = self.expr()
            return A.Unfold(tuple(names), body, self.span_from(start))
        if self._pi_binder_ahead():
            groups = []
            while self._pi_binder_ahead():
                g = self.advance()
                params = []
                while self.at("ident"):
                    params.append(self.advance().text)
                self.expect(":")
                dom = self.expr()
                self.expect(")")
                groups.append((g, tuple(params), dom))
            if not self.at("->"):
                raise self.fail({"->", "("})
            self.advance()
            cod = self.expr()
            end = self.toks[self.pos - 1].span.end
            for g, params, dom in reversed(groups):
                cod = A.Pi(params, dom, cod, Span(g.span.start, end, self.path))
            return cod
        if not self.at(*_EXPR_START):
            raise self.fail(_EXPR_START | {"("})
        a = self.app()
        if self.at("->"):
            self.advance()
            b = self.expr()
            return A.Arrow(a, b, self.span_from(start))
        return a

    def app(self) -> A.Expr:
        start = self.peek()
        if self.at("Id"):
            self.advance()
            t, l, r = self.atom(), self.atom(), self.atom()
            head: A.Expr = A.IdExpr(t, l, r, self.span_from(start))
        elif self.at("natelim"):
            self.advance()
            m, b, s, t = self.atom(), self.atom(), self.atom(), self.atom()
            head = A.NatElimExpr(m, b, s, t, self.span_from(start))
        elif self.at("j"):
            self.advance()
            m, d, t = self.atom(), self.atom(), self.atom()
            head = A.JExpr(m, d, t, self.span_from(start))
        else:
            head = self.atom()
        while self.at(*_ATOM_START):
            arg = self.atom()
            head = A.App(head, arg, self.span_from(start))
        return head

    def atom(self) -> A.Expr:
        t = self.peek()
        match t.kind:
            case "ident":
                self.advance()
                return A.Name(t.text, t.span)
            case "num":
                self.advance()
                return A.NatLit(int(t.text), t.span)
            case "hole":
                self.advance()
                return A.Hole(t.text[1:] or None, t.span)
            case "Type":
                self.advance()
                return A.UnivExpr(t.span)
            case "refl":
                self.advance()
                return A.ReflExpr(t.span)
            case "(":
                self.advance()
                e = self.expr()
                self.expect(")")
                return e
        raise self.fail(_ATOM_START)


def parse_program(text: str, path: str = "<input>") -> A.SourceFile:
    p = Parser(tokenize(text, path), path)
    return p.program()


def parse_expr(text: str, path: str = "<input>") -> A.Expr:
    p = Parser(tokenize(text, path), path)
    e = p.expr()
    if not p.at("eof"):
        raise p.fail({"eof", "->"} | _ATOM_START)
    return e
