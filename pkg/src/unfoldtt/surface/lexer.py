"""Tokenizer for ``.utt`` sources."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from unfoldtt.errors import LexError, Span

KEYWORDS = frozenset(
    {"def", "unfolds", "abbreviation", "abstract", "unfold", "in", "natelim", "j", "Id", "refl", "Type"}
)

# longest first
PUNCT = [":=", "->", "=>", "→", "⇒", ":", "\\", "λ", "(", ")", "{", "}"]
ALIASES = {"→": "->", "⇒": "=>", "λ": "\\"}

_ASCII_OPS = set("+*^~!&|<>")
_RESERVED = set("→⇒λ∧↪⊢⊤Υ")


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident', 'num', 'hole', 'eof', or the keyword / punctuation itself
    text: str
    span: Span


def is_op_char(c: str) -> bool:
    if c in _RESERVED:
        return False
    if c.isascii():
        return c in _ASCII_OPS
    return unicodedata.category(c) in ("Sm", "So")


def is_ident_start(c: str) -> bool:
    return (c.isalpha() and c not in _RESERVED) or c == "_" or is_op_char(c)


def _is_ident_rest(text: str, i: int) -> bool:
    c = text[i]
    if c == "-":
        nxt = text[i + 1] if i + 1 < len(text) else ""
        return nxt not in (">", "-")
    return is_ident_start(c) or c.isdigit() or c in "'′"


def _quoted_op_end(text: str, i: int) -> int | None:
    """End of a quoted operator ``(+)`` starting at ``i``, if there is one."""
    j = i + 1
    while j < len(text) and is_op_char(text[j]):
        j += 1
    if j > i + 1 and j < len(text) and text[j] == ")":
        return j + 1
    return None


def tokenize(text: str, path: str = "<input>") -> list[Token]:
    toks: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ord(c) < 32 or ord(c) == 0x7F:
            raise LexError(f"control character U+{ord(c):04X}", Span(i, i + 1, path))
        start = i
        if c == "(" and (end := _quoted_op_end(text, i)) is not None:
            i = end
            while i < n and _is_ident_rest(text, i):
                i += 1
            toks.append(Token("ident", text[start:i], Span(start, i, path)))
            continue
        if c.isdigit() and c.isascii():
            while i < n and text[i].isdigit() and text[i].isascii():
                i += 1
            if i < n and _is_ident_rest(text, i) and text[i] != "-":
                raise LexError("identifiers cannot start with a digit", Span(start, i + 1, path))
            toks.append(Token("num", text[start:i], Span(start, i, path)))
            continue
        if c == "?":
            i += 1
            while i < n and _is_ident_rest(text, i):
                i += 1
            toks.append(Token("hole", text[start:i], Span(start, i, path)))
            continue
        if is_ident_start(c):
            i += 1
            while i < n and _is_ident_rest(text, i):
                i += 1
            word = text[start:i]
            kind = word if word in KEYWORDS else "ident"
            toks.append(Token(kind, word, Span(start, i, path)))
            continue
        for p in PUNCT:
            if text.startswith(p, i):
                i += len(p)
                toks.append(Token(ALIASES.get(p, p), p, Span(start, i, path)))
                break
        else:
            raise LexError(f"unexpected character {c!r}", Span(i, i + 1, path))
    toks.append(Token("eof", "", Span(n, n, path)))
    return toks
