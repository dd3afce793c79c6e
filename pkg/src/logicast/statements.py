"""Line-oriented statement files and their canonical polynomial rendering.

Each nonempty line is one statement. Two forms exist:

    formula [is TRUE | is FALSE]     e.g.  NOT x1 AND x2 is FALSE
    polynomial = 0                   e.g.  x1*x2 + x1 + 1 = 0

Formula connectives bind NOT > AND > XOR > OR > IMPLIES, with IMPLIES
right-associative; a bare formula is read as asserted TRUE. `#` starts a
comment. Variables are written x1, x2, ... (1-indexed).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import StatementSyntaxError, VariableOutOfRange
from .poly import (
    And,
    Formula,
    Implies,
    Not,
    Or,
    Poly,
    PolySet,
    Var,
    Xor,
    monomial_vars,
    statement_poly,
)

_TOKEN_RE = re.compile(
    r"""[ \t\r]+
      | (?P<comment>\#.*)
      | (?P<word>[A-Za-z]+[0-9]*)
      | (?P<sym>[()+*=])
      | (?P<digit>[01])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"NOT", "AND", "OR", "XOR", "IMPLIES", "is", "TRUE", "FALSE"}
_SYMS = {"(": "LP", ")": "RP", "+": "PLUS", "*": "STAR", "=": "EQ"}


@dataclass(frozen=True)
class _Token:
    kind: str  # VAR | keyword name | LP RP PLUS STAR EQ | ZERO | ONE | END
    value: int  # variable index when kind == VAR
    line: int
    col: int


def _tokenize_line(text: str, line_no: int) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        mo = _TOKEN_RE.match(text, pos)
        if mo is None:
            raise StatementSyntaxError(
                f"unexpected character {text[pos]!r}", line_no, pos + 1
            )
        col = pos + 1
        pos = mo.end()
        if mo.lastgroup == "comment":
            break
        if mo.lastgroup is None:
            continue
        if mo.lastgroup == "word":
            word = mo.group("word")
            if word in _KEYWORDS:
                tokens.append(_Token(word, 0, line_no, col))
            elif word[0] == "x" and word[1:].isdigit():
                index = int(word[1:])
                if index < 1:
                    raise VariableOutOfRange(
                        f"line {line_no}, col {col}: variables are 1-indexed, got {word}"
                    )
                tokens.append(_Token("VAR", index, line_no, col))
            else:
                raise StatementSyntaxError(f"unknown token {word!r}", line_no, col)
        elif mo.lastgroup == "sym":
            tokens.append(_Token(_SYMS[mo.group("sym")], 0, line_no, col))
        else:
            kind = "ONE" if mo.group("digit") == "1" else "ZERO"
            tokens.append(_Token(kind, 0, line_no, col))
    tokens.append(_Token("END", 0, line_no, len(text) + 1))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "END":
            self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise StatementSyntaxError(f"expected {what}", tok.line, tok.col)
        return self.next()


# ------------------------------------------------------------ formula parser

def _parse_formula(cur: _Cursor) -> Formula:
    return _parse_implies(cur)


def _parse_implies(cur: _Cursor) -> Formula:
    lhs = _parse_or(cur)
    if cur.peek().kind == "IMPLIES":
        cur.next()
        return Implies(lhs, _parse_implies(cur))  # right-associative
    return lhs


def _parse_or(cur: _Cursor) -> Formula:
    f = _parse_xor(cur)
    while cur.peek().kind == "OR":
        cur.next()
        f = Or(f, _parse_xor(cur))
    return f


def _parse_xor(cur: _Cursor) -> Formula:
    f = _parse_and(cur)
    while cur.peek().kind == "XOR":
        cur.next()
        f = Xor(f, _parse_and(cur))
    return f


def _parse_and(cur: _Cursor) -> Formula:
    f = _parse_unary(cur)
    while cur.peek().kind == "AND":
        cur.next()
        f = And(f, _parse_unary(cur))
    return f


def _parse_unary(cur: _Cursor) -> Formula:
    tok = cur.peek()
    if tok.kind == "NOT":
        cur.next()
        return Not(_parse_unary(cur))
    if tok.kind == "VAR":
        cur.next()
        return Var(tok.value)
    if tok.kind == "LP":
        cur.next()
        f = _parse_formula(cur)
        cur.expect("RP", "')'")
        return f
    raise StatementSyntaxError("expected a variable, NOT, or '('", tok.line, tok.col)


def _parse_formula_line(cur: _Cursor) -> Poly:
    f = _parse_formula(cur)
    asserted = True
    if cur.peek().kind == "is":
        cur.next()
        tok = cur.peek()
        if tok.kind == "TRUE":
            cur.next()
        elif tok.kind == "FALSE":
            cur.next()
            asserted = False
        else:
            raise StatementSyntaxError("expected TRUE or FALSE after 'is'", tok.line, tok.col)
    cur.expect("END", "end of statement")
    return statement_poly(f, asserted)


# --------------------------------------------------------- raw polynomial mode

def _parse_poly_factor(cur: _Cursor) -> Poly:
    tok = cur.peek()
    if tok.kind == "VAR":
        cur.next()
        return Poly.variable(tok.value)
    if tok.kind == "ONE":
        cur.next()
        return Poly.one()
    if tok.kind == "ZERO":
        cur.next()
        return Poly.zero()
    raise StatementSyntaxError("expected a variable, 1, or 0", tok.line, tok.col)


def _parse_poly_line(cur: _Cursor) -> Poly:
    total = Poly.zero()
    while True:
        term = _parse_poly_factor(cur)
        while cur.peek().kind == "STAR":
            cur.next()
            term = term * _parse_poly_factor(cur)
        total = total + term
        if cur.peek().kind == "PLUS":
            cur.next()
            continue
        break
    cur.expect("EQ", "'='")
    cur.expect("ZERO", "'0' on the right-hand side")
    cur.expect("END", "end of statement")
    return total


# ------------------------------------------------------------------ public

def parse_statements(text: str, m: int | None = None) -> PolySet:
    """Parse a statement file into a PolySet.

    The variable count is `m` when given, else the largest index used.
    """
    polys: set[Poly] = set()
    seen_m = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize_line(raw, line_no)
        if tokens[0].kind == "END":
            continue
        cur = _Cursor(tokens)
        if any(t.kind == "EQ" for t in tokens):
            q = _parse_poly_line(cur)
        else:
            q = _parse_formula_line(cur)
        polys.add(q)
        seen_m = max(seen_m, q.max_var())
    if m is None:
        m = seen_m
    elif seen_m > m:
        raise VariableOutOfRange(
            f"statements use x{seen_m} but only {m} variables were declared"
        )
    return PolySet(m, frozenset(polys))


def poly_to_text(q: Poly) -> str:
    """Canonical text: terms in degree-major order, variables ascending."""
    if q.is_zero:
        return "0"
    keyed = sorted(q.masks, key=lambda t: (-t.bit_count(), monomial_vars(t)))
    parts = []
    for t in keyed:
        parts.append("1" if t == 0 else "*".join(f"x{i}" for i in monomial_vars(t)))
    return " + ".join(parts)


def render_statements(ps: PolySet) -> str:
    """Render a PolySet as raw-polynomial statement lines, one per polynomial."""
    lines = sorted(f"{poly_to_text(q)} = 0" for q in ps.polys)
    return "\n".join(lines) + ("\n" if lines else "")
