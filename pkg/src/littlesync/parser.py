"""Lexer and parser for little source text.

The parser produces the core AST (sugar from the surface syntax is
lowered immediately), assigns a Location to every numeric literal in
the order the literals appear (which equals AST pre-order), and records
the initial substitution rho0 mapping each location to its literal
value.  A Program bundles the parsed prelude definitions, the user
expression, and the location tables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import LittleSyntaxError
from .syntax import (
    ALL_OPS,
    EApp,
    EBool,
    ECase,
    ECons,
    EFun,
    ELet,
    ENil,
    ENum,
    EOp,
    EOpRef,
    EStr,
    EVar,
    Expr,
    Location,
    PBool,
    PCons,
    PNil,
    PNum,
    PStr,
    PVar,
    Pattern,
    op_arity,
    pattern_vars,
)

_NUM = r"-?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_NUM_RE = re.compile(_NUM)
_RANGE_RE = re.compile(r"\{\s*(" + _NUM + r")\s*-\s*(" + _NUM + r")\s*\}")
_SYM_START = re.compile(r"[A-Za-z_+\-*/<>=.#]")
_SYM_CONT = re.compile(r"[A-Za-z0-9_+\-*/<>=.#']")
_STRING_RE = re.compile(r"'((?:[^'\\\n]|\\.)*)'")

_KEYWORDS = {"let", "letrec", "def", "defrec", "if", "case", "cons", "true", "false", "nil"}


@dataclass
class Token:
    kind: str  # lparen rparen lbrack rbrack bar lambda num str sym eof
    text: str
    line: int
    col: int
    # numeric annotations, filled for kind == "num"
    value: float = 0.0
    frozen: bool = False
    thawed: bool = False
    range: Optional[tuple[float, float]] = None

    @property
    def pos(self) -> tuple[int, int]:
        return (self.line, self.col)


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def err(msg: str) -> LittleSyntaxError:
        return LittleSyntaxError(msg, (line, col))

    while i < n:
        ch = source[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if ch == ";":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch in "()[]|":
            kind = {"(": "lparen", ")": "rparen", "[": "lbrack", "]": "rbrack", "|": "bar"}[ch]
            tokens.append(Token(kind, ch, start_line, start_col))
            i, col = i + 1, col + 1
            continue
        if ch == "\\" or ch == "λ":
            tokens.append(Token("lambda", ch, start_line, start_col))
            i, col = i + 1, col + 1
            continue
        if ch == "'":
            m = _STRING_RE.match(source, i)
            if not m:
                raise err("unterminated string literal")
            raw = m.group(1).replace("\\'", "'").replace("\\\\", "\\")
            tokens.append(Token("str", raw, start_line, start_col))
            col += m.end() - i
            i = m.end()
            continue
        m = _NUM_RE.match(source, i)
        # A lone "-" (e.g. the subtraction operator) is a symbol, not a number.
        if m and any(c.isdigit() for c in m.group(0)):
            tok = Token("num", m.group(0), start_line, start_col, value=float(m.group(0)))
            col += m.end() - i
            i = m.end()
            if i < n and source[i] in "!?":
                tok.frozen = source[i] == "!"
                tok.thawed = source[i] == "?"
                i, col = i + 1, col + 1
            if i < n and source[i] == "{":
                rm = _RANGE_RE.match(source, i)
                if not rm:
                    raise LittleSyntaxError(
                        "range annotation bounds must be numeric literals, e.g. {3-30}",
                        (line, col),
                    )
                tok.range = (float(rm.group(1)), float(rm.group(2)))
                col += rm.end() - i
                i = rm.end()
            tokens.append(tok)
            continue
        if ch == "{":
            raise err("'{' is only valid as a range annotation directly after a number")
        if _SYM_START.match(ch):
            j = i + 1
            while j < n and _SYM_CONT.match(source[j]):
                j += 1
            tokens.append(Token("sym", source[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        raise err(f"unexpected character {ch!r}")
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass
class Def:
    """One top-level (def p e) or (defrec p e) form."""

    pattern: Pattern
    bound: Expr
    rec: bool
    pos: Optional[tuple[int, int]] = None


@dataclass
class Program:
    """A parsed program: prelude definitions plus the user expression."""

    prelude_defs: list[Def]
    user: Expr
    rho0: dict[Location, float]  # insertion-ordered by location id
    literals: dict[Location, ENum]
    names: dict[str, Location]
    source: str = ""
    prelude_source: str = ""

    def locations(self) -> list[Location]:
        return list(self.rho0.keys())

    def loc_by_id(self, loc_id: int) -> Location:
        for loc in self.rho0:
            if loc.id == loc_id:
                return loc
        raise KeyError(f"no location with id {loc_id}")

    def resolve_loc(self, key) -> Location:
        """Look up a location by id or by canonical name."""
        if isinstance(key, Location):
            return key
        if isinstance(key, int) and not isinstance(key, bool):
            return self.loc_by_id(key)
        if isinstance(key, str) and key in self.names:
            return self.names[key]
        raise KeyError(f"unknown location {key!r}")

    def frozen_locs(
        self, freeze_default: bool = False, prelude_frozen: bool = True
    ) -> set[Location]:
        """The set of locations the synthesizer must not modify.

        Prelude literals are frozen unless prelude_frozen is cleared, in
        which case only their explicit `!` annotations count.  Under
        freeze_default every unannotated literal is frozen and `?` thaws.
        """
        out: set[Location] = set()
        for loc, lit in self.literals.items():
            if loc.origin == "prelude" and prelude_frozen:
                out.add(loc)
            elif lit.frozen:
                out.add(loc)
            elif freeze_default and not lit.thawed:
                out.add(loc)
        return out

    def find_literal(self, value: float, context: Optional[str] = None) -> Location:
        """Find the location of a literal by value, optionally inside a
        named top-level definition.  Errors if the match is ambiguous."""
        hits = [
            loc
            for loc, v in self.rho0.items()
            if v == value and (context is None or loc.context == context)
        ]
        if len(hits) != 1:
            raise KeyError(f"literal {value} in {context or 'program'}: {len(hits)} matches")
        return hits[0]


class _Parser:
    def __init__(self, tokens: list[Token], origin: str, loc_counter: Iterator[int]):
        self.tokens = tokens
        self.i = 0
        self.origin = origin
        self.loc_counter = loc_counter
        self.context: Optional[str] = None
        self.rho0: dict[Location, float] = {}
        self.literals: dict[Location, ENum] = {}
        self.names: dict[str, Location] = {}

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise LittleSyntaxError(f"expected {what}, found {tok.text or 'end of input'!r}", tok.pos)
        return tok

    def err(self, msg: str, tok: Token) -> LittleSyntaxError:
        return LittleSyntaxError(msg, tok.pos)

    # -- expressions -------------------------------------------------------

    def make_num(self, tok: Token) -> ENum:
        loc = Location(next(self.loc_counter), self.origin, context=self.context)
        lit = ENum(
            pos=tok.pos,
            value=tok.value,
            loc=loc,
            frozen=tok.frozen,
            thawed=tok.thawed,
            range=tok.range,
        )
        self.rho0[loc] = tok.value
        self.literals[loc] = lit
        return lit

    def parse_expr(self) -> Expr:
        tok = self.next()
        if tok.kind == "num":
            return self.make_num(tok)
        if tok.kind == "str":
            return EStr(pos=tok.pos, value=tok.text)
        if tok.kind == "sym":
            if tok.text == "true":
                return EBool(pos=tok.pos, value=True)
            if tok.text == "false":
                return EBool(pos=tok.pos, value=False)
            if tok.text == "nil":
                return ENil(pos=tok.pos)
            if tok.text in ALL_OPS:
                return EOpRef(pos=tok.pos, op=tok.text)
            if tok.text in _KEYWORDS:
                raise self.err(f"keyword {tok.text!r} cannot be used as an expression", tok)
            return EVar(pos=tok.pos, name=tok.text)
        if tok.kind == "lbrack":
            return self.parse_list_literal(tok)
        if tok.kind == "lparen":
            return self.parse_compound(tok)
        raise self.err(f"unexpected {tok.text or 'end of input'!r}", tok)

    def parse_list_literal(self, open_tok: Token) -> Expr:
        elems: list[Expr] = []
        tail: Expr = ENil(pos=open_tok.pos)
        while True:
            tok = self.peek()
            if tok.kind == "rbrack":
                self.next()
                break
            if tok.kind == "bar":
                self.next()
                tail = self.parse_expr()
                self.expect("rbrack", "']'")
                break
            if tok.kind == "eof":
                raise self.err("unterminated list literal", open_tok)
            elems.append(self.parse_expr())
        out = tail
        for e in reversed(elems):
            out = ECons(pos=open_tok.pos, head=e, tail=out)
        return out

    def parse_compound(self, open_tok: Token) -> Expr:
        tok = self.peek()
        if tok.kind == "lambda":
            self.next()
            return self.parse_fun(open_tok)
        if tok.kind == "sym" and tok.text in ("let", "letrec"):
            self.next()
            return self.parse_let(open_tok, rec=tok.text == "letrec")
        if tok.kind == "sym" and tok.text in ("def", "defrec"):
            raise self.err("(def ...) is only allowed at the top level of a program", tok)
        if tok.kind == "sym" and tok.text == "if":
            self.next()
            cond = self.parse_expr()
            then = self.parse_expr()
            other = self.parse_expr()
            self.expect("rparen", "')'")
            return ECase(
                pos=open_tok.pos,
                scrutinee=cond,
                branches=((PBool(value=True), then), (PBool(value=False), other)),
            )
        if tok.kind == "sym" and tok.text == "case":
            self.next()
            return self.parse_case(open_tok)
        if tok.kind == "sym" and tok.text == "cons":
            self.next()
            head = self.parse_expr()
            tail = self.parse_expr()
            self.expect("rparen", "')'")
            return ECons(pos=open_tok.pos, head=head, tail=tail)
        if tok.kind == "sym" and tok.text in ALL_OPS:
            op_tok = self.next()
            args = self.parse_args(open_tok)
            return self.build_op(open_tok, op_tok.text, args)
        # general application
        fn = self.parse_expr()
        args = self.parse_args(open_tok)
        if not args:
            raise self.err("application needs at least one argument", open_tok)
        out = fn
        for a in args:
            out = EApp(pos=open_tok.pos, fn=out, arg=a)
        return out

    def parse_args(self, open_tok: Token) -> list[Expr]:
        args: list[Expr] = []
        while True:
            tok = self.peek()
            if tok.kind == "rparen":
                self.next()
                return args
            if tok.kind == "eof":
                raise self.err("unterminated '('", open_tok)
            args.append(self.parse_expr())

    def build_op(self, open_tok: Token, op: str, args: list[Expr]) -> Expr:
        arity = op_arity(op)
        if len(args) == arity:
            return EOp(pos=open_tok.pos, op=op, args=tuple(args))
        if len(args) < arity:
            out: Expr = EOpRef(pos=open_tok.pos, op=op)
            for a in args:
                out = EApp(pos=open_tok.pos, fn=out, arg=a)
            if not args:
                raise self.err(f"operator {op} needs arguments", open_tok)
            return out
        # Too many arguments: apply the saturated operator to the rest.
        out = EOp(pos=open_tok.pos, op=op, args=tuple(args[:arity]))
        for a in args[arity:]:
            out = EApp(pos=open_tok.pos, fn=out, arg=a)
        return out

    def parse_fun(self, open_tok: Token) -> Expr:
        params: list[Pattern] = []
        tok = self.peek()
        if tok.kind == "lparen":
            self.next()
            while self.peek().kind != "rparen":
                if self.peek().kind == "eof":
                    raise self.err("unterminated parameter list", tok)
                params.append(self.parse_pattern())
            self.next()
        else:
            params.append(self.parse_pattern())
        if not params:
            raise self.err("lambda needs at least one parameter", open_tok)
        body = self.parse_expr()
        self.expect("rparen", "')'")
        out = body
        for p in reversed(params):
            self.check_pattern(p)
            out = EFun(pos=open_tok.pos, param=p, body=out)
        return out

    def parse_let(self, open_tok: Token, rec: bool) -> Expr:
        pat = self.parse_pattern()
        self.check_pattern(pat)
        bound = self.parse_expr()
        self.alias(pat, bound)
        body = self.parse_expr()
        self.expect("rparen", "')'")
        if rec and not isinstance(pat, PVar):
            raise self.err("letrec requires a plain variable pattern", open_tok)
        return ELet(pos=open_tok.pos, pattern=pat, bound=bound, body=body, rec=rec)

    def parse_case(self, open_tok: Token) -> Expr:
        scrutinee = self.parse_expr()
        branches: list[tuple[Pattern, Expr]] = []
        while True:
            tok = self.peek()
            if tok.kind == "rparen":
                self.next()
                break
            if tok.kind == "eof":
                raise self.err("unterminated case expression", open_tok)
            btok = self.expect("lparen", "'(' starting a case branch")
            pat = self.parse_pattern()
            self.check_pattern(pat)
            expr = self.parse_expr()
            self.expect("rparen", "')'")
            branches.append((pat, expr))
        if not branches:
            raise self.err("case needs at least one branch", open_tok)
        return ECase(pos=open_tok.pos, scrutinee=scrutinee, branches=tuple(branches))

    # -- patterns ----------------------------------------------------------

    def parse_pattern(self) -> Pattern:
        tok = self.next()
        if tok.kind == "sym":
            if tok.text == "true":
                return PBool(pos=tok.pos, value=True)
            if tok.text == "false":
                return PBool(pos=tok.pos, value=False)
            if tok.text == "nil":
                return PNil(pos=tok.pos)
            if tok.text in _KEYWORDS or tok.text in ALL_OPS:
                raise self.err(f"{tok.text!r} cannot be used as a pattern variable", tok)
            return PVar(pos=tok.pos, name=tok.text)
        if tok.kind == "num":
            if tok.frozen or tok.thawed or tok.range:
                raise self.err("number patterns do not take annotations", tok)
            return PNum(pos=tok.pos, value=tok.value)
        if tok.kind == "str":
            return PStr(pos=tok.pos, value=tok.text)
        if tok.kind == "lbrack":
            elems: list[Pattern] = []
            tail: Pattern = PNil(pos=tok.pos)
            while True:
                t = self.peek()
                if t.kind == "rbrack":
                    self.next()
                    break
                if t.kind == "bar":
                    self.next()
                    tail = self.parse_pattern()
                    self.expect("rbrack", "']'")
                    break
                if t.kind == "eof":
                    raise self.err("unterminated list pattern", tok)
                elems.append(self.parse_pattern())
            out = tail
            for p in reversed(elems):
                out = PCons(pos=tok.pos, head=p, tail=out)
            return out
        raise self.err(f"expected a pattern, found {tok.text or 'end of input'!r}", tok)

    def check_pattern(self, p: Pattern) -> None:
        seen: set[str] = set()
        for name in pattern_vars(p):
            if name in seen and name != "_":
                raise LittleSyntaxError(f"duplicate variable {name!r} in pattern", p.pos)
            seen.add(name)

    def alias(self, pat: Pattern, expr: Expr) -> None:
        """Record canonical names for literals bound directly to variables."""
        if isinstance(pat, PVar) and isinstance(expr, ENum):
            if expr.loc.name is None and pat.name != "_":
                expr.loc.name = pat.name
                self.names.setdefault(pat.name, expr.loc)
        elif isinstance(pat, PCons) and isinstance(expr, ECons):
            self.alias(pat.head, expr.head)
            self.alias(pat.tail, expr.tail)

    # -- top level ---------------------------------------------------------

    def parse_toplevel(self) -> tuple[list[Def], Optional[Expr]]:
        defs: list[Def] = []
        final: Optional[Expr] = None
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind == "lparen" and self.tokens[self.i + 1].kind == "sym" and self.tokens[
                self.i + 1
            ].text in ("def", "defrec"):
                if final is not None:
                    raise self.err("definitions must come before the final expression", tok)
                open_tok = self.next()
                kw = self.next()
                pat = self.parse_pattern()
                self.check_pattern(pat)
                names = pattern_vars(pat)
                outer = self.context
                if self.context is None:
                    self.context = names[0] if names else None
                bound = self.parse_expr()
                self.context = outer
                self.expect("rparen", "')'")
                self.alias(pat, bound)
                if kw.text == "defrec" and not isinstance(pat, PVar):
                    raise self.err("defrec requires a plain variable pattern", open_tok)
                defs.append(Def(pat, bound, kw.text == "defrec", open_tok.pos))
            else:
                if final is not None:
                    raise self.err("a program has exactly one final expression", tok)
                final = self.parse_expr()
        return defs, final


def _counter(start: int = 1) -> Iterator[int]:
    i = start
    while True:
        yield i
        i += 1


def parse_program(source: str, prelude_source: str = "") -> Program:
    """Parse prelude definitions and a user program into a Program.

    Location ids run through the prelude first, then the user source, in
    literal order.  The prelude may only contain definitions; the user
    source is a sequence of definitions followed by one final expression.
    """
    counter = _counter()

    pp = _Parser(tokenize(prelude_source), "prelude", counter)
    prelude_defs, prelude_final = pp.parse_toplevel()
    if prelude_final is not None:
        raise LittleSyntaxError("the prelude may only contain definitions", prelude_final.pos)

    up = _Parser(tokenize(source), "user", counter)
    user_defs, final = up.parse_toplevel()
    if final is None:
        raise LittleSyntaxError("program needs a final expression", (1, 1))

    user: Expr = final
    for d in reversed(user_defs):
        user = ELet(pos=d.pos, pattern=d.pattern, bound=d.bound, body=user, rec=d.rec)

    rho0 = dict(pp.rho0)
    rho0.update(up.rho0)
    literals = dict(pp.literals)
    literals.update(up.literals)
    names = dict(pp.names)
    names.update(up.names)
    return Program(
        prelude_defs=prelude_defs,
        user=user,
        rho0=rho0,
        literals=literals,
        names=names,
        source=source,
        prelude_source=prelude_source,
    )


def parse_expression(source: str) -> tuple[Expr, dict[Location, float]]:
    """Parse a single expression (no prelude, no defs)."""
    p = _Parser(tokenize(source), "user", _counter())
    expr = p.parse_expr()
    tok = p.peek()
    if tok.kind != "eof":
        raise LittleSyntaxError(f"unexpected trailing {tok.text!r}", tok.pos)
    return expr, p.rho0
