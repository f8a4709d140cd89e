"""Surface syntax for ``.fop`` problem files.

Grammar (statements end with ``;``, ``#`` starts a comment)::

    problem   := { statement ";" }
    statement := "pred" NAME "/" INT "in" ("int" | "real") "[" number "," number "]"
               | "fun" NAME "/" INT
               | "fun" NAME "(" object { "," object } ")" "=" object
               | "objects" object { "," object }
               | "sentence" formula
               | "query" formula
               | "threshold" number
    formula   := quant | maxexpr
    quant     := ("!" | "?") NAME "." formula
    maxexpr   := minexpr { "v" minexpr }
    minexpr   := sumexpr { "^" sumexpr }
    sumexpr   := unary { ("+" | "-") unary }
    unary     := "-" number [ "*" unary ] | "-" unary | number [ "*" unary ]
               | primary { "*" number }
    primary   := "(" formula ")" | quant | NAME "(" [ term { "," term } ] ")" | NAME
    term      := NAME [ "(" term { "," term } ")" ] | INT
    number    := INT [ "/" INT ] | DECIMAL

``!x.`` is the infimum quantifier, ``?x.`` the supremum, ``^`` is min and
``v`` is max.  The Unicode forms ``∧ ∨ ⋀ ⋁ −`` are accepted too.  A bare
name in term position is a constant if declared as a zero-argument
function (``nil`` and numerals always are), otherwise a variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError
from .syntax import (
    NIL, Add, Fn, Formula, Inf, Max, Min, Neg, Pred, PredDecl, Scalar, Scale,
    Signature, Sub, Sup, Term, Var,
)

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+\.\d+|\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>->|[()\[\],;/*+\-^!?.={}~&|])
""", re.VERBOSE)

_UNICODE = {"∧": "^", "∨": "v", "⋀": "!", "⋁": "?", "−": "-", "¬": "~", "∀": "forall", "∃": "exists"}


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    for u, a in _UNICODE.items():
        text = text.replace(u, f" {a} " if a.isalpha() else a)
    out: list[Token] = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind != "ws":
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


@dataclass
class ProblemFile:
    signature: Signature
    sentence: Formula | None = None
    query: Formula | None = None
    threshold: Fraction | None = None
    objects: list[str] | None = None
    functions: dict = field(default_factory=dict)


class Parser:
    """Recursive-descent parser over a token list."""

    def __init__(self, tokens: list[Token], signature: Signature, declare_numerals: bool = True):
        self.toks = tokens
        self.i = 0
        self.sig = signature
        self.declare_numerals = declare_numerals

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("sym", "name")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def name(self) -> Token:
        if self.tok.kind != "name":
            raise self.error(f"expected a name, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    # -- numbers

    def number(self) -> Fraction:
        neg = False
        if self.at("-"):
            self.advance()
            neg = True
        if self.tok.kind != "num":
            raise self.error("expected a number")
        value = Fraction(self.advance().text)
        if self.at("/") and self.peek().kind == "num":
            self.advance()
            den = Fraction(self.advance().text)
            if den == 0:
                raise self.error("zero denominator")
            value /= den
        return -value if neg else value

    # -- terms

    def term(self) -> Term:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            if tok.text not in self.sig.funs:
                if not self.declare_numerals:
                    raise self.error(f"undeclared object {tok.text}", tok)
                self.sig.fun(tok.text, 0)
            return Fn(tok.text)
        name = self.name()
        if self.at("("):
            args = self.arglist()
            self.check_fun(name, len(args))
            return Fn(name.text, tuple(args))
        if self.sig.funs.get(name.text) == 0 or name.text == NIL:
            return Fn(name.text)
        if name.text in self.sig.funs:
            raise self.error(f"function {name.text} used as a variable", name)
        return Var(name.text)

    def arglist(self) -> list[Term]:
        self.expect("(")
        args: list[Term] = []
        if not self.at(")"):
            args.append(self.term())
            while self.at(","):
                self.advance()
                args.append(self.term())
        self.expect(")")
        return args

    def check_fun(self, tok: Token, n: int) -> None:
        if tok.text not in self.sig.funs:
            raise self.error(f"undeclared function {tok.text}", tok)
        if self.sig.funs[tok.text] != n:
            raise self.error(f"arity mismatch: {tok.text} takes {self.sig.funs[tok.text]} "
                             f"argument(s), got {n}", tok)

    # -- formulas

    def formula(self) -> Formula:
        if self.at("!") or self.at("?"):
            return self.quantifier()
        left = self.min_expr()
        while self.at("v"):
            self.advance()
            left = Max(left, self.min_expr())
        return left

    def quantifier(self) -> Formula:
        kind = self.advance().text
        var = self.name()
        if var.text in self.sig.funs:
            raise self.error(f"cannot quantify over symbol {var.text}", var)
        self.expect(".")
        body = self.formula()
        return Inf(var.text, body) if kind == "!" else Sup(var.text, body)

    def min_expr(self) -> Formula:
        left = self.sum_expr()
        while self.at("^"):
            self.advance()
            left = Min(left, self.sum_expr())
        return left

    def sum_expr(self) -> Formula:
        left = self.unary()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            right = self.unary()
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def unary(self) -> Formula:
        if self.at("-"):
            if self.peek().kind == "num":
                c = self.number()
                return self.scaled_by(c)
            self.advance()
            return Neg(self.unary())
        if self.tok.kind == "num":
            return self.scaled_by(self.number())
        body = self.primary()
        while self.at("*"):
            self.advance()
            body = Scale(self.number(), body)
        return body

    def scaled_by(self, c: Fraction) -> Formula:
        if self.at("*"):
            self.advance()
            return Scale(c, self.unary())
        return Scalar(c)

    def primary(self) -> Formula:
        if self.at("("):
            self.advance()
            inner = self.formula()
            self.expect(")")
            return inner
        if self.at("!") or self.at("?"):
            return self.quantifier()
        name = self.name()
        if name.text == "v":
            raise self.error("'v' is the max operator and cannot start a formula", name)
        if self.at("("):
            args = self.arglist()
        else:
            args = None
        decl = self.sig.preds.get(name.text)
        if decl is None:
            if args is None and name.text not in self.sig.funs:
                raise self.error(f"variable {name.text} used as a formula", name)
            raise self.error(f"undeclared predicate {name.text}", name)
        args = args or []
        if decl.arity != len(args):
            raise self.error(f"arity mismatch: {name.text} takes {decl.arity} argument(s), "
                             f"got {len(args)}", name)
        return Pred(name.text, tuple(args))

    # -- statements

    def declaration(self, problem: ProblemFile) -> None:
        head = self.name()
        if head.text == "pred":
            name = self.name()
            self.expect("/")
            arity = int(self.advance().text)
            self.expect("in")
            sort = self.name()
            if sort.text not in ("int", "real"):
                raise self.error("sort must be 'int' or 'real'", sort)
            self.expect("[")
            if self.tok.text in ("inf", "infinity") or self.peek().text in ("inf", "infinity"):
                raise self.error("unbounded range: predicate ranges must be bounded")
            lo = self.number()
            self.expect(",")
            if self.tok.text in ("inf", "infinity") or self.peek().text in ("inf", "infinity"):
                raise self.error("unbounded range: predicate ranges must be bounded")
            hi = self.number()
            self.expect("]")
            if lo > hi:
                raise self.error(f"invalid range [{lo}, {hi}]", name)
            integer = sort.text == "int"
            if integer and (lo.denominator != 1 or hi.denominator != 1):
                raise self.error("integer range needs integer endpoints", name)
            problem.signature.preds[name.text] = PredDecl(name.text, arity, lo, hi, integer)
        elif head.text == "fun" and self.peek().text == "/":
            name = self.name()
            self.expect("/")
            problem.signature.fun(name.text, int(self.advance().text))
        elif head.text == "objects":
            objs = [self.object_name()]
            while self.at(","):
                self.advance()
                objs.append(self.object_name())
            for o in objs:
                problem.signature.fun(o, 0)
            problem.objects = (problem.objects or []) + objs

    def object_name(self) -> str:
        if self.tok.kind in ("num", "name"):
            return self.advance().text
        raise self.error("expected an object name")

    def statement(self, problem: ProblemFile) -> None:
        head = self.name()
        if head.text in ("pred", "objects") or (head.text == "fun" and self.peek().text == "/"):
            while not self.at(";"):
                self.advance()
        elif head.text == "fun":
            name = self.name()
            args = []
            if self.at("("):
                self.expect("(")
                if not self.at(")"):
                    args.append(self.object_name())
                    while self.at(","):
                        self.advance()
                        args.append(self.object_name())
                self.expect(")")
            self.check_fun(name, len(args))
            self.expect("=")
            problem.functions[(name.text, tuple(args))] = self.object_name()
        elif head.text == "sentence":
            if problem.sentence is not None:
                raise self.error("only one sentence per file", head)
            problem.sentence = self.formula()
        elif head.text == "query":
            problem.query = self.formula()
        elif head.text == "threshold":
            problem.threshold = self.number()
        else:
            raise self.error(f"unknown statement {head.text!r}", head)
        if not self.at(";"):
            raise self.error(f"expected ';', found {self.tok.text or 'end of input'!r}")


def _statements(tokens: list[Token]) -> list[list[Token]]:
    out, cur = [], []
    for tok in tokens:
        if tok.kind == "eof":
            if cur:
                raise ParseError("missing ';' at end of input", tok.line, tok.col)
            break
        cur.append(tok)
        if tok.text == ";":
            out.append(cur)
            cur = []
    return out


def parse_problem(text: str, signature: Signature | None = None) -> ProblemFile:
    """Parse a ``.fop`` file.  Declarations may appear in any order."""
    problem = ProblemFile(signature.copy() if signature else Signature())
    stmts = _statements(tokenize(text))
    eof = Token("eof", "", 0, 0)
    for st in stmts:
        p = Parser(st + [eof], problem.signature)
        p.declaration(problem)
    for st in stmts:
        p = Parser(st + [eof], problem.signature)
        p.statement(problem)
    return problem


def parse_formula(text: str, signature: Signature) -> Formula:
    """Parse a single formula against ``signature`` (numerals become constants)."""
    p = Parser(tokenize(text), signature)
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return f


def parse_term(text: str, signature: Signature) -> Term:
    p = Parser(tokenize(text), signature)
    t = p.term()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return t


def format_problem(problem: ProblemFile) -> str:
    """Render declarations and directives back into ``.fop`` text."""
    from .syntax import show, show_number

    lines = []
    for d in problem.signature.preds.values():
        sort = "int" if d.integer else "real"
        lines.append(f"pred {d.name}/{d.arity} in {sort}[{show_number(d.lo)}, {show_number(d.hi)}];")
    objs = set(problem.objects or [])
    for name, arity in problem.signature.funs.items():
        if name != NIL and name not in objs and not name.isdigit():
            lines.append(f"fun {name}/{arity};")
    if problem.objects:
        lines.append(f"objects {', '.join(problem.objects)};")
    for (name, args), value in problem.functions.items():
        lines.append(f"fun {name}({', '.join(args)}) = {value};" if args else f"fun {name} = {value};")
    if problem.sentence is not None:
        lines.append(f"sentence {show(problem.sentence)};")
    if problem.query is not None:
        lines.append(f"query {show(problem.query)};")
    if problem.threshold is not None:
        lines.append(f"threshold {show_number(problem.threshold)};")
    return "\n".join(lines) + "\n"
