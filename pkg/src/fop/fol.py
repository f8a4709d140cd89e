"""First-order logic front end: AST, ``.fol`` parser, model checking and the two translations to FOP.

``.fol`` files look like::

    pred bird/1; pred flies/1; fun father/1; fun Stanley/0;
    formula (bird(x) -> flies(x)) & eagle(Stanley);

Several ``formula`` statements are conjoined.  Connectives, loosest first:
``->`` (right associative), ``|``, ``&``, ``~``; quantifiers are
``forall x.`` and ``exists x.``; ``T`` and ``F`` are the constants.

Translation A maps truth to 1 and falsity to -1, so predicates range over
{-1, 1} and a sentence holds exactly when its value is >= 0.  Translation B
maps truth to 1 and falsity to 0 (predicates in {0, 1}, threshold 1/2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .errors import ParseError
from .parser import Parser, Token, _statements, tokenize
from .semantics import Model
from .syntax import (
    Add, Formula, Inf, Max, Min, Neg, Pred, Scalar, Scale, Signature, Sub, Sup, Term, Var,
)


@dataclass(frozen=True)
class FTrue:
    pass


@dataclass(frozen=True)
class FFalse:
    pass


@dataclass(frozen=True)
class FAtom:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class FNot:
    body: "Fol"


@dataclass(frozen=True)
class FAnd:
    left: "Fol"
    right: "Fol"


@dataclass(frozen=True)
class FOr:
    left: "Fol"
    right: "Fol"


@dataclass(frozen=True)
class FImplies:
    left: "Fol"
    right: "Fol"


@dataclass(frozen=True)
class FForall:
    var: str
    body: "Fol"


@dataclass(frozen=True)
class FExists:
    var: str
    body: "Fol"


Fol = Union[FTrue, FFalse, FAtom, FNot, FAnd, FOr, FImplies, FForall, FExists]


@dataclass
class FolProblem:
    signature: Signature      # predicate ranges here are placeholders; see fop_signature
    formula: Fol


# --------------------------------------------------------------------------
# parsing and printing


class FolParser(Parser):
    def fol(self) -> Fol:
        if self.at("forall") or self.at("exists"):
            kind = self.advance().text
            var = self.name()
            if var.text in self.sig.funs:
                raise self.error(f"cannot quantify over function {var.text}", var)
            self.expect(".")
            body = self.fol()
            return FForall(var.text, body) if kind == "forall" else FExists(var.text, body)
        left = self.disjunction()
        if self.at("->"):
            self.advance()
            return FImplies(left, self.fol())
        return left

    def disjunction(self) -> Fol:
        left = self.conjunction()
        while self.at("|"):
            self.advance()
            left = FOr(left, self.conjunction())
        return left

    def conjunction(self) -> Fol:
        left = self.negation()
        while self.at("&"):
            self.advance()
            left = FAnd(left, self.negation())
        return left

    def negation(self) -> Fol:
        if self.at("~"):
            self.advance()
            return FNot(self.negation())
        if self.at("("):
            self.advance()
            f = self.fol()
            self.expect(")")
            return f
        if self.at("forall") or self.at("exists"):
            return self.fol()
        tok = self.name()
        if tok.text == "T" and tok.text not in self.sig.preds:
            return FTrue()
        if tok.text == "F" and tok.text not in self.sig.preds:
            return FFalse()
        if tok.text not in self.sig.preds:
            raise self.error(f"undeclared predicate {tok.text}", tok)
        args = tuple(self.arglist()) if self.at("(") else ()
        if self.sig.preds[tok.text].arity != len(args):
            raise self.error(f"arity mismatch: {tok.text} takes {self.sig.preds[tok.text].arity} "
                             f"argument(s), got {len(args)}", tok)
        return FAtom(tok.text, args)


def parse_fol(text: str, signature: Signature | None = None) -> FolProblem:
    sig = signature.copy() if signature else Signature()
    stmts = _statements(tokenize(text))
    eof = Token("eof", "", 0, 0)
    parts = []
    for st in stmts:
        p = FolParser(st + [eof], sig)
        head = p.name()
        if head.text in ("pred", "fun"):
            name = p.name()
            p.expect("/")
            if p.tok.kind != "num":
                raise p.error("expected an arity")
            arity = int(p.advance().text)
            if head.text == "pred":
                sig.pred(name.text, arity, 0, 1)
            else:
                sig.fun(name.text, arity)
        elif head.text not in ("formula", "sentence"):
            raise p.error(f"unknown statement {head.text!r}", head)
    for st in stmts:
        p = FolParser(st + [eof], sig)
        head = p.name()
        if head.text in ("formula", "sentence"):
            parts.append(p.fol())
            if not p.at(";"):
                raise p.error(f"expected ';', found {p.tok.text or 'end of input'!r}")
    if not parts:
        raise ParseError("no formula in input", 1, 1)
    f = parts[0]
    for g in parts[1:]:
        f = FAnd(f, g)
    return FolProblem(sig, f)


def parse_fol_formula(text: str, signature: Signature) -> Fol:
    p = FolParser(tokenize(text), signature)
    f = p.fol()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return f


_PREC = {FImplies: 0, FOr: 1, FAnd: 2}


def show_fol(f: Fol) -> str:
    return _show_fol(f, 0)


def _show_fol(f: Fol, need: int) -> str:
    if isinstance(f, FTrue):
        return "T"
    if isinstance(f, FFalse):
        return "F"
    if isinstance(f, FAtom):
        return f"{f.name}({', '.join(str(a) for a in f.args)})" if f.args else f.name
    if isinstance(f, FNot):
        return "~" + _show_fol(f.body, 3)
    if isinstance(f, (FForall, FExists)):
        word = "forall" if isinstance(f, FForall) else "exists"
        text = f"{word} {f.var}. {_show_fol(f.body, 0)}"
        return text if need == 0 else f"({text})"
    prec = _PREC[type(f)]
    op = {FImplies: "->", FOr: "|", FAnd: "&"}[type(f)]
    if isinstance(f, FImplies):
        text = f"{_show_fol(f.left, 1)} -> {_show_fol(f.right, 0)}"
    else:
        text = f"{_show_fol(f.left, prec)} {op} {_show_fol(f.right, prec + 1)}"
    return text if prec >= need else f"({text})"


# --------------------------------------------------------------------------
# model checking


def holds(f: Fol, model: Model, valuation: Mapping[str, object] | None = None) -> bool:
    """Classical truth; a predicate entry is true when its stored value is positive."""
    env = dict(valuation or {})
    return _holds(f, model, env)


def _term(t: Term, model: Model, env: dict):
    if isinstance(t, Var):
        return env[t.name]
    return model.funs[(t.name, tuple(_term(a, model, env) for a in t.args))]


def _holds(f: Fol, m: Model, env: dict) -> bool:
    if isinstance(f, FTrue):
        return True
    if isinstance(f, FFalse):
        return False
    if isinstance(f, FAtom):
        return m.preds[(f.name, tuple(_term(a, m, env) for a in f.args))] > 0
    if isinstance(f, FNot):
        return not _holds(f.body, m, env)
    if isinstance(f, FAnd):
        return _holds(f.left, m, env) and _holds(f.right, m, env)
    if isinstance(f, FOr):
        return _holds(f.left, m, env) or _holds(f.right, m, env)
    if isinstance(f, FImplies):
        return not _holds(f.left, m, env) or _holds(f.right, m, env)
    test = all if isinstance(f, FForall) else any
    return test(_holds(f.body, m, {**env, f.var: o}) for o in m.objects)


def fol_free_variables(f: Fol) -> list[str]:
    out: list[str] = []

    def term(t, bound):
        if isinstance(t, Var):
            if t.name not in bound and t.name not in out:
                out.append(t.name)
        else:
            for a in t.args:
                term(a, bound)

    def walk(g, bound):
        if isinstance(g, FAtom):
            for a in g.args:
                term(a, bound)
        elif isinstance(g, FNot):
            walk(g.body, bound)
        elif isinstance(g, (FAnd, FOr, FImplies)):
            walk(g.left, bound)
            walk(g.right, bound)
        elif isinstance(g, (FForall, FExists)):
            walk(g.body, bound | {g.var})

    walk(f, frozenset())
    return out


def sentence_holds(f: Fol, model: Model) -> bool:
    """Truth with free variables read universally."""
    free = fol_free_variables(f)
    return all(_holds(f, model, dict(zip(free, combo)))
               for combo in itertools.product(model.objects, repeat=len(free)))


# --------------------------------------------------------------------------
# translation


def truth_values(mode: str) -> tuple[Fraction, Fraction]:
    """(false, true) values of a translated atom."""
    return (Fraction(-1), Fraction(1)) if _mode(mode) == "A" else (Fraction(0), Fraction(1))


def threshold(mode: str, simplified: bool = False) -> Fraction:
    """Value at or above which a translated sentence counts as satisfied."""
    if _mode(mode) == "A" or simplified:
        return Fraction(0)
    return Fraction(1, 2)


def fop_signature(signature: Signature, mode: str) -> Signature:
    """Signature of the translation: each predicate gets the integer range spanning its truth values."""
    lo, hi = truth_values(mode)
    sig = Signature(dict(), dict(signature.funs))
    for name, d in signature.preds.items():
        sig.pred(name, d.arity, lo, hi, integer=True)
    return sig


def truth_grid(signature: Signature, mode: str) -> dict[str, list[Fraction]]:
    """Predicate value sets that correspond to classical models (for enumeration)."""
    return {name: list(truth_values(mode)) for name in signature.preds}


def _mode(mode: str) -> str:
    m = str(mode).upper()
    if m not in ("A", "B"):
        raise ValueError(f"translation mode must be 'A' or 'B', not {mode!r}")
    return m


def translate_fol(f: Fol, mode: str, simplify: bool = False) -> Formula:
    """Structure-preserving translation; implications are read as ``~P | Q`` first.

    With ``simplify`` in mode B the result is shifted down by 1, linear parts
    are folded, and ``0 ^ X`` conjuncts become ``X``.  That changes the value
    but not which models reach the threshold, which becomes 0 (see
    :func:`threshold`).
    """
    mode = _mode(mode)
    out = _translate(f, mode)
    if not simplify:
        return out
    if mode == "B":
        return _drop_zero_min(_shift(out, Fraction(-1)))
    return _fold(out)


def _translate(f: Fol, mode: str) -> Formula:
    if isinstance(f, FTrue):
        return Scalar(1)
    if isinstance(f, FFalse):
        return Scalar(-1 if mode == "A" else 0)
    if isinstance(f, FAtom):
        return Pred(f.name, f.args)
    if isinstance(f, FNot):
        body = _translate(f.body, mode)
        return Neg(body) if mode == "A" else Sub(Scalar(1), body)
    if isinstance(f, FImplies):
        return _translate(FOr(FNot(f.left), f.right), mode)
    if isinstance(f, FAnd):
        return Min(_translate(f.left, mode), _translate(f.right, mode))
    if isinstance(f, FOr):
        left, right = _translate(f.left, mode), _translate(f.right, mode)
        return Max(left, right) if mode == "A" else Min(Scalar(1), Add(left, right))
    if isinstance(f, FForall):
        return Inf(f.var, _translate(f.body, mode))
    if isinstance(f, FExists):
        return Sup(f.var, _translate(f.body, mode))
    raise TypeError(f"not a FOL formula: {f!r}")


def _linear(f: Formula):
    """``(terms, constant)`` when ``f`` is a linear combination of atoms, else None."""
    if isinstance(f, Scalar):
        return {}, f.value
    if isinstance(f, Pred):
        return {f: Fraction(1)}, Fraction(0)
    if isinstance(f, (Neg, Scale)):
        inner = _linear(f.body)
        if inner is None:
            return None
        c = Fraction(-1) if isinstance(f, Neg) else f.coef
        return {a: c * v for a, v in inner[0].items()}, c * inner[1]
    if isinstance(f, (Add, Sub)):
        left, right = _linear(f.left), _linear(f.right)
        if left is None or right is None:
            return None
        sign = 1 if isinstance(f, Add) else -1
        terms = dict(left[0])
        for a, v in right[0].items():
            terms[a] = terms.get(a, Fraction(0)) + sign * v
        return terms, left[1] + sign * right[1]
    return None


def _build_linear(terms: dict, const: Fraction) -> Formula:
    """Positive literals first, then negative ones, then the constant."""
    pos = [(a, c) for a, c in terms.items() if c > 0]
    neg = [(a, c) for a, c in terms.items() if c < 0]
    out: Formula | None = None
    for a, c in pos + neg:
        mag = abs(c)
        lit = a if mag == 1 else Scale(mag, a)
        if out is None:
            out = lit if c > 0 else (Neg(a) if mag == 1 else Scale(c, a))
        else:
            out = Add(out, lit) if c > 0 else Sub(out, lit)
    if out is None:
        return Scalar(const)
    if const > 0:
        return Add(out, Scalar(const))
    if const < 0:
        return Sub(out, Scalar(-const))
    return out


def _fold(f: Formula) -> Formula:
    lin = _linear(f)
    if lin is not None:
        return _build_linear(*lin)
    if isinstance(f, (Min, Max, Add, Sub)):
        return type(f)(_fold(f.left), _fold(f.right))
    if isinstance(f, (Neg,)):
        return Neg(_fold(f.body))
    if isinstance(f, Scale):
        return Scale(f.coef, _fold(f.body))
    if isinstance(f, (Inf, Sup)):
        return type(f)(f.var, _fold(f.body))
    return f


def _shift(f: Formula, c: Fraction) -> Formula:
    """``f + c`` pushed through min, max and the quantifiers."""
    lin = _linear(f)
    if lin is not None:
        return _build_linear(lin[0], lin[1] + c)
    if isinstance(f, (Min, Max)):
        return type(f)(_shift(f.left, c), _shift(f.right, c))
    if isinstance(f, (Inf, Sup)):
        return type(f)(f.var, _shift(f.body, c))
    return Add(_fold(f), Scalar(c))


def _drop_zero_min(f: Formula) -> Formula:
    if isinstance(f, Inf):
        return Inf(f.var, _drop_zero_min(f.body))
    if isinstance(f, Min):
        if f.left == Scalar(0):
            return _drop_zero_min(f.right)
        if f.right == Scalar(0):
            return _drop_zero_min(f.left)
        return Min(_drop_zero_min(f.left), _drop_zero_min(f.right))
    return f


def translate_problem(problem: FolProblem, mode: str, simplify: bool = False) -> tuple[Formula, Signature]:
    return translate_fol(problem.formula, mode, simplify), fop_signature(problem.signature, mode)


__all__ = [
    "FTrue", "FFalse", "FAtom", "FNot", "FAnd", "FOr", "FImplies", "FForall", "FExists",
    "FolProblem", "parse_fol", "parse_fol_formula", "show_fol", "holds", "sentence_holds",
    "translate_fol", "translate_problem", "fop_signature", "truth_grid", "truth_values",
    "threshold",
]
