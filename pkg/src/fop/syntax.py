"""Terms, formulas, clauses and the purely syntactic operations on them.

Every value here is an immutable (frozen) dataclass.  Scalars are always
:class:`fractions.Fraction`; nothing in the core uses floating point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import FopError

NIL = "nil"


# --------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Fn:
    """Function application; object constants are zero-argument functions."""

    name: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(str(a) for a in self.args)})"


Term = Union[Var, Fn]


def const(name: str) -> Fn:
    return Fn(name, ())


def term_depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(term_depth(a) for a in t.args)


def term_sort_key(t: Term):
    """Total order on terms: depth first, then structure."""
    if isinstance(t, Var):
        return (0, 0, t.name, ())
    return (1, term_depth(t), t.name, tuple(term_sort_key(a) for a in t.args))


# --------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Scalar:
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Neg:
    body: "Formula"


@dataclass(frozen=True)
class Scale:
    coef: Fraction
    body: "Formula"

    def __post_init__(self):
        if not isinstance(self.coef, Fraction):
            object.__setattr__(self, "coef", Fraction(self.coef))


@dataclass(frozen=True)
class Add:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Sub:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Min:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Max:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Inf:
    """Infimum quantifier (the analogue of forall)."""

    var: str
    body: "Formula"


@dataclass(frozen=True)
class Sup:
    """Supremum quantifier (the analogue of exists)."""

    var: str
    body: "Formula"


Atom = Union[Scalar, Pred]
Formula = Union[Scalar, Pred, Neg, Scale, Add, Sub, Min, Max, Inf, Sup]
BINARY = (Add, Sub, Min, Max)
QUANTIFIERS = (Inf, Sup)


def conjoin(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = Min(out, p)
    return out


def disjoin(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty disjunction")
    out = parts[0]
    for p in parts[1:]:
        out = Max(out, p)
    return out


# --------------------------------------------------------------------------
# clauses


@dataclass(frozen=True)
class Literal:
    coef: Fraction
    atom: Atom

    def __post_init__(self):
        if not isinstance(self.coef, Fraction):
            object.__setattr__(self, "coef", Fraction(self.coef))
        if self.coef == 0 and not isinstance(self.atom, Scalar):
            raise FopError("zero coefficient on a non-scalar literal")


@dataclass(frozen=True)
class SumClause:
    """A sum of literals.  Use :meth:`build` to get the canonical form."""

    literals: tuple

    @classmethod
    def build(cls, terms: Iterable[tuple[Pred, Fraction]], constant=0) -> "SumClause":
        # like atoms are merged, first appearance decides the order
        coefs: dict[Pred, Fraction] = {}
        for atom, c in terms:
            coefs[atom] = coefs.get(atom, Fraction(0)) + Fraction(c)
        lits = [Literal(c, a) for a, c in coefs.items() if c != 0]
        constant = Fraction(constant)
        if constant != 0 or not lits:
            lits.append(Literal(Fraction(1), Scalar(constant)))
        return cls(tuple(lits))

    @property
    def terms(self) -> dict[Pred, Fraction]:
        out: dict[Pred, Fraction] = {}
        for lit in self.literals:
            if isinstance(lit.atom, Pred):
                out[lit.atom] = out.get(lit.atom, Fraction(0)) + lit.coef
        return out

    @property
    def constant(self) -> Fraction:
        return sum((lit.coef * lit.atom.value for lit in self.literals
                    if isinstance(lit.atom, Scalar)), Fraction(0))

    def canonical(self) -> "SumClause":
        return SumClause.build(self.terms.items(), self.constant)

    def plus(self, other: "SumClause") -> "SumClause":
        return SumClause.build(list(self.terms.items()) + list(other.terms.items()),
                               self.constant + other.constant)

    def scaled(self, c) -> "SumClause":
        c = Fraction(c)
        return SumClause.build(((a, c * k) for a, k in self.terms.items()), c * self.constant)

    def to_formula(self) -> Formula:
        out = None
        for lit in self.literals:
            if isinstance(lit.atom, Scalar):
                value = lit.coef * lit.atom.value
                if out is None:
                    out = Scalar(value)
                else:
                    out = Add(out, Scalar(value)) if value >= 0 else Sub(out, Scalar(-value))
                continue
            c = lit.coef
            if out is None:
                out = lit.atom if c == 1 else Neg(lit.atom) if c == -1 else Scale(c, lit.atom)
                continue
            piece = lit.atom if abs(c) == 1 else Scale(abs(c), lit.atom)
            out = Add(out, piece) if c > 0 else Sub(out, piece)
        return out if out is not None else Scalar(0)

    def __str__(self) -> str:
        return show(self.to_formula())


@dataclass(frozen=True)
class Superclause:
    disjuncts: tuple

    def __post_init__(self):
        if not self.disjuncts:
            raise FopError("a superclause needs at least one sum-clause")

    def to_formula(self) -> Formula:
        return disjoin(d.to_formula() for d in self.disjuncts)

    def __str__(self) -> str:
        return show(self.to_formula())


# --------------------------------------------------------------------------
# signatures


@dataclass(frozen=True)
class PredDecl:
    name: str
    arity: int
    lo: Fraction
    hi: Fraction
    integer: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise FopError(f"empty range [{self.lo}, {self.hi}] for predicate {self.name}")
        if self.integer and (self.lo.denominator != 1 or self.hi.denominator != 1):
            raise FopError(f"integer predicate {self.name} needs integer bounds")


@dataclass
class Signature:
    """Declared predicates (with ranges) and functions (with arities)."""

    preds: dict = field(default_factory=dict)
    funs: dict = field(default_factory=lambda: {NIL: 0})

    def copy(self) -> "Signature":
        return Signature(dict(self.preds), dict(self.funs))

    def pred(self, name, arity, lo, hi, integer=True) -> "Signature":
        self.preds[name] = PredDecl(name, arity, Fraction(lo), Fraction(hi), integer)
        return self

    def fun(self, name, arity) -> "Signature":
        self.funs[name] = arity
        return self

    def is_integer_fragment(self, names: Iterable[str] | None = None) -> bool:
        names = self.preds if names is None else names
        return all(self.preds[n].integer for n in names)


# --------------------------------------------------------------------------
# traversal


def free_variables(expr) -> set[str]:
    """Variables with no enclosing quantifier."""
    out: set[str] = set()
    _free(expr, frozenset(), out)
    return out


def _free(e, bound, out):
    if isinstance(e, Var):
        if e.name not in bound:
            out.add(e.name)
    elif isinstance(e, (Fn, Pred)):
        for a in e.args:
            _free(a, bound, out)
    elif isinstance(e, Scalar):
        pass
    elif isinstance(e, (Neg, Scale)):
        _free(e.body, bound, out)
    elif isinstance(e, BINARY):
        _free(e.left, bound, out)
        _free(e.right, bound, out)
    elif isinstance(e, QUANTIFIERS):
        _free(e.body, bound | {e.var}, out)
    elif isinstance(e, Literal):
        _free(e.atom, bound, out)
    elif isinstance(e, SumClause):
        for lit in e.literals:
            _free(lit, bound, out)
    elif isinstance(e, Superclause):
        for d in e.disjuncts:
            _free(d, bound, out)
    else:
        raise TypeError(f"not an expression: {e!r}")


def ordered_variables(expr) -> list[str]:
    """Free variables in order of first (left-to-right) occurrence."""
    seen: list[str] = []
    free = free_variables(expr)

    def walk(e):
        if isinstance(e, Var):
            if e.name in free and e.name not in seen:
                seen.append(e.name)
        elif isinstance(e, (Fn, Pred)):
            for a in e.args:
                walk(a)
        elif isinstance(e, (Neg, Scale)):
            walk(e.body)
        elif isinstance(e, BINARY):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, QUANTIFIERS):
            walk(e.body)
        elif isinstance(e, Literal):
            walk(e.atom)
        elif isinstance(e, SumClause):
            for lit in e.literals:
                walk(lit)
        elif isinstance(e, Superclause):
            for d in e.disjuncts:
                walk(d)

    walk(expr)
    return seen


def atoms_of(expr) -> list[Pred]:
    """Predicate applications in order of first appearance (no duplicates)."""
    out: dict[Pred, None] = {}

    def walk(e):
        if isinstance(e, Pred):
            out.setdefault(e)
        elif isinstance(e, (Neg, Scale)):
            walk(e.body)
        elif isinstance(e, BINARY):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, QUANTIFIERS):
            walk(e.body)
        elif isinstance(e, Literal):
            walk(e.atom)
        elif isinstance(e, SumClause):
            for lit in e.literals:
                walk(lit)
        elif isinstance(e, Superclause):
            for d in e.disjuncts:
                walk(d)

    walk(expr)
    return list(out)


def symbols_of(expr) -> tuple[dict[str, int], dict[str, int]]:
    """(functions, predicates) used in ``expr``, each mapped to its arity."""
    funs: dict[str, int] = {}
    preds: dict[str, int] = {}

    def term(t):
        if isinstance(t, Fn):
            funs.setdefault(t.name, len(t.args))
            for a in t.args:
                term(a)

    def walk(e):
        if isinstance(e, Pred):
            preds.setdefault(e.name, len(e.args))
            for a in e.args:
                term(a)
        elif isinstance(e, (Var, Fn)):
            term(e)
        elif isinstance(e, (Neg, Scale)):
            walk(e.body)
        elif isinstance(e, BINARY):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, QUANTIFIERS):
            walk(e.body)
        elif isinstance(e, Literal):
            walk(e.atom)
        elif isinstance(e, SumClause):
            for lit in e.literals:
                walk(lit)
        elif isinstance(e, Superclause):
            for d in e.disjuncts:
                walk(d)
        elif isinstance(e, (list, tuple)):
            for x in e:
                walk(x)

    walk(expr)
    return funs, preds


def scalars_of(expr) -> list[Fraction]:
    out: list[Fraction] = []

    def walk(e):
        if isinstance(e, Scalar):
            out.append(e.value)
        elif isinstance(e, Neg):
            walk(e.body)
        elif isinstance(e, Scale):
            out.append(e.coef)
            walk(e.body)
        elif isinstance(e, BINARY):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, QUANTIFIERS):
            walk(e.body)

    walk(expr)
    return out


# --------------------------------------------------------------------------
# substitution


def check_substitution(v: Mapping[str, Term]) -> None:
    lhs = set(v)
    for t in v.values():
        clash = free_variables(t) & lhs
        if clash:
            raise FopError(f"substitution maps onto its own domain: {sorted(clash)}")


def substitute(expr, v: Mapping[str, Term]):
    """Replace free occurrences of variables in ``v``'s domain.

    Purely syntactic: bound occurrences are left alone and no renaming is
    done to avoid capture.
    """
    if not v:
        return expr
    if isinstance(expr, Var):
        return v.get(expr.name, expr)
    if isinstance(expr, Fn):
        return Fn(expr.name, tuple(substitute(a, v) for a in expr.args)) if expr.args else expr
    if isinstance(expr, Pred):
        return Pred(expr.name, tuple(substitute(a, v) for a in expr.args)) if expr.args else expr
    if isinstance(expr, Scalar):
        return expr
    if isinstance(expr, Neg):
        return Neg(substitute(expr.body, v))
    if isinstance(expr, Scale):
        return Scale(expr.coef, substitute(expr.body, v))
    if isinstance(expr, BINARY):
        return type(expr)(substitute(expr.left, v), substitute(expr.right, v))
    if isinstance(expr, QUANTIFIERS):
        inner = {k: t for k, t in v.items() if k != expr.var}
        return type(expr)(expr.var, substitute(expr.body, inner))
    if isinstance(expr, Literal):
        return Literal(expr.coef, substitute(expr.atom, v))
    if isinstance(expr, SumClause):
        return SumClause(tuple(substitute(lit, v) for lit in expr.literals))
    if isinstance(expr, Superclause):
        return Superclause(tuple(substitute(d, v) for d in expr.disjuncts))
    raise TypeError(f"not an expression: {expr!r}")


def compose(v: Mapping[str, Term], w: Mapping[str, Term]) -> dict[str, Term]:
    """``V/W`` such that ``substitute(s, compose(v, w)) == substitute(substitute(s, v), w)``."""
    out = {k: substitute(t, w) for k, t in v.items()}
    for k, t in w.items():
        out.setdefault(k, t)
    return out


# --------------------------------------------------------------------------
# fresh names


_SUFFIX = re.compile(r"\d+$")


@dataclass
class NameSource:
    """Monotone counter for fresh names: base name plus numeric suffix."""

    counter: int = 0
    avoid: set = field(default_factory=set)

    def fresh(self, base: str) -> str:
        base = _SUFFIX.sub("", base) or "v"
        while True:
            self.counter += 1
            name = f"{base}{self.counter}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


def rename_bound(expr: Formula, names: NameSource) -> Formula:
    """Give every binding site in ``expr`` a fresh variable name."""
    if isinstance(expr, (Scalar, Pred)):
        return expr
    if isinstance(expr, Neg):
        return Neg(rename_bound(expr.body, names))
    if isinstance(expr, Scale):
        return Scale(expr.coef, rename_bound(expr.body, names))
    if isinstance(expr, BINARY):
        return type(expr)(rename_bound(expr.left, names), rename_bound(expr.right, names))
    if isinstance(expr, QUANTIFIERS):
        new = names.fresh(expr.var)
        body = substitute(expr.body, {expr.var: Var(new)})
        return type(expr)(new, rename_bound(body, names))
    raise TypeError(f"not a formula: {expr!r}")


def standardize_apart(exprs: list, names: NameSource, free: bool = False):
    """Rename so that no two binding sites share a name.

    With ``free=True`` the free variables of each expression are also renamed,
    so distinct outputs share no variables at all.  Returns the renamed list
    and, per expression, the renaming applied to its free variables.
    """
    for e in exprs:
        names.avoid |= free_variables(e)
    out, renamings = [], []
    for e in exprs:
        ren: dict[str, str] = {}
        if free:
            for v in ordered_variables(e):
                ren[v] = names.fresh(v)
            e = substitute(e, {k: Var(n) for k, n in ren.items()})
        if not isinstance(e, (SumClause, Superclause, Literal)):
            e = rename_bound(e, names)
        out.append(e)
        renamings.append(ren)
    return out, renamings


def canonical_variables(expr):
    """Rename free variables to ``_0, _1, ...`` by first occurrence (alpha-normal form)."""
    order = ordered_variables(expr)
    return substitute(expr, {v: Var(f"_{i}") for i, v in enumerate(order)})


# --------------------------------------------------------------------------
# printing

_Q_PREC, _MAX_PREC, _MIN_PREC, _ADD_PREC, _UNARY_PREC, _ATOM_PREC = range(6)

_ASCII = {"min": " ^ ", "max": " v ", "inf": "!", "sup": "?"}
_UNICODE = {"min": " ∧ ", "max": " ∨ ", "inf": "⋀", "sup": "⋁"}


def show_number(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def show(expr, unicode: bool = False) -> str:
    """Print with the standard precedence; the ASCII output re-parses to the same tree."""
    if isinstance(expr, (SumClause, Superclause)):
        expr = expr.to_formula()
    if isinstance(expr, (Var, Fn)):
        return str(expr)
    return _show(expr, _Q_PREC, _UNICODE if unicode else _ASCII)


def _wrap(text: str, prec: int, need: int) -> str:
    return f"({text})" if prec < need else text


def _show(e, need, ops) -> str:
    if isinstance(e, Scalar):
        return show_number(e.value)
    if isinstance(e, Pred):
        return f"{e.name}({', '.join(str(a) for a in e.args)})"
    if isinstance(e, Neg):
        inner = _show(e.body, _UNARY_PREC, ops)
        if inner[0].isdigit() or inner[0] == "-":
            inner = f"({inner})"
        return _wrap("-" + inner, _UNARY_PREC, need)
    if isinstance(e, Scale):
        return _wrap(f"{show_number(e.coef)}*{_show(e.body, _UNARY_PREC, ops)}", _UNARY_PREC, need)
    if isinstance(e, (Add, Sub)):
        sym = " + " if isinstance(e, Add) else " - "
        text = _show(e.left, _ADD_PREC, ops) + sym + _show(e.right, _ADD_PREC + 1, ops)
        return _wrap(text, _ADD_PREC, need)
    if isinstance(e, Min):
        text = _show(e.left, _MIN_PREC, ops) + ops["min"] + _show(e.right, _MIN_PREC + 1, ops)
        return _wrap(text, _MIN_PREC, need)
    if isinstance(e, Max):
        text = _show(e.left, _MAX_PREC, ops) + ops["max"] + _show(e.right, _MAX_PREC + 1, ops)
        return _wrap(text, _MAX_PREC, need)
    if isinstance(e, QUANTIFIERS):
        q = ops["inf"] if isinstance(e, Inf) else ops["sup"]
        text = f"{q}{e.var}. {_show(e.body, _Q_PREC, ops)}"
        # a quantifier body extends to the right, so it is wrapped whenever nested
        return text if need == _Q_PREC else f"({text})"
    raise TypeError(f"not a formula: {e!r}")
