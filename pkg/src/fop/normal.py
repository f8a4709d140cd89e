"""Min-normal form, reduced normal form, clause intervals and the epsilon lattice."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import FragmentError
from .syntax import (
    Add, Fn, Formula, Inf, Max, Min, NameSource, Neg, Pred, Scalar, Scale,
    Signature, Sub, SumClause, Superclause, Sup, Var, conjoin, free_variables, ordered_variables,
    rename_bound, substitute, symbols_of,
)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)


@dataclass
class MinNormalSentence:
    """Conjunction of superclauses; free variables are implicitly inf-quantified."""

    superclauses: tuple
    signature: Signature
    skolems: dict = field(default_factory=dict)

    @property
    def free(self) -> list[str]:
        return ordered_variables(self.to_formula())

    def to_formula(self) -> Formula:
        return conjoin(c.to_formula() for c in self.superclauses)


@dataclass
class ReducedSentence:
    """Conjunction of sum-clauses with provenance back to the superclauses.

    ``provenance[k]`` is ``(i, j)`` for the j-th relaxed disjunct of
    superclause i, ``(i, "R")`` for its selector clause, ``(i, None)`` when the
    superclause had a single disjunct, and ``("cut", step)`` for derived clauses.
    """

    clauses: tuple
    signature: Signature
    provenance: tuple = ()
    indicators: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    skolems: dict = field(default_factory=dict)

    def to_formula(self) -> Formula:
        return conjoin(c.to_formula() for c in self.clauses)

    def with_clause(self, clause: SumClause, origin) -> "ReducedSentence":
        return ReducedSentence(self.clauses + (clause,), self.signature,
                               self.provenance + (origin,), self.indicators,
                               self.bounds, self.skolems)

    def text(self) -> str:
        return "\n".join(str(c) for c in self.clauses)


def name_source_for(expr, signature: Signature) -> NameSource:
    """A fresh-name source that avoids every symbol and variable in sight."""
    names = NameSource()
    funs, preds = symbols_of(expr)
    names.avoid |= set(signature.funs) | set(signature.preds) | set(funs) | set(preds)
    names.avoid |= _all_variables(expr)
    return names


def _all_variables(e) -> set[str]:
    out: set[str] = set()

    def walk(x):
        if isinstance(x, Var):
            out.add(x.name)
        elif isinstance(x, (Fn, Pred)):
            for a in x.args:
                walk(a)
        elif isinstance(x, (Neg, Scale)):
            walk(x.body)
        elif isinstance(x, (Add, Sub, Min, Max)):
            walk(x.left)
            walk(x.right)
        elif isinstance(x, (Inf, Sup)):
            out.add(x.var)
            walk(x.body)
        elif isinstance(x, SumClause):
            for lit in x.literals:
                walk(lit.atom)
        elif isinstance(x, (list, tuple)):
            for y in x:
                walk(y)

    walk(e)
    return out


# --------------------------------------------------------------------------
# min-normal form


def push_inward(f: Formula, c: Fraction = Fraction(1)) -> Formula:
    """Move negation and scalar multiples down to the atoms (De Morgan duals)."""
    if isinstance(f, Scalar):
        return Scalar(c * f.value)
    if isinstance(f, Pred):
        return Scale(c, f) if c != 0 else Scalar(0)
    if isinstance(f, Neg):
        return push_inward(f.body, -c)
    if isinstance(f, Scale):
        return push_inward(f.body, c * f.coef)
    if isinstance(f, Add):
        return Add(push_inward(f.left, c), push_inward(f.right, c))
    if isinstance(f, Sub):
        return Add(push_inward(f.left, c), push_inward(f.right, -c))
    if c == 0:
        return Scalar(0)
    if isinstance(f, (Min, Max)):
        keep = isinstance(f, Min) == (c > 0)
        return (Min if keep else Max)(push_inward(f.left, c), push_inward(f.right, c))
    if isinstance(f, (Inf, Sup)):
        keep = isinstance(f, Inf) == (c > 0)
        return (Inf if keep else Sup)(f.var, push_inward(f.body, c))
    raise TypeError(f"not a formula: {f!r}")


def skolemize(f: Formula, enclosing: list[str], names: NameSource, signature: Signature,
              skolems: dict, implicit: frozenset = frozenset()) -> Formula:
    """Replace each sup-quantified variable by a fresh function of the enclosing inf-variables.

    Variables in ``implicit`` (free in the whole sentence) only become
    arguments where they actually occur under the sup.
    """
    def rec(g, enc):
        return skolemize(g, enc, names, signature, skolems, implicit)

    if isinstance(f, (Scalar, Pred, Scale)):
        return f
    if isinstance(f, (Add, Min, Max)):
        return type(f)(rec(f.left, enclosing), rec(f.right, enclosing))
    if isinstance(f, Inf):
        return Inf(f.var, rec(f.body, enclosing + [f.var]))
    if isinstance(f, Sup):
        used = free_variables(f)
        args = [v for v in enclosing if v not in implicit or v in used]
        fname = names.fresh(f.var)
        signature.fun(fname, len(args))
        skolems[fname] = tuple(args)
        body = substitute(f.body, {f.var: Fn(fname, tuple(Var(v) for v in args))})
        return rec(body, enclosing)
    raise TypeError(f"unexpected node after pushing inward: {f!r}")


def _drop_inf(f: Formula) -> Formula:
    if isinstance(f, Inf):
        return _drop_inf(f.body)
    if isinstance(f, (Add, Min, Max)):
        return type(f)(_drop_inf(f.left), _drop_inf(f.right))
    return f


def _dedupe(items):
    return list(dict.fromkeys(items))


def distribute(f: Formula) -> list[list[SumClause]]:
    """Quantifier-free formula to a list (min) of lists (max) of sum-clauses."""
    if isinstance(f, Scalar):
        return [[SumClause.build([], f.value)]]
    if isinstance(f, Scale):
        return [[SumClause.build([(f.body, f.coef)])]]
    if isinstance(f, Pred):
        return [[SumClause.build([(f, 1)])]]
    if isinstance(f, Min):
        return _dedupe_cnf(distribute(f.left) + distribute(f.right))
    if isinstance(f, Max):
        return _dedupe_cnf([a + b for a in distribute(f.left) for b in distribute(f.right)])
    if isinstance(f, Add):
        left, right = distribute(f.left), distribute(f.right)
        return _dedupe_cnf([[x.plus(y) for x in a for y in b] for a in left for b in right])
    raise TypeError(f"unexpected node in distribution: {f!r}")


def _dedupe_cnf(cnf):
    out = [tuple(_dedupe(d)) for d in cnf]
    return [list(d) for d in _dedupe(out)]


def to_min_normal(s: Formula, signature: Signature, names: NameSource | None = None) -> MinNormalSentence:
    """Transform to a conjunction of superclauses with the same value in every model.

    Free variables of ``s`` are treated as implicitly inf-quantified, so they
    become arguments of every Skolem function.
    """
    names = names or name_source_for(s, signature)
    sig = signature.copy()
    skolems: dict = {}
    f = push_inward(s)
    f = rename_bound(f, names)
    free = ordered_variables(s)
    f = skolemize(f, free, names, sig, skolems, frozenset(free))
    f = _drop_inf(f)
    clauses = tuple(Superclause(tuple(d)) for d in distribute(f))
    return MinNormalSentence(clauses, sig, skolems)


# --------------------------------------------------------------------------
# intervals and reduced normal form


def interval_of(clause: SumClause, signature: Signature) -> Interval:
    """Sound range of the clause value over all models."""
    total = Interval(clause.constant, clause.constant)
    for atom, c in clause.terms.items():
        d = signature.preds[atom.name]
        a, b = c * d.lo, c * d.hi
        total = total + Interval(min(a, b), max(a, b))
    return total


def superclause_interval(sc: Superclause, signature: Signature) -> Interval:
    parts = [interval_of(d, signature) for d in sc.disjuncts]
    return Interval(max(p.lo for p in parts), max(p.hi for p in parts))


def sentence_interval(mn: MinNormalSentence) -> Interval:
    parts = [superclause_interval(c, mn.signature) for c in mn.superclauses]
    return Interval(min(p.lo for p in parts), min(p.hi for p in parts))


def to_reduced_normal(mn: MinNormalSentence, names: NameSource | None = None) -> ReducedSentence:
    """Replace each superclause by sum-clauses with 0-1 indicators (sign-preserving)."""
    names = names or name_source_for(mn.to_formula(), mn.signature)
    names.avoid |= set(mn.signature.funs) | set(mn.signature.preds)
    sig = mn.signature.copy()
    clauses, prov, indicators, bounds = [], [], {}, {}
    for i, sc in enumerate(mn.superclauses):
        if len(sc.disjuncts) == 1:
            clauses.append(sc.disjuncts[0])
            prov.append((i, None))
            continue
        args = tuple(Var(v) for v in ordered_variables(sc))
        zs = []
        for j, L in enumerate(sc.disjuncts):
            z = names.fresh("z")
            sig.pred(z, len(args), 0, 1, integer=True)
            zatom = Pred(z, args)
            B = max(Fraction(0), -interval_of(L, mn.signature).lo)
            indicators[(i, j)] = z
            bounds[(i, j)] = B
            zs.append(zatom)
            clauses.append(SumClause.build(list(L.terms.items()) + [(zatom, -B)], L.constant + B))
            prov.append((i, j))
        clauses.append(SumClause.build([(z, 1) for z in zs], Fraction(-1, 2)))
        prov.append((i, "R"))
    return ReducedSentence(tuple(clauses), sig, tuple(prov), indicators, bounds, dict(mn.skolems))


def reduce(s: Formula, signature: Signature, names: NameSource | None = None) -> ReducedSentence:
    names = names or name_source_for(s, signature)
    return to_reduced_normal(to_min_normal(s, signature, names), names)


# --------------------------------------------------------------------------
# epsilon


def epsilon_of(s, signature: Signature) -> Fraction:
    """Positive rational whose integer multiples contain every model value of ``s``.

    Atoms take integer values; a scalar multiple by p/q refines the lattice by
    q, and min/max/sum/quantifiers keep the common refinement.
    """
    if isinstance(s, (SumClause, Superclause)):
        s = s.to_formula()
    _, preds = symbols_of(s)
    real = sorted(p for p in preds if not signature.preds[p].integer)
    if real:
        raise FragmentError(f"real-sorted predicates {real}: no epsilon exists outside the integer fragment")
    return Fraction(1, _denominator(s))


def _denominator(f) -> int:
    if isinstance(f, Scalar):
        return f.value.denominator
    if isinstance(f, Pred):
        return 1
    if isinstance(f, Neg):
        return _denominator(f.body)
    if isinstance(f, Scale):
        return f.coef.denominator * _denominator(f.body)
    if isinstance(f, (Add, Sub, Min, Max)):
        a, b = _denominator(f.left), _denominator(f.right)
        return a * b // math.gcd(a, b)
    if isinstance(f, (Inf, Sup)):
        return _denominator(f.body)
    raise TypeError(f"not a formula: {f!r}")
