"""Herbrand grounding, ground subproblems, the naive refutation loop and concrete (domain-closed) mode."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import FopError, ModelError
from .milp import Constraint, Decision, MilpProblem, Variable, milp_decide
from .normal import (
    ReducedSentence, epsilon_of, interval_of, name_source_for, reduce, to_min_normal,
    to_reduced_normal,
)
from .parser import ProblemFile
from .syntax import (
    NIL, Add, Fn, Formula, Inf, Max, Min, Neg, Pred, Scalar, Scale, Signature, Sub,
    SumClause, Sup, Var, ordered_variables, show, substitute, symbols_of,
    term_sort_key,
)


# --------------------------------------------------------------------------
# Herbrand universe


def _symbols(source) -> dict[str, int]:
    if isinstance(source, ReducedSentence):
        funs, _ = symbols_of(list(source.clauses))
        return funs
    if isinstance(source, Mapping):
        return dict(source)
    funs, _ = symbols_of(source)
    return funs


def herbrand_terms(source, depth: int) -> list[Fn]:
    """Ground terms of depth <= ``depth`` over the constants and functions of ``source``.

    ``nil`` is added exactly when there are no constants.  Terms come in
    nondecreasing depth, ties broken structurally.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    funs = _symbols(source)
    consts = sorted(n for n, k in funs.items() if k == 0)
    if not consts:
        consts = [NIL]
    functions = sorted((n, k) for n, k in funs.items() if k > 0)
    levels = [[Fn(c) for c in consts]]
    seen = set(levels[0])
    for _ in range(depth):
        pool = [t for lvl in levels for t in lvl]
        new = []
        for name, k in functions:
            for args in itertools.product(pool, repeat=k):
                t = Fn(name, args)
                if t not in seen:
                    seen.add(t)
                    new.append(t)
        levels.append(sorted(new, key=term_sort_key))
    return [t for lvl in levels for t in lvl]


def herbrand_count(source, depth: int) -> int:
    """Number of ground terms of depth <= ``depth``: N(0) = #constants, N(d) = #constants + sum N(d-1)^arity."""
    funs = _symbols(source)
    consts = sum(1 for k in funs.values() if k == 0) or 1
    n = consts
    for _ in range(depth):
        n = consts + sum(n ** k for k in funs.values() if k > 0)
    return n


# --------------------------------------------------------------------------
# ground subproblems


@dataclass
class GroundProblem:
    instances: list           # (clause index, substitution dict)
    clauses: list             # the ground SumClauses, one per instance
    atoms: dict               # ground atom -> MILP variable name
    milp: MilpProblem


def atom_variable(atom: Pred) -> str:
    return show(atom)


def atom_bounds(atom: Pred, signature: Signature) -> Variable:
    d = signature.preds[atom.name]
    return Variable(atom_variable(atom), d.integer, d.lo, d.hi)


def clause_constraint(clause: SumClause) -> Constraint:
    return Constraint.of([(atom_variable(a), c) for a, c in clause.terms.items()], clause.constant)


def sum_clause_of(c: Constraint, atoms: Mapping[str, Pred]) -> SumClause:
    return SumClause.build([(atoms[n], k) for n, k in c.coeffs], c.const)


def build_milp(clauses: Sequence[SumClause], signature: Signature, primitive: bool = False) -> tuple[MilpProblem, dict]:
    """One variable per textually distinct atom (first appearance order), one row per clause."""
    atoms: dict[Pred, str] = {}
    for c in clauses:
        for a in c.terms:
            if a not in atoms:
                atoms[a] = atom_variable(a)
    variables = [atom_bounds(a, signature) for a in atoms]
    cons = [clause_constraint(c) for c in clauses]
    if primitive:
        cons = [c.primitive() for c in cons]
    return MilpProblem(variables, cons), atoms


def ground_instance(clause: SumClause, sub: Mapping) -> SumClause:
    g = substitute(clause, dict(sub)).canonical()
    left = ordered_variables(g)
    if left:
        raise FopError(f"instance is not ground: variables {left} remain")
    return g


def ground_subproblem(s: ReducedSentence, instances: Iterable[tuple[int, Mapping]]) -> GroundProblem:
    instances = [(k, dict(sub)) for k, sub in instances]
    clauses = [ground_instance(s.clauses[k], sub) for k, sub in instances]
    milp, atoms = build_milp(clauses, s.signature)
    return GroundProblem(instances, clauses, atoms, milp)


def ground_instances(clauses: Sequence[SumClause], terms: Sequence[Fn], limit: int | None = None):
    """Every (clause index, substitution) over ``terms``, clause by clause.

    Returns None when the count would exceed ``limit``.
    """
    total = sum(len(terms) ** len(ordered_variables(c)) for c in clauses)
    if limit is not None and total > limit:
        return None
    out = []
    for k, c in enumerate(clauses):
        vs = ordered_variables(c)
        for combo in itertools.product(terms, repeat=len(vs)):
            out.append((k, dict(zip(vs, combo))))
    return out


# --------------------------------------------------------------------------
# naive inference


@dataclass
class NaiveResult:
    status: str               # "infeasible" | "budget_exhausted"
    problem: GroundProblem | None = None
    decision: Decision | None = None
    depth: int | None = None
    subproblems: int = 0
    reason: str = ""


def _decide(args):
    milp, budget = args
    return milp_decide(milp, budget)


def naive_infer(s: ReducedSentence, max_depth: int = 4, max_subproblems: int = 1000,
                cut_budget: int = 1000, max_instances: int = 5000, minimize: bool = True,
                jobs: int = 1) -> NaiveResult:
    """Refute ``s`` by deciding growing ground subproblems.

    Depth d takes every instance over Herbrand terms of depth <= d; the first
    infeasible one is shrunk to an inclusion-minimal infeasible subset and
    reported with its cut trace.  Never reports feasibility: a feasible
    subproblem says nothing about the full sentence.  With ``jobs > 1``
    several depths are decided at once and the shallowest infeasible one wins.
    """
    depths, last = [], None
    for d in range(max_depth + 1):
        n = herbrand_count(s, d)
        if n == last:
            break
        depths.append(d)
        last = n
    saturated = len(depths) <= max_depth
    used = 0
    step = max(1, jobs)
    for start in range(0, len(depths), step):
        batch = []
        for d in depths[start:start + step]:
            inst = ground_instances(s.clauses, herbrand_terms(s, d), max_instances)
            if inst is None or used + len(batch) >= max_subproblems:
                break
            batch.append((d, inst))
        if not batch:
            reason = "instance limit" if used < max_subproblems else "subproblem limit"
            return NaiveResult("budget_exhausted", subproblems=used, reason=reason)
        problems = [ground_subproblem(s, inst) for _, inst in batch]
        if jobs > 1 and len(problems) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                decisions = list(pool.map(_decide, [(g.milp, cut_budget) for g in problems]))
        else:
            decisions = [milp_decide(g.milp, cut_budget) for g in problems]
        used += len(problems)
        for (d, inst), g, dec in zip(batch, problems, decisions):
            if dec.status == "infeasible":
                if minimize:
                    inst = _deletion_filter(s, inst, cut_budget)
                    g = ground_subproblem(s, inst)
                    dec = milp_decide(g.milp, cut_budget)
                return NaiveResult("infeasible", g, dec, d, used)
        if len(batch) < len(depths[start:start + step]):
            return NaiveResult("budget_exhausted", subproblems=used, reason="instance or subproblem limit")
    reason = "Herbrand universe exhausted" if saturated else "depth limit"
    return NaiveResult("budget_exhausted", subproblems=used, reason=reason)


def _deletion_filter(s: ReducedSentence, inst: list, cut_budget: int) -> list:
    keep = list(inst)
    i = 0
    while i < len(keep):
        trial = keep[:i] + keep[i + 1:]
        if milp_decide(ground_subproblem(s, trial).milp, cut_budget).status == "infeasible":
            keep = trial
        else:
            i += 1
    return keep


# --------------------------------------------------------------------------
# concrete mode


def _concrete_term(t, objects: set, functions: Mapping, env: Mapping):
    if isinstance(t, Var):
        if t.name not in env:
            raise FopError(f"unbound variable {t.name}")
        return Fn(env[t.name])
    args = tuple(_concrete_term(a, objects, functions, env) for a in t.args)
    key = (t.name, tuple(a.name for a in args))
    if key in functions:
        return Fn(functions[key])
    if not args and t.name in objects:
        return Fn(t.name)
    raise ModelError(f"function table has no entry for {t.name}{key[1] if args else ''}")


def expand(f: Formula, objects: Sequence[str], functions: Mapping, env: Mapping | None = None) -> Formula:
    """Replace quantifiers by finite min/max over ``objects`` and evaluate known functions."""
    env = dict(env or {})
    objs = set(objects)
    if isinstance(f, Scalar):
        return f
    if isinstance(f, Pred):
        return Pred(f.name, tuple(_concrete_term(a, objs, functions, env) for a in f.args))
    if isinstance(f, Neg):
        return Neg(expand(f.body, objects, functions, env))
    if isinstance(f, Scale):
        return Scale(f.coef, expand(f.body, objects, functions, env))
    if isinstance(f, (Add, Sub, Min, Max)):
        return type(f)(expand(f.left, objects, functions, env), expand(f.right, objects, functions, env))
    if isinstance(f, (Inf, Sup)):
        parts = [expand(f.body, objects, functions, {**env, f.var: o}) for o in objects]
        join = Min if isinstance(f, Inf) else Max
        out = parts[0]
        for p in parts[1:]:
            out = join(out, p)
        return out
    raise TypeError(f"not a formula: {f!r}")


def close_sentence(f: Formula, problem: ProblemFile) -> Formula:
    """Expand the sentence over the declared objects; free variables are read as inf."""
    if not problem.objects:
        raise FopError("concrete mode needs an 'objects' directive")
    for v in reversed(ordered_variables(f)):
        f = Inf(v, f)
    return expand(f, problem.objects, problem.functions)


def concrete_reduced(f: Formula, problem: ProblemFile) -> ReducedSentence:
    g = close_sentence(f, problem)
    sig = problem.signature.copy()
    names = name_source_for(g, sig)
    return to_reduced_normal(to_min_normal(g, sig, names), names)


def concrete_ground(problem: ProblemFile, sentence: Formula | None = None) -> MilpProblem:
    """A MILP that is feasible exactly when the closed sentence can reach value >= 0."""
    f = sentence if sentence is not None else problem.sentence
    rs = concrete_reduced(f, problem)
    milp, _ = build_milp(list(rs.clauses), rs.signature)
    return milp


def epigraph(f: Formula, signature: Signature, name: str = "z"):
    """``f - eps*w`` with an integer 0-ary w (integer fragment) or ``f - z`` with real z."""
    sig = signature.copy()
    mn = to_min_normal(f, sig)
    lo = min(interval_of(d, mn.signature).lo for sc in mn.superclauses for d in sc.disjuncts)
    hi = max(interval_of(d, mn.signature).hi for sc in mn.superclauses for d in sc.disjuncts)
    taken = set(sig.preds) | set(sig.funs)
    while name in taken:
        name += "_"
    try:
        eps = epsilon_of(f, signature)
    except FopError:
        eps = None
    if eps is not None:
        sig.pred(name, 0, math.floor(lo / eps), math.ceil(hi / eps), integer=True)
        return Sub(f, Scale(eps, Pred(name))), sig, name, eps
    sig.pred(name, 0, lo, hi, integer=False)
    return Sub(f, Pred(name)), sig, name, Fraction(1)


def concrete_value(problem: ProblemFile, sentence: Formula | None = None, budget: int = 1000) -> Fraction:
    """Exact maximum of the closed sentence over all predicate tables."""
    f = sentence if sentence is not None else problem.sentence
    g = close_sentence(f, problem)
    epi, sig, name, scale = epigraph(g, problem.signature)
    rs = reduce(epi, sig)
    milp, _ = build_milp(list(rs.clauses), rs.signature)
    var = atom_variable(Pred(name))
    if var not in {v.name for v in milp.variables}:
        milp.variables.append(atom_bounds(Pred(name), rs.signature))
    dec = milp_decide(milp, budget, objective={var: 1})
    if dec.status != "feasible":
        raise FopError(f"epigraph problem ended with status {dec.status}")
    return dec.point[var] * scale


__all__ = [
    "herbrand_terms", "herbrand_count", "GroundProblem", "ground_subproblem", "ground_instance",
    "ground_instances", "build_milp", "naive_infer", "NaiveResult", "concrete_ground",
    "concrete_value", "concrete_reduced", "close_sentence", "expand", "atom_variable",
    "sum_clause_of", "clause_constraint", "epigraph",
]
