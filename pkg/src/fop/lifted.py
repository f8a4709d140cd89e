"""Lifted Gomory cuts, refutation search, entailment, value bounds and proof traces."""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import FopError, FragmentError, NoCut, ParseError, WeakeningError
from .ground import (
    epigraph, atom_variable, build_milp, concrete_value, ground_instance, ground_instances,
    herbrand_count, herbrand_terms, sum_clause_of,
)
from .milp import (
    Decision, check_farkas, derive_cut, frac, is_integral, simplex_solve, to_equality_form,
)
from .normal import (
    ReducedSentence, distribute, epsilon_of, name_source_for, push_inward, reduce, sentence_interval,
    to_min_normal, to_reduced_normal,
)
from .parser import ProblemFile, parse_formula, parse_term
from .semantics import Model, sentence_value
from .syntax import (
    Fn, Formula, Inf, Min, Pred, Scalar, Signature, Sub, SumClause, Term, Var,
    canonical_variables, ordered_variables, show_number, substitute, symbols_of,
)

TRACE_VERSION = 1


# --------------------------------------------------------------------------
# cut requests


@dataclass(frozen=True)
class Pick:
    """One row of a cut request: a clause of the host sentence or an implicit bound clause.

    ``rename`` maps the clause's variables to the names the substitution
    refers to; unmapped variables ``v`` of pick number ``k`` become ``v_k``.
    """

    clause: int | None = None
    implicit: str | None = None
    side: str = "upper"
    rename: tuple = ()

    def to_json(self) -> dict:
        out: dict = {"clause": self.clause} if self.clause is not None else {
            "implicit": self.implicit, "side": self.side}
        if self.rename:
            out["rename"] = dict(self.rename)
        return out

    @classmethod
    def from_json(cls, d: Mapping) -> "Pick":
        rename = tuple(sorted(d.get("rename", {}).items()))
        if "clause" in d:
            return cls(clause=int(d["clause"]), rename=rename)
        return cls(implicit=d["implicit"], side=d.get("side", "upper"), rename=rename)


@dataclass
class CutRequest:
    picks: list
    substitution: dict
    lam: list
    weakening: dict | None = None


@dataclass
class LiftedCut:
    clause: SumClause
    request: CutRequest


def implicit_clause(pred: str, side: str, signature: Signature, variables: Sequence[str] | None = None) -> SumClause:
    """``p(n1, ...) - lo`` (lower side) or ``hi - p(n1, ...)`` (upper side)."""
    d = signature.preds[pred]
    names = list(variables) if variables is not None else [f"n{k + 1}" for k in range(d.arity)]
    atom = Pred(pred, tuple(Var(v) for v in names))
    if side == "lower":
        return SumClause.build([(atom, 1)], -d.lo)
    if side == "upper":
        return SumClause.build([(atom, -1)], d.hi)
    raise ValueError(f"side must be 'lower' or 'upper', not {side!r}")


def pick_clause(s: ReducedSentence, pick: Pick, index: int) -> SumClause:
    if pick.clause is not None:
        if not 0 <= pick.clause < len(s.clauses):
            raise FopError(f"pick refers to clause {pick.clause}, sentence has {len(s.clauses)}")
        base = s.clauses[pick.clause]
    else:
        base = implicit_clause(pick.implicit, pick.side, s.signature)
    given = dict(pick.rename)
    ren = {v: given.get(v, f"{v}_{index}") for v in ordered_variables(base)}
    return substitute(base, {v: Var(n) for v, n in ren.items()})


def lifted_cut(s: ReducedSentence, req: CutRequest) -> LiftedCut:
    """Derive a new sum-clause from the picked clauses.

    The picks are renamed apart, ``req.substitution`` is applied, every
    textually distinct atom becomes one bounded MILP variable, each picked
    clause is scaled to coprime integer form, and the Gomory cut of the row
    combination ``req.lam`` is mapped back to atoms and renamed apart from
    ``s``.  Raises :class:`NoCut` when the combined row is integral.
    """
    clauses = [substitute(pick_clause(s, p, k), dict(req.substitution)).canonical()
               for k, p in enumerate(req.picks)]
    if len(req.lam) > len(clauses) + len({a for c in clauses for a in c.terms}):
        raise FopError("combination has more entries than rows")
    milp, atoms = build_milp(clauses, s.signature, primitive=True)
    t = to_equality_form(milp)
    cut = derive_cut(t, [Fraction(x) for x in req.lam], req.weakening)
    if cut is None:
        raise NoCut("the combined row has an integral right-hand side")
    back = {name: atom for atom, name in atoms.items()}
    clause = sum_clause_of(cut.primitive(), back)
    names = name_source_for(list(s.clauses), s.signature)
    ren = {v: Var(names.fresh(v)) for v in ordered_variables(clause)}
    return LiftedCut(substitute(clause, ren), req)


def _const_names(t: Term, out: set) -> None:
    if isinstance(t, Fn):
        if not t.args:
            out.add(t.name)
        for a in t.args:
            _const_names(a, out)


def _replace_consts(t: Term, table: Mapping[str, Var]) -> Term:
    if isinstance(t, Fn):
        if not t.args and t.name in table:
            return table[t.name]
        return Fn(t.name, tuple(_replace_consts(a, table) for a in t.args))
    return t


def request_from_row(s: ReducedSentence, instances: Sequence, t, atoms: Mapping, lam: Sequence,
                     generalize: bool = True) -> CutRequest:
    """Turn a combination of rows of a ground tableau into a cut request.

    Instance rows become clause picks with their ground substitution, upper
    bound rows become implicit picks.  With ``generalize``, every constant
    that only enters through the substitution is replaced by a fresh
    variable; atoms stay textually distinct, so the cut is the same but holds
    for every value of that variable.
    """
    back = {name: atom for atom, name in atoms.items()}
    picks, sub, out_lam = [], {}, []
    for i, l in enumerate(lam):
        if l == 0:
            continue
        kind, ref = t.origins[i]
        k = len(picks)
        if kind == "constraint":
            clause_idx, sigma = instances[ref]
            picks.append(Pick(clause=clause_idx))
            for v in ordered_variables(s.clauses[clause_idx]):
                sub[f"{v}_{k}"] = sigma[v]
        else:
            atom = back[ref]
            picks.append(Pick(implicit=atom.name, side="upper"))
            for j, a in enumerate(atom.args):
                sub[f"n{j + 1}_{k}"] = a
        out_lam.append(Fraction(l))
    if generalize and sub:
        in_range: set = set()
        for term in sub.values():
            _const_names(term, in_range)
        funs, _ = symbols_of([s.clauses[p.clause] for p in picks if p.clause is not None])
        free = sorted(c for c in in_range if c not in funs)
        if free:
            names = name_source_for(list(s.clauses), s.signature)
            names.avoid |= set(sub)
            table = {c: Var(names.fresh("w")) for c in free}
            sub = {v: _replace_consts(term, table) for v, term in sub.items()}
    return CutRequest(picks, sub, out_lam)


# --------------------------------------------------------------------------
# proof traces


@dataclass
class Terminal:
    grounding: list           # (clause index, substitution)
    farkas: list


@dataclass
class ProofTrace:
    digest: str
    steps: list = field(default_factory=list)     # LiftedCut
    terminal: Terminal | None = None

    def to_json(self) -> dict:
        steps = []
        for st in self.steps:
            r = st.request
            steps.append({
                "picks": [p.to_json() for p in r.picks],
                "substitution": {v: str(term) for v, term in r.substitution.items()},
                "lambda": [show_number(x) for x in r.lam],
                "weakening": {str(k): show_number(v) for k, v in r.weakening.items()} if r.weakening else None,
                "result_clause": str(st.clause),
            })
        terminal = None
        if self.terminal is not None:
            terminal = {
                "grounding": [{"clause": k, "substitution": {v: str(term) for v, term in sub.items()}}
                              for k, sub in self.terminal.grounding],
                "farkas": [show_number(x) for x in self.terminal.farkas],
            }
        return {"version": TRACE_VERSION, "sentence_digest": self.digest, "steps": steps, "terminal": terminal}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: Mapping, signature: Signature) -> "ProofTrace":
        if data.get("version") != TRACE_VERSION:
            raise FopError(f"unsupported trace version {data.get('version')!r}")
        sig = signature.copy()

        def term(text):
            return parse_term(text, sig)

        steps = []
        for st in data["steps"]:
            req = CutRequest(
                [Pick.from_json(p) for p in st["picks"]],
                {v: term(x) for v, x in st["substitution"].items()},
                [Fraction(x) for x in st["lambda"]],
                {int(k): Fraction(v) for k, v in st["weakening"].items()} if st.get("weakening") else None,
            )
            steps.append(LiftedCut(_parse_clause(st["result_clause"], sig), req))
        terminal = None
        if data.get("terminal") is not None:
            tm = data["terminal"]
            grounding = [(int(g["clause"]), {v: term(x) for v, x in g["substitution"].items()})
                         for g in tm["grounding"]]
            terminal = Terminal(grounding, [Fraction(x) for x in tm["farkas"]])
        return cls(data["sentence_digest"], steps, terminal)

    @classmethod
    def loads(cls, text: str, signature: Signature) -> "ProofTrace":
        return cls.from_json(json.loads(text), signature)


def _parse_clause(text: str, signature: Signature) -> SumClause:
    cnf = distribute(push_inward(parse_formula(text, signature)))
    if len(cnf) != 1 or len(cnf[0]) != 1:
        raise ParseError(f"not a sum-clause: {text!r}", 1, 1)
    return cnf[0][0]


def digest(s: ReducedSentence) -> str:
    return hashlib.sha256(s.text().encode()).hexdigest()


def _ground_rows(s: ReducedSentence, instances: Sequence):
    clauses = [ground_instance(s.clauses[k], sub) for k, sub in instances]
    milp, atoms = build_milp(clauses, s.signature, primitive=True)
    return milp, atoms


# --------------------------------------------------------------------------
# refutation


@dataclass
class RefuteResult:
    status: str               # "proved" | "budget_exhausted"
    trace: ProofTrace | None = None
    reason: str = ""
    sentence: ReducedSentence | None = None


def refute(s: ReducedSentence, max_cuts: int = 50, max_depth: int = 4,
           max_instances: int = 3000) -> RefuteResult:
    """Search for lifted cuts that make some grounding of ``s`` LP-infeasible.

    Herbrand depth grows one step whenever the ground LP at the current depth
    has an integral optimum or no fractional tableau row yields a new cut.
    The first LP-infeasible grounding ends the proof; its Farkas multipliers
    are the terminal step of the trace.
    """
    cur = s
    steps: list[LiftedCut] = []
    seen = {_alpha_key(c) for c in s.clauses}
    last_count = None
    for depth in range(max_depth + 1):
        count = herbrand_count(cur, depth)
        if count == last_count:
            return RefuteResult("budget_exhausted", None, "Herbrand universe exhausted", cur)
        last_count = count
        while True:
            inst = ground_instances(cur.clauses, herbrand_terms(cur, depth), max_instances)
            if inst is None:
                return RefuteResult("budget_exhausted", None, "instance limit", cur)
            milp, atoms = _ground_rows(cur, inst)
            t = to_equality_form(milp)
            res = simplex_solve(t, {v.name: -1 for v in milp.variables})
            if res.status == "infeasible":
                return RefuteResult("proved", ProofTrace(digest(s), steps, Terminal(inst, list(res.farkas))),
                                    "", cur)
            if is_integral(milp, res.point):
                break
            if len(steps) >= max_cuts:
                return RefuteResult("budget_exhausted", None, "cut budget", cur)
            lc = _next_cut(cur, inst, t, atoms, res, seen)
            if lc is None:
                break
            steps.append(lc)
            seen.add(_alpha_key(lc.clause))
            cur = cur.with_clause(lc.clause, ("cut", len(steps) - 1))
    return RefuteResult("budget_exhausted", None, "depth limit", cur)


def _alpha_key(c: SumClause) -> str:
    return str(canonical_variables(c.canonical()))


def _next_cut(cur, inst, t, atoms, res, seen):
    rows = sorted((r for r in res.rows if t.integer[r.basic] and frac(r.rhs) != 0),
                  key=lambda r: -frac(r.rhs))
    for r in rows:
        ground = derive_cut(t, r.lam)
        if ground is None or ground.primitive().value(res.point) >= 0:
            continue
        for generalize in (True, False):
            req = request_from_row(cur, inst, t, atoms, r.lam, generalize)
            try:
                lc = lifted_cut(cur, req)
            except (NoCut, WeakeningError):
                continue
            if _alpha_key(lc.clause) not in seen:
                return lc
    return None


# --------------------------------------------------------------------------
# entailment


def close(f: Formula) -> Formula:
    """Bind the free variables of ``f`` with explicit inf-quantifiers."""
    for v in reversed(ordered_variables(f)):
        f = Inf(v, f)
    return f


def refutand(s: Formula, s2: Formula, margin: Fraction) -> Formula:
    """``s ^ (margin - s2)`` with the query's free variables bound first."""
    return Min(s, Sub(Scalar(Fraction(margin)), close(s2)))


def entailment_margin(s: Formula, s2: Formula, signature: Signature) -> Fraction:
    """``-eps/2`` for the lattice step eps of ``s2``; integer fragment only."""
    try:
        epsilon_of(s, signature)
        eps = epsilon_of(s2, signature)
    except FragmentError as exc:
        raise FragmentError(f"{exc}; use epsilon_entails for mixed sentences") from None
    return -eps / 2


@dataclass
class EntailResult:
    status: str               # "proved" | "budget_exhausted"
    trace: ProofTrace | None
    sentence: ReducedSentence
    reason: str = ""


def entails(s: Formula, s2: Formula, signature: Signature, max_cuts: int = 50,
            max_depth: int = 4) -> EntailResult:
    """Prove that every model where ``s >= 0`` also has ``s2 >= 0``."""
    margin = entailment_margin(s, s2, signature)
    return _prove(refutand(s, s2, margin), signature, max_cuts, max_depth)


def epsilon_entails(s: Formula, s2: Formula, eps, signature: Signature, max_cuts: int = 50,
                    max_depth: int = 4) -> EntailResult:
    """Prove that every model where ``s >= 0`` has ``s2 > eps``."""
    return _prove(refutand(s, s2, Fraction(eps)), signature, max_cuts, max_depth)


def _prove(f: Formula, signature: Signature, max_cuts: int, max_depth: int) -> EntailResult:
    rs = reduce(f, signature)
    r = refute(rs, max_cuts, max_depth)
    return EntailResult(r.status, r.trace, rs, r.reason)


# --------------------------------------------------------------------------
# value bounds


def infer_value(s: Formula, signature: Signature, max_depth: int = 3, budget: int = 1000,
                problem: ProblemFile | None = None, max_instances: int = 3000):
    """``(lower, upper)`` bounds on the sentence value.

    Upper bounds are maxima of the epigraph variable over ground
    subproblems; lower bounds are exact values of finite truncated Herbrand
    models built from those optima.  In concrete mode (``problem`` with an
    objects list) both are the exact value.
    """
    if problem is not None and problem.objects:
        v = concrete_value(problem, s, budget)
        return v, v
    epi, sig, name, scale = epigraph(s, signature)
    names = name_source_for(epi, sig)
    mn = to_min_normal(epi, sig, names)
    rs = to_reduced_normal(mn, names)
    upper = sentence_interval(to_min_normal(s, signature.copy())).hi
    lower = None
    wvar = atom_variable(Pred(name))
    last = None
    for depth in range(max_depth + 1):
        count = herbrand_count(rs, depth)
        if count == last:
            break
        last = count
        terms = herbrand_terms(rs, depth)
        inst = ground_instances(rs.clauses, terms, max_instances)
        if inst is None:
            break
        milp, atoms = _ground_rows(rs, inst)
        if wvar not in {v.name for v in milp.variables}:
            break
        dec = milp_max(milp, wvar, budget)
        if dec.status != "feasible":
            continue
        upper = min(upper, dec.objective * scale)
        candidate = _truncated_value(mn, rs.signature, terms, atoms, dec.point, name, scale)
        if candidate is not None and (lower is None or candidate > lower):
            lower = candidate
        if lower is not None and lower >= upper:
            break
    return lower, upper


def milp_max(milp, var: str, budget: int) -> Decision:
    from .milp import milp_decide

    return milp_decide(milp, budget, objective={var: 1})


def _truncated_value(mn, signature: Signature, terms, atoms, point, wname, scale, cap: int = 200_000):
    """Value of the Skolemized sentence in the finite model read off a ground optimum."""
    objects = [str(t) for t in terms]
    inside = {str(t) for t in terms}
    f = mn.to_formula()
    funs, preds = symbols_of(f)
    nvars = len(ordered_variables(f))
    if len(objects) ** max(nvars, 1) > cap:
        return None
    table = {}
    for name, k in funs.items():
        for args in itertools.product(terms, repeat=k):
            image = str(Fn(name, args))
            table[(name, tuple(str(a) for a in args))] = image if image in inside else str(args[0])
    values = {}
    for p, k in preds.items():
        lo = signature.preds[p].lo
        for args in itertools.product(objects, repeat=k):
            values[(p, args)] = lo
    for atom, var in atoms.items():
        key = (atom.name, tuple(str(a) for a in atom.args))
        if key in values:
            values[key] = point[var]
    w = values.get((wname, ()), Fraction(0))
    model = Model(objects, table, values)
    return sentence_value(f, model) + scale * w


# --------------------------------------------------------------------------
# verification


@dataclass
class Verdict:
    valid: bool
    step: int | None = None
    message: str = ""


def verify_trace(s: ReducedSentence, trace: ProofTrace) -> Verdict:
    """Re-derive every cut from its request and check the terminal Farkas combination."""
    if trace.digest != digest(s):
        return Verdict(False, None, "sentence digest does not match")
    cur = s
    for k, st in enumerate(trace.steps):
        try:
            lc = lifted_cut(cur, st.request)
        except (FopError, ValueError, KeyError) as exc:
            return Verdict(False, k, f"step {k} does not re-derive: {exc}")
        if _alpha_key(lc.clause) != _alpha_key(st.clause):
            return Verdict(False, k, f"step {k} derives {lc.clause}, trace records {st.clause}")
        cur = cur.with_clause(lc.clause, ("cut", k))
    n = len(trace.steps)
    if trace.terminal is None:
        return Verdict(False, n, "no terminal contradiction")
    try:
        milp, _ = _ground_rows(cur, trace.terminal.grounding)
    except (FopError, IndexError, KeyError) as exc:
        return Verdict(False, n, f"terminal grounding is malformed: {exc}")
    t = to_equality_form(milp)
    if len(trace.terminal.farkas) != len(t.rows) or not check_farkas(t, trace.terminal.farkas):
        return Verdict(False, n, "terminal multipliers do not give a contradiction")
    return Verdict(True)


def lift_certificate(s: ReducedSentence, instances: Sequence, decision: Decision) -> ProofTrace:
    """Replay a ground cutting-plane refutation as lifted cuts with ground picks.

    Row ``k`` of the tableau at each step is an instance, an earlier cut, or
    a variable's upper bound; each becomes the matching pick.
    """
    if decision.status != "infeasible":
        raise FopError("only infeasible decisions carry a certificate")
    n = len(instances)
    steps = []
    cur = s
    for step in decision.steps:
        picks, sub, lam = [], {}, []
        for i, l in enumerate(step.lam):
            if l == 0:
                continue
            kind, ref = step.origins[i]
            k = len(picks)
            if kind == "constraint" and ref < n:
                clause_idx, sigma = instances[ref]
                picks.append(Pick(clause=clause_idx))
                for v in ordered_variables(s.clauses[clause_idx]):
                    sub[f"{v}_{k}"] = sigma[v]
            elif kind == "constraint":
                picks.append(Pick(clause=len(s.clauses) + ref - n))
            else:
                atom = _atom_of(ref, s.signature)
                picks.append(Pick(implicit=atom.name, side="upper"))
                for j, a in enumerate(atom.args):
                    sub[f"n{j + 1}_{k}"] = a
            lam.append(Fraction(l))
        lc = lifted_cut(cur, CutRequest(picks, sub, lam))
        steps.append(lc)
        cur = cur.with_clause(lc.clause, ("cut", len(steps) - 1))
    grounding = list(instances) + [(len(s.clauses) + j, {}) for j in range(len(decision.steps))]
    return ProofTrace(digest(s), steps, Terminal(grounding, list(decision.farkas)))


def _atom_of(name: str, signature: Signature) -> Pred:
    f = parse_formula(name, signature.copy())
    if not isinstance(f, Pred):
        raise FopError(f"not an atom: {name}")
    return f


__all__ = [
    "Pick", "CutRequest", "LiftedCut", "ProofTrace", "Terminal", "Verdict", "RefuteResult",
    "EntailResult", "implicit_clause", "lifted_cut", "request_from_row", "refute", "entails",
    "epsilon_entails", "infer_value", "verify_trace", "lift_certificate", "refutand",
    "entailment_margin", "close", "digest",
]
