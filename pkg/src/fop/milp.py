"""Exact-rational MILP machinery: equality form, simplex, Gomory cuts and a cutting-plane loop.

Constraints are always read as ``a.x + b >= 0``.  In equality form every
variable is shifted to ``y = x - lo >= 0`` and every constraint (including
one upper-bound row per variable) gets a slack: ``s - a.y = b + a.lo``.
With rows written this way, a Gomory fractional cut from a nonnegative
combination of rows is exactly Chvatal-Gomory rounding of the same
combination of the original inequalities.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, SortError, WeakeningError

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(q: Fraction) -> Fraction:
    return q - math.floor(q)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@dataclass(frozen=True)
class Variable:
    name: str
    integer: bool
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty bounds for {self.name}")


@dataclass(frozen=True)
class Constraint:
    """``sum(coef * x) + const >= 0``; ``coeffs`` is a tuple of (name, coef) pairs."""

    coeffs: tuple
    const: Fraction = ZERO

    @classmethod
    def of(cls, coeffs: Mapping[str, object] | Iterable, const=0) -> "Constraint":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        merged: dict[str, Fraction] = {}
        for name, c in items:
            merged[name] = merged.get(name, ZERO) + Fraction(c)
        return cls(tuple((n, c) for n, c in merged.items() if c != 0), Fraction(const))

    @property
    def coef(self) -> dict[str, Fraction]:
        return dict(self.coeffs)

    def value(self, point: Mapping[str, Fraction]) -> Fraction:
        return sum((c * point[n] for n, c in self.coeffs), self.const)

    def scaled(self, k) -> "Constraint":
        k = Fraction(k)
        return Constraint(tuple((n, c * k) for n, c in self.coeffs), self.const * k)

    def primitive(self) -> "Constraint":
        """Positive rescaling to coprime integer coefficients and constant."""
        nums = [c for _, c in self.coeffs] + [self.const]
        den = 1
        for q in nums:
            den = _lcm(den, q.denominator)
        ints = [int(q * den) for q in nums]
        g = 0
        for v in ints:
            g = math.gcd(g, abs(v))
        if g == 0:
            return self
        return self.scaled(Fraction(den, g))

    def key(self):
        return tuple(sorted(self.coeffs)), self.const

    def __str__(self) -> str:
        from .syntax import show_number

        parts = []
        for n, c in self.coeffs:
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{show_number(abs(c))}*"
            parts.append(f"{sign} {mag}{n}")
        if self.const != 0 or not parts:
            parts.append(f"{'-' if self.const < 0 else '+'} {show_number(abs(self.const))}")
        text = " ".join(parts)
        text = text[2:] if text.startswith("+ ") else "-" + text[2:]
        return f"{text} >= 0"


@dataclass
class MilpProblem:
    variables: list
    constraints: list
    objective: dict | None = None
    labels: list | None = None

    def var(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)

    @property
    def pure_integer(self) -> bool:
        return all(v.integer for v in self.variables)

    def satisfied_by(self, point: Mapping[str, Fraction]) -> bool:
        for v in self.variables:
            x = point[v.name]
            if not v.lo <= x <= v.hi or (v.integer and x.denominator != 1):
                return False
        return all(c.value(point) >= 0 for c in self.constraints)


# --------------------------------------------------------------------------
# equality form


@dataclass
class Tableau:
    """Equality-form system ``rows . v = rhs`` over ``v = (y, s) >= 0``."""

    structural: list          # original variable names, in column order
    shift: dict               # name -> lower bound subtracted from x
    columns: list             # column names: structural then slacks
    integer: list             # integrality per column
    rows: list                # list of lists of Fraction
    rhs: list
    origins: list             # per row: ("constraint", k) or ("upper", name)
    slack_of_row: list        # per row: its slack column index
    defs: list                # per row: (a over structural dict, b) meaning s = a.x + b

    @property
    def n_structural(self) -> int:
        return len(self.structural)


def to_equality_form(p: MilpProblem) -> Tableau:
    names = [v.name for v in p.variables]
    index = {n: j for j, n in enumerate(names)}
    shift = {v.name: v.lo for v in p.variables}
    ints = {v.name: v.integer for v in p.variables}
    ineqs: list[tuple[Constraint, tuple]] = [(c, ("constraint", k)) for k, c in enumerate(p.constraints)]
    for v in p.variables:
        ineqs.append((Constraint(((v.name, -ONE),), v.hi), ("upper", v.name)))
    n, m = len(names), len(ineqs)
    columns = names + [f"s{i}" for i in range(m)]
    integer = [ints[nm] for nm in names]
    rows, rhs, defs = [], [], []
    for i, (c, _) in enumerate(ineqs):
        row = [ZERO] * (n + m)
        for name, a in c.coeffs:
            if name not in index:
                raise KeyError(f"constraint uses unknown variable {name}")
            row[index[name]] -= a
        row[n + i] = ONE
        rows.append(row)
        rhs.append(c.const + sum((a * shift[name] for name, a in c.coeffs), ZERO))
        defs.append((c.coef, c.const))
        integral = (c.const.denominator == 1
                    and all(a.denominator == 1 and ints[name] for name, a in c.coeffs))
        integer.append(integral)
    return Tableau(names, shift, columns, integer, rows, rhs, [o for _, o in ineqs],
                   [n + i for i in range(m)], defs)


# --------------------------------------------------------------------------
# simplex


@dataclass
class TableauRow:
    basic: int
    coeffs: list
    rhs: Fraction
    lam: tuple                # combination of the original rows giving this row


@dataclass
class LPResult:
    status: str               # "optimal" | "infeasible" | "unbounded"
    point: dict = field(default_factory=dict)     # original coordinates x
    values: list = field(default_factory=list)    # per tableau column
    objective: Fraction | None = None
    basis: list = field(default_factory=list)
    rows: list = field(default_factory=list)      # TableauRow per basic variable
    farkas: tuple | None = None                   # multipliers over the original rows


def _pivot(W, T, basis, r, j):
    piv = W[r][j]
    if piv != 1:
        W[r] = [x / piv for x in W[r]]
        T[r] = [x / piv for x in T[r]]
    for i in range(len(W)):
        if i != r:
            f = W[i][j]
            if f != 0:
                Wr, Tr = W[r], T[r]
                W[i] = [a - f * b for a, b in zip(W[i], Wr)]
                T[i] = [a - f * b for a, b in zip(T[i], Tr)]
    basis[r] = j


def _minimize(W, T, basis, cost, allowed) -> str:
    """Bland's-rule primal simplex on the tableau ``W`` (last entry of each row is the rhs)."""
    while True:
        cb = [cost[b] for b in basis]
        entering = None
        for j in allowed:
            if j in basis:
                continue
            d = cost[j] - sum((cb[i] * W[i][j] for i in range(len(W)) if W[i][j] != 0), ZERO)
            if d < 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        best, leave = None, None
        for i, row in enumerate(W):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return "unbounded"
        _pivot(W, T, basis, leave, entering)


def simplex_solve(t: Tableau, objective: Mapping[str, object] | None = None) -> LPResult:
    """Maximize ``objective . x`` over the tableau (phase 1 / phase 2, Bland's rule)."""
    m = len(t.rows)
    ncol = len(t.columns)
    W, T, basis = [], [], []
    for i in range(m):
        row = list(t.rows[i]) + [t.rhs[i]]
        trk = [ONE if k == i else ZERO for k in range(m)]
        if t.rhs[i] < 0:
            row = [-x for x in row]
            trk = [-x for x in trk]
        W.append(row)
        T.append(trk)
    # artificial columns go between the real columns and the rhs
    need = [i for i in range(m) if W[i][t.slack_of_row[i]] != 1]
    for i in range(m):
        for k, r in enumerate(need):
            W[i].insert(ncol + k, ONE if r == i else ZERO)
    for i in range(m):
        if i in need:
            basis.append(ncol + need.index(i))
        else:
            basis.append(t.slack_of_row[i])
    total = ncol + len(need)
    if need:
        cost = [ZERO] * ncol + [ONE] * len(need)
        _minimize(W, T, basis, cost, list(range(total)))
        infeas = sum((W[i][-1] for i in range(m) if basis[i] >= ncol), ZERO)
        if infeas > 0:
            y = [ZERO] * m
            for i in range(m):
                if basis[i] >= ncol:
                    y = [a + b for a, b in zip(y, T[i])]
            yc = sum((a * b for a, b in zip(y, t.rhs)), ZERO)
            lam = tuple(-a / yc for a in y)
            return LPResult("infeasible", farkas=lam)
        # drive remaining (zero-level) artificials out; drop redundant rows
        keep = []
        for i in range(m):
            if basis[i] >= ncol:
                j = next((j for j in range(ncol) if W[i][j] != 0), None)
                if j is None:
                    continue
                _pivot(W, T, basis, i, j)
            keep.append(i)
        W = [W[i][:ncol] + [W[i][-1]] for i in keep]
        T = [T[i] for i in keep]
        basis = [basis[i] for i in keep]
    cost = [ZERO] * ncol
    for name, c in (objective or {}).items():
        cost[t.structural.index(name)] = -Fraction(c)
    status = _minimize(W, T, basis, cost, list(range(ncol)))
    values = [ZERO] * ncol
    for i, b in enumerate(basis):
        values[b] = W[i][-1]
    point = {name: values[j] + t.shift[name] for j, name in enumerate(t.structural)}
    obj = sum((Fraction(c) * point[n] for n, c in (objective or {}).items()), ZERO)
    rows = [TableauRow(basis[i], W[i][:ncol], W[i][-1], tuple(T[i])) for i in range(len(W))]
    return LPResult(status, point, values, obj, list(basis), rows)


def check_farkas(t: Tableau, lam: Sequence[Fraction]) -> bool:
    """``lam >= 0`` on every slack row, ``lam . rows >= 0`` column-wise and ``lam . rhs < 0``."""
    if any(x < 0 for x in lam):
        return False
    for j in range(len(t.columns)):
        if sum((l * r[j] for l, r in zip(lam, t.rows)), ZERO) < 0:
            return False
    return sum((l * b for l, b in zip(lam, t.rhs)), ZERO) < 0


# --------------------------------------------------------------------------
# Gomory cuts


@dataclass(frozen=True)
class CutInequality:
    """``sum(coeffs[j] * v_j) + const >= 0`` over tableau columns."""

    coeffs: tuple             # (column index, coef) pairs
    const: Fraction
    lam: tuple
    kind: str                 # "fractional" | "mixed"


def combine(t: Tableau, lam: Sequence[Fraction]) -> tuple[list[Fraction], Fraction]:
    if len(lam) < len(t.rows):
        lam = list(lam) + [ZERO] * (len(t.rows) - len(lam))
    if len(lam) != len(t.rows):
        raise ValueError(f"combination has {len(lam)} entries for {len(t.rows)} rows")
    coeffs = [ZERO] * len(t.columns)
    beta = ZERO
    for l, row, b in zip(lam, t.rows, t.rhs):
        l = Fraction(l)
        if l == 0:
            continue
        for j, a in enumerate(row):
            if a != 0:
                coeffs[j] += l * a
        beta += l * b
    return coeffs, beta


def gomory_cut(t: Tableau, lam: Sequence, kind: str | None = None) -> CutInequality | None:
    """Gomory cut from the row ``lam . (rows v = rhs)``.

    Pure-integer rows give the fractional cut, rows touching real-sorted
    columns the mixed-integer (GMI) cut.  Returns None when the combined
    right-hand side is integral.
    """
    coeffs, beta = combine(t, lam)
    lam = tuple(Fraction(x) for x in lam)
    f0 = frac(beta)
    support = [j for j, a in enumerate(coeffs) if a != 0]
    mixed = any(not t.integer[j] for j in support)
    if kind == "fractional" and mixed:
        raise SortError("row contains real-sorted variables; only a mixed-integer cut applies")
    if f0 == 0:
        return None
    if not mixed and kind != "mixed":
        cut = tuple((j, frac(coeffs[j])) for j in support if frac(coeffs[j]) != 0)
        return CutInequality(cut, -f0, lam, "fractional")
    out = []
    for j in support:
        a = coeffs[j]
        if t.integer[j]:
            fj = frac(a)
            g = fj / f0 if fj <= f0 else (1 - fj) / (1 - f0)
        else:
            g = a / f0 if a >= 0 else -a / (1 - f0)
        if g != 0:
            out.append((j, g))
    return CutInequality(tuple(out), -ONE, lam, "mixed")


def eliminate_slacks(cut: CutInequality, t: Tableau, weakening: Mapping[int, object] | Sequence | None = None) -> Constraint:
    """Substitute each slack's defining expression, giving a cut over the original variables.

    ``weakening`` adds nonnegative amounts to slack coefficients first; it is
    indexed by row.
    """
    n = t.n_structural
    coef = {j: c for j, c in cut.coeffs}
    if weakening is not None:
        items = weakening.items() if isinstance(weakening, Mapping) else enumerate(weakening)
        for i, w in items:
            w = Fraction(w)
            if w < 0:
                raise WeakeningError("weakening amounts must be nonnegative")
            if w:
                coef[t.slack_of_row[i]] = coef.get(t.slack_of_row[i], ZERO) + w
    x: dict[str, Fraction] = {}
    const = cut.const
    for j, c in sorted(coef.items()):
        if c == 0:
            continue
        if j < n:
            name = t.structural[j]
            x[name] = x.get(name, ZERO) + c
            const -= c * t.shift[name]
            continue
        if c < 0:
            raise WeakeningError(f"slack {t.columns[j]} has negative coefficient {c}; weaken it first")
        row = t.slack_of_row.index(j)
        a, b = t.defs[row]
        for name, ac in a.items():
            x[name] = x.get(name, ZERO) + c * ac
        const += c * b
    order = {name: k for k, name in enumerate(t.structural)}
    return Constraint.of(sorted(x.items(), key=lambda kv: order[kv[0]]), const)


def round_cut(c: Constraint, integer: Mapping[str, bool]) -> Constraint:
    """Chvatal-Gomory strengthening: over integer variables, round the constant down."""
    if not c.coeffs or not all(integer[n] for n, _ in c.coeffs):
        return c
    p = c.primitive()
    if all(a.denominator == 1 for _, a in p.coeffs) and p.const.denominator != 1:
        return Constraint(p.coeffs, Fraction(math.floor(p.const)))
    return p


def derive_cut(t: Tableau, lam: Sequence, weakening=None, kind: str | None = None) -> Constraint | None:
    """Gomory cut, slack elimination and (pure case) rounding in one step."""
    cut = gomory_cut(t, lam, kind)
    if cut is None:
        return None
    out = eliminate_slacks(cut, t, weakening)
    ints = dict(zip(t.structural, t.integer))
    if cut.kind == "fractional":
        out = round_cut(out, ints)
    return out


# --------------------------------------------------------------------------
# cutting-plane decision loop


@dataclass
class CutStep:
    lam: tuple                # over the rows of the tableau the cut came from
    origins: list             # row origins of that tableau
    cut: Constraint
    kind: str
    source: str               # "row" (simplex tableau row) or "search" (enumerated combination)


@dataclass
class Decision:
    status: str               # "feasible" | "infeasible" | "budget_exhausted"
    point: dict | None = None
    steps: list = field(default_factory=list)
    farkas: tuple | None = None
    constraints: list = field(default_factory=list)
    objective: Fraction | None = None

    @property
    def cuts(self) -> list:
        return [s.cut for s in self.steps]


def is_integral(p: MilpProblem, point: Mapping[str, Fraction]) -> bool:
    return all(point[v.name].denominator == 1 for v in p.variables if v.integer)


def _enumerated_combinations(m: int, height: int):
    values = sorted({Fraction(a, b) for b in range(1, height + 1) for a in range(-height, height + 1) if a},
                    key=lambda q: (abs(q.numerator) + q.denominator, q))
    for size in (1, 2):
        for rows in itertools.combinations(range(m), size):
            for mult in itertools.product(values, repeat=size):
                lam = [ZERO] * m
                for r, q in zip(rows, mult):
                    lam[r] = q
                yield lam


def milp_decide(p: MilpProblem, budget: int = 1000, objective: Mapping[str, object] | None = None,
                search_height: int = 3) -> Decision:
    """Decide mixed-integer feasibility (or optimize ``objective``) with Gomory cuts only.

    Each round solves the LP relaxation.  Cuts come first from the fractional
    rows of the optimal tableau, largest fractional part first; if none of
    them separates the vertex, combinations of one or two rows with small
    multipliers are enumerated breadth-first.
    """
    cons = [c.primitive() for c in p.constraints]
    if objective is None:
        objective = p.objective if p.objective is not None else {v.name: -ONE for v in p.variables}
    pure = p.pure_integer
    ints = {v.name: v.integer for v in p.variables}
    steps: list[CutStep] = []
    seen = {c.key() for c in cons}
    while True:
        t = to_equality_form(MilpProblem(p.variables, cons))
        res = simplex_solve(t, objective)
        if res.status == "infeasible":
            return Decision("infeasible", None, steps, res.farkas, cons)
        if res.status == "unbounded":
            raise RuntimeError("bounded problem reported unbounded")
        if is_integral(p, res.point):
            return Decision("feasible", res.point, steps, None, cons, res.objective)
        if len(steps) >= budget:
            return Decision("budget_exhausted", res.point, steps, None, cons)
        fresh = []
        ranked = sorted((r for r in res.rows if t.integer[r.basic] and frac(r.rhs) != 0),
                        key=lambda r: -frac(r.rhs))
        for r in ranked:
            found = _try_cut(t, r.lam, res.point, pure, ints, seen)
            if found is not None:
                fresh.append(CutStep(tuple(r.lam), list(t.origins), found[0], found[1], "row"))
                if len(steps) + len(fresh) >= budget:
                    break
        if not fresh:
            for lam in _enumerated_combinations(len(t.rows), search_height):
                found = _try_cut(t, lam, res.point, pure, ints, seen)
                if found is not None:
                    fresh.append(CutStep(tuple(lam), list(t.origins), found[0], found[1], "search"))
                    break
        if not fresh:
            return Decision("budget_exhausted", res.point, steps, None, cons)
        for st in fresh:
            steps.append(st)
            cons.append(st.cut)


def _try_cut(t, lam, point, pure, ints, seen):
    cut = gomory_cut(t, lam)
    if cut is None:
        return None
    c = eliminate_slacks(cut, t)
    if cut.kind == "fractional":
        c = round_cut(c, ints)
    c = c.primitive()
    if c.value(point) >= 0 or c.key() in seen:
        return None
    seen.add(c.key())
    return c, cut.kind


def replay_steps(p: MilpProblem, steps: Sequence[CutStep]) -> list[Constraint]:
    """Re-derive every recorded cut from its combination; raises on mismatch."""
    cons = [c.primitive() for c in p.constraints]
    for k, st in enumerate(steps):
        t = to_equality_form(MilpProblem(p.variables, cons))
        c = derive_cut(t, st.lam)
        if c is None or c.primitive() != st.cut:
            raise ValueError(f"cut {k} does not re-derive")
        cons.append(st.cut)
    return cons


# --------------------------------------------------------------------------
# LP file format

_SAFE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _decimal(q: Fraction) -> str:
    return format(float(q), ".17g")


def _exact(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _lp_terms(pairs, fmt) -> str:
    out = []
    for name, c in pairs:
        out.append(f"{'-' if c < 0 else '+'} {fmt(abs(c))} {name}")
    return " ".join(out) if out else "0 dummy_zero"


def write_lp(p: MilpProblem) -> str:
    """CPLEX LP text.  Every numeric line is preceded by a comment with exact rationals."""
    alias = {}
    lines = ["\\ exact rationals are given in the '\\ exact' comment before each line"]
    for k, v in enumerate(p.variables):
        alias[v.name] = v.name if _SAFE.match(v.name) and v.name != "dummy_zero" else f"v{k}"
        if alias[v.name] != v.name:
            lines.append(f"\\ var {alias[v.name]} = {v.name}")
    obj = list((p.objective or {}).items())
    lines.append("Maximize")
    obj_pairs = [(alias[n], Fraction(c)) for n, c in obj]
    lines.append(f"\\ exact obj: {_lp_terms(obj_pairs, _exact)}")
    lines.append(f" obj: {_lp_terms(obj_pairs, _decimal)}")
    lines.append("Subject To")
    for k, c in enumerate(p.constraints):
        pairs = [(alias[n], a) for n, a in c.coeffs]
        lines.append(f"\\ exact c{k}: {_lp_terms(pairs, _exact)} >= {_exact(-c.const)}")
        lines.append(f" c{k}: {_lp_terms(pairs, _decimal)} >= {_decimal(-c.const)}")
    lines.append("Bounds")
    for v in p.variables:
        lines.append(f"\\ exact {_exact(v.lo)} <= {alias[v.name]} <= {_exact(v.hi)}")
        lines.append(f" {_decimal(v.lo)} <= {alias[v.name]} <= {_decimal(v.hi)}")
    lines.append(" dummy_zero = 0")
    gens = [alias[v.name] for v in p.variables if v.integer]
    if gens:
        lines.append("General")
        lines.append(" " + " ".join(gens))
    lines.append("End")
    return "\n".join(lines) + "\n"


def _parse_terms(text: str) -> list[tuple[str, Fraction]]:
    out = []
    tokens = text.split()
    i = 0
    sign = 1
    coef = None
    while i < len(tokens):
        tok = tokens[i]
        if tok in "+-":
            sign = -1 if tok == "-" else 1
        elif _SAFE.match(tok):
            c = Fraction(coef if coef is not None else 1) * sign
            if tok != "dummy_zero":
                out.append((tok, c))
            sign, coef = 1, None
        else:
            coef = tok
        i += 1
    return out


def read_lp(text: str) -> MilpProblem:
    """Read LP text produced by :func:`write_lp` (or plain CPLEX LP with the same subset)."""
    names: dict[str, str] = {}
    section = None
    objective, rows, bounds, general = [], [], {}, set()
    pending_exact = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("\\"):
            body = line[1:].strip()
            if body.startswith("var "):
                alias, real = body[4:].split("=", 1)
                names[alias.strip()] = real.strip()
            elif body.startswith("exact "):
                pending_exact = body[6:].strip()
            continue
        low = line.lower()
        if low in ("maximize", "maximise", "max", "minimize", "minimise", "min"):
            section = "obj"
            sense = 1 if low.startswith("max") else -1
            continue
        if low in ("subject to", "such that", "st", "s.t."):
            section = "rows"
            continue
        if low == "bounds":
            section = "bounds"
            continue
        if low in ("general", "generals", "gen", "integer", "integers"):
            section = "general"
            continue
        if low == "end":
            break
        src = pending_exact if pending_exact is not None else line
        pending_exact = None
        try:
            if section == "obj":
                body = src.split(":", 1)[1] if ":" in src else src
                objective = [(n, c * sense) for n, c in _parse_terms(body)]
            elif section == "rows":
                label, body = src.split(":", 1) if ":" in src else (f"c{len(rows)}", src)
                m = re.match(r"(.*?)(>=|<=|=)\s*(\S+)\s*$", body)
                lhs, op, rhs = m.group(1), m.group(2), Fraction(m.group(3))
                terms = _parse_terms(lhs)
                if op in (">=", "="):
                    rows.append(Constraint.of(terms, -rhs))
                if op in ("<=", "="):
                    rows.append(Constraint.of([(n, -c) for n, c in terms], rhs))
            elif section == "bounds":
                parts = src.split("<=")
                if len(parts) == 3:
                    bounds[parts[1].strip()] = (Fraction(parts[0].strip()), Fraction(parts[2].strip()))
                elif "=" in src and parts[0].split("=")[0].strip() == "dummy_zero":
                    pass
                else:
                    raise ValueError("only two-sided bounds lo <= x <= hi are supported")
            elif section == "general":
                general |= set(src.split())
        except (ValueError, AttributeError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot read LP line {line!r}: {exc}", lineno, 1) from None
    variables = [Variable(names.get(a, a), a in general, lo, hi) for a, (lo, hi) in bounds.items()]
    rename = lambda pairs: [(names.get(n, n), c) for n, c in pairs]
    cons = [Constraint.of(rename(c.coeffs), c.const) for c in rows]
    obj = dict(rename(objective)) if objective else None
    return MilpProblem(variables, cons, obj)
