"""Compositional evaluation over finite models and the brute-force value oracle."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping

from .errors import CapExceeded, ModelError, ParseError
from .syntax import (
    Add, Fn, Inf, Literal, Max, Min, Neg, Pred, Scalar, Scale, Signature,
    Sub, SumClause, Superclause, Sup, Var, ordered_variables,
    show_number, symbols_of,
)

DEFAULT_CAP = 200_000


@dataclass
class Model:
    """Finite model: objects, function table and predicate table."""

    objects: list
    funs: dict = field(default_factory=dict)
    preds: dict = field(default_factory=dict)

    def check(self, signature: Signature, formula=None) -> None:
        """Raise :class:`ModelError` unless the tables are total and in range.

        With ``formula`` given, only the symbols it uses are checked.
        """
        if formula is not None:
            funs, preds = symbols_of(formula)
        else:
            funs, preds = signature.funs, {n: d.arity for n, d in signature.preds.items()}
        objs = set(self.objects)
        for f, k in funs.items():
            for args in itertools.product(self.objects, repeat=k):
                v = self.funs.get((f, args))
                if v is None or v not in objs:
                    raise ModelError(f"function table has no object for {f}{args}")
        for p, k in preds.items():
            decl = signature.preds[p]
            for args in itertools.product(self.objects, repeat=k):
                v = self.preds.get((p, args))
                if v is None:
                    raise ModelError(f"predicate table missing {p}{args}")
                if not decl.lo <= v <= decl.hi or (decl.integer and v.denominator != 1):
                    raise ModelError(f"{p}{args} = {v} outside its range")


def evaluate(expr, model: Model, valuation: Mapping[str, object] | None = None):
    """Value of ``expr`` (a number, or an object for terms) under ``model``."""
    return compile_expr(expr)(model, dict(valuation or {}))


def sentence_value(expr, model: Model) -> Fraction:
    """Value with free variables read as implicitly inf-quantified."""
    fn = compile_expr(expr)
    free = ordered_variables(expr)
    return _min_over(fn, free, model)


def _min_over(fn, free, model) -> Fraction:
    if not free:
        return fn(model, {})
    best = None
    for combo in itertools.product(model.objects, repeat=len(free)):
        v = fn(model, dict(zip(free, combo)))
        if best is None or v < best:
            best = v
    return best


# --------------------------------------------------------------------------
# compilation to closures (evaluation is the hot loop of every oracle)

Evaluator = Callable[[Model, dict], object]


def compile_expr(e) -> Evaluator:
    if isinstance(e, Var):
        name = e.name

        def var(m, env):
            try:
                return env[name]
            except KeyError:
                raise ModelError(f"unbound variable {name}") from None
        return var
    if isinstance(e, Fn):
        fname = e.name
        args = [compile_expr(a) for a in e.args]

        def fun(m, env):
            key = (fname, tuple(a(m, env) for a in args))
            try:
                return m.funs[key]
            except KeyError:
                raise ModelError(f"function table has no entry for {fname}{key[1]}") from None
        return fun
    if isinstance(e, Pred):
        pname = e.name
        args = [compile_expr(a) for a in e.args]

        def pred(m, env):
            key = (pname, tuple(a(m, env) for a in args))
            try:
                return m.preds[key]
            except KeyError:
                raise ModelError(f"predicate table has no entry for {pname}{key[1]}") from None
        return pred
    if isinstance(e, Scalar):
        value = e.value
        return lambda m, env: value
    if isinstance(e, Neg):
        body = compile_expr(e.body)
        return lambda m, env: -body(m, env)
    if isinstance(e, Scale):
        c, body = e.coef, compile_expr(e.body)
        return lambda m, env: c * body(m, env)
    if isinstance(e, (Add, Sub, Min, Max)):
        left, right = compile_expr(e.left), compile_expr(e.right)
        if isinstance(e, Add):
            return lambda m, env: left(m, env) + right(m, env)
        if isinstance(e, Sub):
            return lambda m, env: left(m, env) - right(m, env)
        if isinstance(e, Min):
            return lambda m, env: min(left(m, env), right(m, env))
        return lambda m, env: max(left(m, env), right(m, env))
    if isinstance(e, (Inf, Sup)):
        var_name, body = e.var, compile_expr(e.body)
        pick = min if isinstance(e, Inf) else max

        def quant(m, env):
            inner = dict(env)
            vals = []
            for o in m.objects:
                inner[var_name] = o
                vals.append(body(m, inner))
            return pick(vals)
        return quant
    if isinstance(e, (SumClause, Superclause, Literal)):
        if isinstance(e, Literal):
            return compile_expr(Scale(e.coef, e.atom))
        return compile_expr(e.to_formula())
    raise TypeError(f"cannot evaluate {e!r}")


# --------------------------------------------------------------------------
# exhaustive model enumeration


def default_grid(signature: Signature, pred: str) -> list[Fraction]:
    d = signature.preds[pred]
    if d.integer:
        return [Fraction(k) for k in range(int(d.lo), int(d.hi) + 1)]
    return sorted({d.lo, (d.lo + d.hi) / 2, d.hi})


def count_models(expr, signature: Signature, n: int, grid=None, functions=None) -> int:
    funs, preds = symbols_of(expr)
    fixed = {name for name, _ in (functions or {})}
    total = 1
    for f, k in funs.items():
        if f not in fixed:
            total *= n ** (n ** k)
    for p, k in preds.items():
        g = (grid or {}).get(p) or default_grid(signature, p)
        total *= len(g) ** (n ** k)
    return total


def enumerate_models(expr, signature: Signature, n: int, grid=None, functions=None,
                     objects=None, cap: int = DEFAULT_CAP) -> Iterator[Model]:
    """Every model over ``n`` objects for the symbols ``expr`` uses.

    ``functions`` fixes function-table entries (known functions); ``grid``
    maps predicate names to the value set enumerated for them.
    """
    objects = list(objects) if objects is not None else [f"o{k}" for k in range(n)]
    n = len(objects)
    total = count_models(expr, signature, n, grid, functions)
    if total > cap:
        raise CapExceeded(f"{total} models exceeds the cap of {cap}")
    funs, preds = symbols_of(expr)
    fixed = dict(functions or {})
    fixed_names = {name for name, _ in fixed}
    cells, choices = [], []
    for f, k in sorted(funs.items()):
        if f in fixed_names:
            continue
        for args in itertools.product(objects, repeat=k):
            cells.append(("f", f, args))
            choices.append(objects)
    for p, k in sorted(preds.items()):
        g = (grid or {}).get(p) or default_grid(signature, p)
        for args in itertools.product(objects, repeat=k):
            cells.append(("p", p, args))
            choices.append(g)
    for combo in itertools.product(*choices):
        fun_table = dict(fixed)
        pred_table = {}
        for (kind, name, args), v in zip(cells, combo):
            if kind == "f":
                fun_table[(name, args)] = v
            else:
                pred_table[(name, args)] = v
        yield Model(objects, fun_table, pred_table)


def brute_force_value(expr, signature: Signature, n: int, grid=None, functions=None,
                      objects=None, cap: int = DEFAULT_CAP, witness: bool = False):
    """Maximum of the sentence value over all enumerated models.

    Exact for the integer fragment when the domain is closed (``objects`` and
    ``functions`` fixed); otherwise a lower bound on the supremum over all
    models.  With ``witness=True`` returns ``(value, model)``.
    """
    fn = compile_expr(expr)
    free = ordered_variables(expr)
    best, best_model = None, None
    for m in enumerate_models(expr, signature, n, grid, functions, objects, cap):
        v = _min_over(fn, free, m)
        if best is None or v > best:
            best, best_model = v, m
    return (best, best_model) if witness else best


def model_values(expr, signature: Signature, n: int, grid=None, functions=None,
                 objects=None, cap: int = DEFAULT_CAP) -> Iterator[Fraction]:
    fn = compile_expr(expr)
    free = ordered_variables(expr)
    for m in enumerate_models(expr, signature, n, grid, functions, objects, cap):
        yield _min_over(fn, free, m)


# --------------------------------------------------------------------------
# model text format: ``object a; fun father(a)=a; pred eagle(a)=1;``

_ENTRY = re.compile(r"^(fun|pred)\s+([A-Za-z_][\w']*)\s*(?:\(([^)]*)\))?\s*=\s*(\S+)$")


def parse_model(text: str) -> Model:
    model = Model([])
    for lineno, raw in enumerate(text.splitlines(), 1):
        for stmt in raw.split("#", 1)[0].split(";"):
            stmt = stmt.strip()
            if not stmt:
                continue
            if stmt.startswith("object"):
                names = stmt.split(None, 1)[1] if " " in stmt else ""
                for o in names.split(","):
                    o = o.strip()
                    if not o:
                        raise ParseError("empty object name", lineno, 1)
                    if o not in model.objects:
                        model.objects.append(o)
                continue
            m = _ENTRY.match(stmt)
            if not m:
                raise ParseError(f"cannot read model entry {stmt!r}", lineno, 1)
            kind, name, args, value = m.groups()
            args = tuple(a.strip() for a in args.split(",") if a.strip()) if args else ()
            if kind == "fun":
                model.funs[(name, args)] = value
            else:
                try:
                    model.preds[(name, args)] = Fraction(value)
                except ValueError:
                    raise ParseError(f"bad number {value!r}", lineno, 1) from None
    for (name, args), value in model.funs.items():
        for o in args + (value,):
            if o not in model.objects:
                raise ModelError(f"unknown object {o} in fun {name}")
    return model


def format_model(model: Model) -> str:
    lines = [f"object {o};" for o in model.objects]
    for (name, args), v in sorted(model.funs.items()):
        lines.append(f"fun {name}({', '.join(args)}) = {v};" if args else f"fun {name} = {v};")
    for (name, args), v in sorted(model.preds.items()):
        lines.append(f"pred {name}({', '.join(args)}) = {show_number(v)};")
    return "\n".join(lines) + "\n"


__all__ = [
    "Model", "evaluate", "sentence_value", "brute_force_value", "enumerate_models",
    "model_values", "count_models", "default_grid", "parse_model", "format_model",
]
