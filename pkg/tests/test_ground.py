from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fop.errors import FopError
from fop.ground import (build_milp, concrete_ground, concrete_value, ground_instances,
                        ground_subproblem, herbrand_count, herbrand_terms, naive_infer)
from fop.milp import MilpProblem, Variable, milp_decide, simplex_solve, to_equality_form
from fop.normal import reduce
from fop.parser import parse_formula, parse_problem
from fop.semantics import brute_force_value
from fop.syntax import Fn, Pred, Scalar, Signature, Var, show

from conftest import DEMOS, formulas, small_signature

EAGLE = (DEMOS / "eagle.fop").read_text()
CHAIN = "pred x/1 in int[0,8]; fun S/1;"


def eagle_refutand():
    pf = parse_problem(EAGLE)
    q = parse_formula("1/2 - flies(father(Stanley))", pf.signature)
    from fop.syntax import Min
    return reduce(Min(pf.sentence, q), pf.signature), pf


def chain_refutand(power):
    pf = parse_problem(CHAIN)
    s = "S(" * power + "k" + ")" * power
    text = f"(x(i) - 2*x(S(i))) ^ (-1/2 - (!k. -x({s})))"
    return reduce(parse_formula(text, pf.signature), pf.signature)


def test_herbrand_with_nil():
    sig = Signature().fun("father", 1)
    terms = herbrand_terms(Pred("height", (Fn("father", (Var("x"),)),)), 2)
    assert [str(t) for t in terms] == ["nil", "father(nil)", "father(father(nil))"]
    assert herbrand_terms(sig.funs, 1)[0] == Fn("nil")


def test_herbrand_constants_only():
    for d in range(3):
        assert herbrand_terms({"Stanley": 0}, d) == [Fn("Stanley")]


def test_herbrand_one_level():
    assert [str(t) for t in herbrand_terms({"Stanley": 0, "father": 1}, 1)] == \
        ["Stanley", "father(Stanley)"]


@given(st.dictionaries(st.sampled_from(["a", "b", "f", "g", "h"]), st.integers(0, 2), max_size=4),
       st.integers(0, 2))
@settings(max_examples=60, deadline=None)
def test_herbrand_counts_and_nesting(funs, d):
    terms = herbrand_terms(funs, d)
    assert len(terms) == len(set(terms)) == herbrand_count(funs, d)
    if herbrand_count(funs, d + 1) <= 2000:
        assert set(terms) <= set(herbrand_terms(funs, d + 1))


def test_chain_subproblem_shape():
    s = reduce(parse_formula("x(i) - 2*x(S(i))", parse_problem(CHAIN).signature),
               parse_problem(CHAIN).signature)
    one = Fn("nil")
    terms = [one, Fn("S", (one,)), Fn("S", (Fn("S", (one,)),))]
    g = ground_subproblem(s, [(0, {"i": t}) for t in terms])
    assert len(g.milp.constraints) == 3
    assert len(g.milp.variables) == 4
    assert all(v.lo == 0 and v.hi == 8 and v.integer for v in g.milp.variables)
    assert milp_decide(g.milp).status == "feasible"


def test_empty_subproblem_is_feasible():
    s, _ = eagle_refutand()
    g = ground_subproblem(s, [])
    assert milp_decide(g.milp).status == "feasible"


def test_nonground_instance_rejected():
    s, _ = eagle_refutand()
    with pytest.raises(FopError):
        ground_subproblem(s, [(0, {})])


def test_eagle_refutand_depth_one_infeasible():
    s, _ = eagle_refutand()
    terms = herbrand_terms(s, 1)
    g = ground_subproblem(s, ground_instances(s.clauses, terms))
    assert milp_decide(g.milp).status == "infeasible"


def test_naive_eagle():
    s, pf = eagle_refutand()
    res = naive_infer(s, max_depth=2)
    assert res.status == "infeasible" and res.depth <= 2
    assert len(res.problem.clauses) == 5
    assert res.decision.status == "infeasible"


def test_naive_nothing_to_refute():
    s = reduce(Scalar(1), Signature())
    res = naive_infer(s, max_depth=3)
    assert res.status == "budget_exhausted"


def test_naive_chain_four_steps():
    res = naive_infer(chain_refutand(4), max_depth=4)
    assert res.status == "infeasible"
    shown = sorted(show(c) for c in res.problem.clauses)
    assert len(shown) == 5


def test_naive_chain_three_steps_not_refuted():
    # the three-step query is not entailed: see the chain countermodel
    res = naive_infer(chain_refutand(3), max_depth=3)
    assert res.status == "budget_exhausted"


def test_naive_parallel_matches_serial():
    a = naive_infer(chain_refutand(4), max_depth=4)
    b = naive_infer(chain_refutand(4), max_depth=4, jobs=2)
    assert a.depth == b.depth and a.problem.clauses == b.problem.clauses


def test_concrete_schema():
    pf = parse_problem((DEMOS / "schema31.fop").read_text())
    assert concrete_value(pf) == 8
    milp = concrete_ground(pf)
    assert milp_decide(milp).status == "feasible"


def test_concrete_constant():
    pf = parse_problem("objects o; sentence 3;")
    assert concrete_value(pf) == 3


def test_concrete_cardinality():
    pf = parse_problem("pred p/1 in int[0,1]; objects a, b, c, d; sentence p(a) + p(b) + p(c) + p(d) - 2;")
    assert concrete_value(pf) == 2


def test_concrete_needs_objects_and_tables():
    with pytest.raises(FopError):
        concrete_value(parse_problem("sentence 3;"))
    with pytest.raises(FopError):
        concrete_value(parse_problem("pred p/1 in int[0,1]; fun f/1; objects a; sentence p(f(a));"))


CONCRETE = """
pred p/1 in int[0,1]; pred q/1 in int[0,1]; pred r/2 in int[-1,2];
fun f/1; objects a, b; fun f(a) = b; fun f(b) = b;
"""


@settings(max_examples=30, deadline=None)
@given(formulas(max_leaves=4))
def test_concrete_value_matches_enumeration(g):
    pf = parse_problem(CONCRETE + "sentence 0;")
    tables = dict(pf.functions)
    tables.update({("a", ()): "a", ("b", ()): "b"})
    expected = brute_force_value(g, pf.signature, 2, objects=["a", "b"], functions=tables)
    assert concrete_value(pf, g) == expected


@settings(max_examples=20, deadline=None)
@given(formulas(max_leaves=4))
def test_naive_refutations_are_negative(g):
    sig = small_signature()
    res = naive_infer(reduce(g, sig), max_depth=1, max_instances=200, cut_budget=200)
    if res.status == "infeasible":
        for n in (1, 2):
            assert brute_force_value(g, sig, n, cap=50_000) < 0


def _lp_max(clauses, sig):
    milp, _ = build_milp(clauses, sig)
    z = Variable("z__", False, -100, 100)
    cons = [type(c)(c.coeffs + (("z__", Fraction(-1)),), c.const) for c in milp.constraints]
    res = simplex_solve(to_equality_form(MilpProblem(milp.variables + [z], cons)), {"z__": 1})
    return res.objective


def test_subproblem_value_nonincreasing():
    s, _ = eagle_refutand()
    inst = ground_instances(s.clauses, herbrand_terms(s, 1))
    g_all = ground_subproblem(s, inst)
    values = [_lp_max(g_all.clauses[:k], s.signature) for k in range(1, len(inst) + 1)]
    assert values == sorted(values, reverse=True)
