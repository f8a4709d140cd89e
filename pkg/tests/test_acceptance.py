"""Acceptance criteria, one test each; every test also records a PASS/FAIL line."""

import itertools
import random
import subprocess
import sys
import time
from fractions import Fraction

from fop.errors import CapExceeded
from fop.fol import (FAnd, FAtom, FExists, FFalse, FForall, FImplies, FNot, FOr, FTrue,
                     sentence_holds, threshold, translate_fol, truth_grid, fop_signature)
from fop.ground import concrete_value, naive_infer
from fop.lifted import (CutRequest, Pick, entails, lift_certificate, lifted_cut, refutand,
                        verify_trace)
from fop.milp import Constraint, MilpProblem, Variable, milp_decide
from fop.normal import epsilon_of, reduce, to_min_normal
from fop.parser import parse_formula, parse_problem
from fop.semantics import Model, brute_force_value, enumerate_models, model_values, sentence_value
from fop.syntax import (Add, Fn, Inf, Max, Min, Neg, Pred, Scalar, Scale, Signature, Sub, Sup,
                        Var, show)

import conftest
from conftest import DEMOS

H = Fraction(1, 2)


def report(k, ok, detail):
    conftest.ACCEPTANCE.append(f"#{k} {'PASS' if ok else 'FAIL'}: {detail}")
    print(conftest.ACCEPTANCE[-1])
    assert ok, detail


# -- random sentences (seeded, so every run sees the same ones)

def random_term(rng, consts, depth=1):
    if depth > 0 and rng.random() < 0.25:
        return Fn("f", (random_term(rng, consts, depth - 1),))
    return rng.choice([Var("x"), Var("y")] + [Fn(c) for c in consts])


def random_formula(rng, size, sig_preds, consts, scalars=(0, 1, 2), fractions=False):
    if size <= 1:
        if rng.random() < 0.2:
            return Scalar(rng.choice(scalars))
        name, arity = rng.choice(sig_preds)
        return Pred(name, tuple(random_term(rng, consts) for _ in range(arity)))
    kind = rng.choice(["neg", "scale", "add", "sub", "min", "max", "inf", "sup"])
    if kind == "neg":
        return Neg(random_formula(rng, size - 1, sig_preds, consts, scalars, fractions))
    if kind == "scale":
        c = Fraction(rng.randint(1, 3), rng.randint(1, 3) if fractions else 1)
        return Scale(c, random_formula(rng, size - 1, sig_preds, consts, scalars, fractions))
    if kind in ("inf", "sup"):
        body = random_formula(rng, size - 1, sig_preds, consts, scalars, fractions)
        return (Inf if kind == "inf" else Sup)(rng.choice("xy"), body)
    left = rng.randint(1, size - 1)
    a = random_formula(rng, left, sig_preds, consts, scalars, fractions)
    b = random_formula(rng, size - left, sig_preds, consts, scalars, fractions)
    return {"add": Add, "sub": Sub, "min": Min, "max": Max}[kind](a, b)


def random_fol(rng, size):
    consts = [Fn("a"), Fn("b")]
    if size <= 1:
        r = rng.random()
        if r < 0.1:
            return rng.choice([FTrue(), FFalse()])
        return FAtom(rng.choice("PQ"), (rng.choice([Var("x"), Var("y")] + consts),))
    kind = rng.choice(["not", "and", "or", "imp", "all", "ex"])
    if kind == "not":
        return FNot(random_fol(rng, size - 1))
    if kind in ("all", "ex"):
        return (FForall if kind == "all" else FExists)(rng.choice("xy"), random_fol(rng, size - 1))
    left = rng.randint(1, size - 1)
    a, b = random_fol(rng, left), random_fol(rng, size - left)
    return {"and": FAnd, "or": FOr, "imp": FImplies}[kind](a, b)


# -- 1

def test_chain_single_cut_proof():
    start = time.perf_counter()
    pf = parse_problem("pred x/1 in int[0,8]; fun S/1; sentence x(i) - 2*x(S(i));")
    s = reduce(pf.sentence, pf.signature)
    i = Var("i")
    picks = [Pick(clause=0, rename=(("i", v),)) for v in "jklm"]
    picks.append(Pick(implicit="x", side="upper", rename=(("n1", "n"),)))
    sub = {"j": i, "k": Fn("S", (i,)), "l": Fn("S", (Fn("S", (i,)),)),
           "m": Fn("S", (Fn("S", (Fn("S", (i,)),)),)), "n": i}
    lam = [Fraction(k, 16) for k in (1, 2, 4, 8, 1)]
    cut = lifted_cut(s, CutRequest(picks, sub, lam)).clause
    query = parse_formula("-x(S(S(S(i))))", pf.signature)
    res = entails(pf.sentence, query, pf.signature, max_cuts=50)
    elapsed = time.perf_counter() - start
    ok = (show(cut) == "-x(S(S(S(i1))))" and res.status == "proved" and elapsed < 5)
    report(1, ok, f"cut {show(cut)}, expected -x(S(S(S(i1)))); entailment of -x(S(S(S(i)))): "
                  f"{res.status}; {elapsed:.2f}s")


# -- 2

def test_eagle_chain():
    start = time.perf_counter()
    pf = parse_problem((DEMOS / "eagle.fop").read_text())
    q = parse_formula("flies(father(Stanley)) - 1", pf.signature)
    res = entails(pf.sentence, q, pf.signature, max_cuts=200)
    valid = res.status == "proved" and verify_trace(res.sentence, res.trace).valid
    elapsed = time.perf_counter() - start
    steps = len(res.trace.steps) if res.trace else None
    report(2, valid and elapsed < 30, f"{res.status}, {steps} cuts, trace valid={valid}, {elapsed:.2f}s")


# -- 3

def test_schema_concrete():
    start = time.perf_counter()
    pf = parse_problem((DEMOS / "schema31.fop").read_text())
    v = concrete_value(pf)
    objs = ["1", "2", "3", "4"]
    m = Model(objs, {("S", (o,)): pf.functions[("S", (o,))] for o in objs},
              {("x", (o,)): Fraction(x) for o, x in zip(objs, (8, 4, 2, 0))})
    m.funs.update({(o, ()): o for o in objs})
    witness = sentence_value(pf.sentence, m)
    elapsed = time.perf_counter() - start
    report(3, v == 8 and witness == 8 and elapsed < 5,
           f"concrete value {v}, witness (8,4,2,0) value {witness}, {elapsed:.2f}s")


# -- 4

def test_table_correspondence():
    rng = random.Random(4)
    sig = Signature().pred("P", 1, 0, 1).pred("Q", 1, 0, 1).fun("a", 0).fun("b", 0)
    carrier = Min(Pred("P", (Fn("a"),)), Pred("Q", (Fn("b"),)))
    bad, checked = [], 0
    for _ in range(200):
        f = random_fol(rng, rng.randint(1, 6))
        for mode in ("A", "B"):
            g = translate_fol(f, mode)
            fsig = fop_signature(sig, mode)
            cut = threshold(mode)
            for n in (1, 2):
                for m in enumerate_models([g, carrier], fsig, n, grid=truth_grid(sig, mode)):
                    checked += 1
                    if sentence_holds(f, m) != (sentence_value(g, m) >= cut):
                        bad.append((mode, f))
    report(4, not bad, f"200 sentences, {checked} model checks, {len(bad)} discrepancies")


# -- 5

def test_cardinality():
    bad = 0
    cases = 0
    for n in range(1, 7):
        objs = [f"x{k}" for k in range(1, n + 1)]
        sig = Signature().pred("p", 1, 0, 1)
        for o in objs:
            sig.fun(o, 0)
        for k in range(0, n + 1):
            text = " + ".join(f"p({o})" for o in objs) + f" - {k}"
            f = parse_formula(text, sig)
            for bits in itertools.product((0, 1), repeat=n):
                m = Model(objs, {(o, ()): o for o in objs},
                          {("p", (o,)): Fraction(b) for o, b in zip(objs, bits)})
                cases += 1
                if (sentence_value(f, m) >= 0) != (sum(bits) >= k):
                    bad += 1
            pf = parse_problem(f"pred p/1 in int[0,1]; objects {', '.join(objs)}; sentence {text};")
            if concrete_value(pf) != n - k:
                bad += 1
    report(5, bad == 0, f"{cases} tables for n <= 6, {bad} mismatches")


# -- 6

def test_normal_form_preservation():
    rng = random.Random(6)
    sig = Signature().pred("p", 1, 0, 1).pred("q", 1, -1, 1).fun("a", 0).fun("f", 1)
    preds = [("p", 1), ("q", 1)]
    done, value_bad, sign_bad = 0, 0, 0
    while done < 100:
        f = random_formula(rng, rng.randint(1, 5), preds, ["a"])
        try:
            mn = to_min_normal(f, sig)
            rs = reduce(f, sig)
            n = rng.choice((1, 2))
            orig = brute_force_value(f, sig, n, cap=20_000)
            mnv = brute_force_value(mn.to_formula(), mn.signature, n, cap=20_000)
            red = brute_force_value(rs.to_formula(), rs.signature, 1, cap=20_000)
            orig1 = brute_force_value(f, sig, 1, cap=20_000)
        except CapExceeded:
            continue
        done += 1
        value_bad += orig != mnv
        sign_bad += (orig1 >= 0) != (red >= 0)
    report(6, value_bad == 0 and sign_bad == 0,
           f"100 sentences, {value_bad} value mismatches, {sign_bad} sign mismatches")


# -- 7

def integer_points(p):
    for combo in itertools.product(*(range(int(v.lo), int(v.hi) + 1) for v in p.variables)):
        pt = {v.name: Fraction(c) for v, c in zip(p.variables, combo)}
        if p.satisfied_by(pt):
            yield pt


def test_gomory_validity():
    rng = random.Random(7)
    invalid = disagree = exhausted = cuts = 0
    for _ in range(500):
        n = rng.randint(1, 3)
        xs = []
        for k in range(n):
            lo = rng.randint(0, 8)
            xs.append(Variable(f"x{k}", True, lo, rng.randint(lo, 8)))
        cons = [Constraint.of({v.name: rng.randint(-4, 4) for v in xs},
                              Fraction(rng.randint(-16, 16), rng.randint(1, 3)))
                for _ in range(rng.randint(1, 4))]
        p = MilpProblem(xs, cons)
        d = milp_decide(p, budget=1000)
        points = list(integer_points(p))
        exhausted += d.status == "budget_exhausted"
        disagree += d.status != ("feasible" if points else "infeasible")
        for c in d.cuts:
            cuts += 1
            invalid += any(c.value(pt) < 0 for pt in points)
    report(7, invalid == disagree == exhausted == 0,
           f"500 problems, {cuts} cuts, {invalid} invalid, {disagree} disagreements, "
           f"{exhausted} budget_exhausted")


# -- 8

def test_epsilon():
    rng = random.Random(8)
    sig = Signature().pred("p", 1, 0, 2).pred("r", 0, -1, 1).fun("a", 0)
    preds = [("p", 1), ("r", 0)]
    done = bad = 0
    while done < 100:
        f = random_formula(rng, rng.randint(1, 6), preds, ["a"],
                           scalars=(0, 1, H, Fraction(1, 3), Fraction(-2, 5)), fractions=True)
        eps = epsilon_of(f, sig)
        try:
            values = list(model_values(f, sig, rng.choice((1, 2)), cap=20_000))
        except CapExceeded:
            continue
        done += 1
        bad += any((v / eps).denominator != 1 for v in values)
    report(8, bad == 0, f"100 sentences, {bad} with a value off the epsilon lattice")


# -- 9

def refutable_sentences():
    # integer gaps: a*(p + q) must land strictly between two multiples of a
    sig = Signature().pred("p", 1, 0, 1).pred("q", 1, 0, 2).fun("a", 0).fun("f", 1)
    for a, lo, hi in ((2, 1, 1), (3, 1, 2), (3, 4, 5), (4, 1, 3), (5, 6, 9), (2, 3, 3)):
        text = f"{a}*p(x) + {a}*q(f(x)) - {lo} ^ {hi} - {a}*p(x) - {a}*q(f(x))"
        yield reduce(parse_formula(text, sig), sig)
    for a in (2, 3):
        text = f"{a}*p(a) - 1 ^ 1 - {a}*p(a) v q(a) - 3"
        yield reduce(parse_formula(text, sig), sig)
    chain = parse_problem("pred x/1 in int[0,8]; fun S/1; sentence x(i) - 2*x(S(i));")
    for k in (4, 5, 6):
        q = parse_formula("-x(" + "S(" * k + "i" + ")" * k + ")", chain.signature)
        yield reduce(refutand(chain.sentence, q, -H), chain.signature)
    eagle = parse_problem((DEMOS / "eagle.fop").read_text())
    for q in ("flies(father(Stanley)) - 1", "bird(Stanley) - 1", "flies(Stanley) - 1",
              "eagle(father(father(Stanley))) - 1", "bird(father(Stanley)) - 1"):
        yield reduce(refutand(eagle.sentence, parse_formula(q, eagle.signature), -H), eagle.signature)
    rng = random.Random(9)
    sig = Signature().pred("p", 1, 0, 1).pred("q", 1, 0, 2).fun("a", 0).fun("f", 1)
    while True:
        f = random_formula(rng, rng.randint(2, 6), [("p", 1), ("q", 1)], ["a"],
                           scalars=(0, 1, H), fractions=True)
        yield reduce(f, sig)


def test_lifting():
    lifted = valid = with_cuts = tried = 0
    for s in refutable_sentences():
        if lifted == 20 or tried > 2000:
            break
        tried += 1
        res = naive_infer(s, max_depth=2, max_instances=300, cut_budget=200)
        if res.status != "infeasible":
            continue
        trace = lift_certificate(s, res.problem.instances, res.decision)
        lifted += 1
        with_cuts += bool(trace.steps)
        same = len(trace.steps) == len(res.decision.steps)
        valid += same and verify_trace(s, trace).valid
    report(9, lifted == 20 and valid == 20,
           f"{lifted} certificates lifted ({with_cuts} with cuts), {valid} verified")


# -- 10

SCRIPT = r"""
import json, random
from fractions import Fraction
from fop.parser import parse_problem, parse_formula
from fop.lifted import entails
from fop.ground import naive_infer
from fop.normal import reduce
from fop.milp import Constraint, MilpProblem, Variable, milp_decide
from fop.cli import run
out = []
eagle = parse_problem(open("demos/eagle.fop").read())
q = parse_formula("flies(father(Stanley)) - 1", eagle.signature)
out.append(entails(eagle.sentence, q, eagle.signature).trace.dumps())
chain = parse_problem(open("demos/chain.fop").read())
r = entails(chain.sentence, chain.query, chain.signature)
out.append(r.trace.dumps())
n = naive_infer(r.sentence, max_depth=4)
out.append(repr([str(c) for c in n.problem.clauses]) + repr(n.decision.cuts))
rng = random.Random(10)
for _ in range(50):
    xs = [Variable(f"x{k}", True, 0, 8) for k in range(3)]
    cons = [Constraint.of({v.name: rng.randint(-4, 4) for v in xs}, rng.randint(-9, 9))
            for _ in range(3)]
    d = milp_decide(MilpProblem(xs, cons))
    out.append(d.status + repr(d.cuts) + repr(sorted((d.point or {}).items())))
print(json.dumps(out))
for argv in (["ground", "demos/eagle.fop", "--lp", "-"],
             ["normalize", "--reduced", "demos/schema31.fop"],
             ["value", "demos/eagle.fop"]):
    run(argv)
"""


def test_determinism():
    runs = [subprocess.run([sys.executable, "-c", SCRIPT], capture_output=True) for _ in range(2)]
    ok = all(r.returncode == 0 for r in runs) and runs[0].stdout == runs[1].stdout
    size = len(runs[0].stdout)
    report(10, ok and size > 0, f"two runs, {size} bytes of traces and outputs, identical={ok}")
