from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fop.errors import CapExceeded, ModelError
from fop.normal import epsilon_of
from fop.parser import parse_problem
from fop.semantics import (Model, brute_force_value, evaluate, format_model, model_values,
                           parse_model, sentence_value)
from fop.syntax import Inf, Min, Scalar, free_variables, ordered_variables

from conftest import formulas, models, small_signature

EAGLE = """
pred bird/1 in int[0,1]; pred flies/1 in int[0,1]; pred eagle/1 in int[0,1];
fun father/1; fun Stanley/0;
sentence flies(x) - bird(x) ^ bird(y) - eagle(y) ^ eagle(father(z)) - eagle(z) ^ eagle(Stanley) - 1;
"""

SCHEMA = "pred x/1 in int[0,8]; fun S/1; sentence x(i) - 2*x(S(i));"


def close(f):
    for v in reversed(ordered_variables(f)):
        f = Inf(v, f)
    return f


def stanley_model():
    return Model(["s"], {("father", ("s",)): "s", ("Stanley", ()): "s"},
                 {(p, ("s",)): Fraction(1) for p in ("eagle", "bird", "flies")})


def test_scalar_evaluates_to_itself():
    assert evaluate(Scalar(3), stanley_model(), {"x": "s"}) == 3


def test_eagle_one_object():
    pf = parse_problem(EAGLE)
    assert sentence_value(pf.sentence, stanley_model()) == 0


def test_schema_chain_value():
    pf = parse_problem(SCHEMA)
    objs = ["1", "2", "3", "4"]
    succ = {("S", (o,)): objs[min(k + 1, 3)] for k, o in enumerate(objs)}
    xs = {("x", (o,)): Fraction(v) for o, v in zip(objs, (8, 4, 2, 0))}
    assert sentence_value(pf.sentence, Model(objs, succ, xs)) == 0


def test_brute_force_examples():
    pf = parse_problem(EAGLE)
    assert brute_force_value(Scalar(1), pf.signature, 2) == 1
    assert brute_force_value(pf.sentence, pf.signature, 1) == 0
    refutand = parse_problem(EAGLE.replace("sentence ", "sentence 1/2 - flies(father(Stanley)) ^ "))
    assert brute_force_value(refutand.sentence, refutand.signature, 1) < 0


def test_brute_force_witness():
    pf = parse_problem(SCHEMA)
    value, model = brute_force_value(pf.sentence, pf.signature, 1, witness=True)
    # one object, S(o) = o: x - 2x is maximised at x = 0
    assert value == 0 and model.preds[("x", ("o0",))] == 0


def test_cap():
    pf = parse_problem(SCHEMA)
    with pytest.raises(CapExceeded):
        brute_force_value(pf.sentence, pf.signature, 4, cap=1000)


def test_missing_entry_is_a_model_error():
    pf = parse_problem(EAGLE)
    m = stanley_model()
    del m.preds[("bird", ("s",))]
    with pytest.raises(ModelError):
        m.check(pf.signature)


def test_model_text_round_trip():
    m = stanley_model()
    text = format_model(m)
    assert "fun father(s) = s;" in text
    assert parse_model(text) == m
    m2 = parse_model("object a, b; fun Stanley=a; fun father(a)=b; fun father(b)=b;\n"
                     "pred eagle(a)=1; pred eagle(b)=0")
    assert m2.objects == ["a", "b"] and m2.preds[("eagle", ("b",))] == 0


@settings(max_examples=150, deadline=None)
@given(formulas(), models(), st.data())
def test_sentence_value_ignores_valuation(f, m, data):
    s = close(f)
    v1 = {x: data.draw(st.sampled_from(m.objects)) for x in "xyz"}
    v2 = {x: data.draw(st.sampled_from(m.objects)) for x in "xyz"}
    assert evaluate(s, m, v1) == evaluate(s, m, v2)


@settings(max_examples=150, deadline=None)
@given(formulas(), formulas(), models())
def test_dropping_a_conjunct_never_decreases(a, b, m):
    assert sentence_value(Min(a, b), m) <= sentence_value(a, m)


@settings(max_examples=40, deadline=None)
@given(formulas(max_leaves=4))
def test_values_are_multiples_of_epsilon(f):
    sig = small_signature()
    eps = epsilon_of(f, sig)
    for v in model_values(f, sig, 1, cap=5000):
        assert (v / eps).denominator == 1
    assert free_variables(close(f)) == set()
