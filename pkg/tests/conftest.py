from pathlib import Path

import pytest
from hypothesis import strategies as st

from fop.syntax import (Add, Fn, Inf, Max, Min, Neg, Pred, Scalar, Scale, Signature, Sub,
                        Sup, Var)


def small_signature() -> Signature:
    sig = Signature()
    sig.pred("p", 1, 0, 1)
    sig.pred("q", 1, 0, 1)
    sig.pred("r", 2, -1, 2)
    sig.fun("a", 0)
    sig.fun("f", 1)
    return sig


DEMOS = Path(__file__).resolve().parent.parent / "demos"

VARS = ["x", "y", "z"]

numbers = st.fractions(min_value=-4, max_value=4, max_denominator=4)


def terms(depth=2):
    base = st.one_of(st.sampled_from([Var(v) for v in VARS]), st.just(Fn("a")))
    if depth == 0:
        return base
    return st.one_of(base, terms(depth - 1).map(lambda t: Fn("f", (t,))))


def atoms():
    t = terms()
    return st.one_of(
        st.builds(lambda a: Pred("p", (a,)), t),
        st.builds(lambda a: Pred("q", (a,)), t),
        st.builds(lambda a, b: Pred("r", (a, b)), t, t),
        numbers.filter(lambda q: q >= 0).map(Scalar),
    )


def formulas(max_leaves=6):
    def extend(children):
        return st.one_of(
            st.builds(Neg, children),
            st.builds(Scale, numbers.filter(lambda q: q > 0), children),
            st.builds(Add, children, children),
            st.builds(Sub, children, children),
            st.builds(Min, children, children),
            st.builds(Max, children, children),
            st.builds(Inf, st.sampled_from(VARS), children),
            st.builds(Sup, st.sampled_from(VARS), children),
        )
    return st.recursive(atoms(), extend, max_leaves=max_leaves)



# first-order logic sentences over two unary predicates and two constants

def fol_signature() -> Signature:
    sig = Signature()
    sig.pred("P", 1, 0, 1).pred("Q", 1, 0, 1)
    sig.fun("a", 0).fun("b", 0)
    return sig


def fol_formulas(max_leaves=5):
    from fop.fol import FAnd, FAtom, FExists, FFalse, FForall, FImplies, FNot, FOr, FTrue

    t = st.sampled_from([Var("x"), Var("y"), Fn("a"), Fn("b")])
    leaves = st.one_of(
        st.builds(lambda n, a: FAtom(n, (a,)), st.sampled_from("PQ"), t),
        st.sampled_from([FTrue(), FFalse()]),
    )

    def extend(children):
        v = st.sampled_from(["x", "y"])
        return st.one_of(
            st.builds(FNot, children),
            st.builds(FAnd, children, children),
            st.builds(FOr, children, children),
            st.builds(FImplies, children, children),
            st.builds(FForall, v, children),
            st.builds(FExists, v, children),
        )
    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def models(draw, sig=None, max_objects=2):
    """A total model of ``small_signature`` (or ``sig``) with values drawn from each range."""
    import itertools

    from fop.semantics import Model, default_grid

    sig = sig or small_signature()
    n = draw(st.integers(1, max_objects))
    objs = [f"o{k}" for k in range(n)]
    funs, preds = {}, {}
    for name, k in sorted(sig.funs.items()):
        for args in itertools.product(objs, repeat=k):
            funs[(name, args)] = draw(st.sampled_from(objs))
    for name, d in sorted(sig.preds.items()):
        for args in itertools.product(objs, repeat=d.arity):
            preds[(name, args)] = draw(st.sampled_from(default_grid(sig, name)))
    return Model(objs, funs, preds)


# acceptance lines, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0].lstrip("#"))):
            terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _repo_root(monkeypatch):
    # demo files are read by relative path
    monkeypatch.chdir(Path(__file__).resolve().parent.parent)
