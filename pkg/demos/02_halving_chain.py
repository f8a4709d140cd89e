"""
A halving chain
===============

x(i) >= 2 x(S(i)) with x in {0..8}.  Four halvings from at most 8 must
reach 0, three need not.
"""

from fractions import Fraction
from pathlib import Path

from fop.lifted import CutRequest, Pick, entails, lifted_cut
from fop.normal import reduce
from fop.parser import parse_formula, parse_problem
from fop.semantics import parse_model, sentence_value
from fop.syntax import Fn, Var

here = Path(__file__).parent
problem = parse_problem((here / "chain.fop").read_text())
sig = problem.signature
F = problem.sentence


def S(t, k=1):
    for _ in range(k):
        t = Fn("S", (t,))
    return t


# One lifted cut by hand: four copies of F along i, S(i), S(S(i)), ...
# plus the range bound 8 - x(i), weighted 1, 2, 4, 8 and 1 (over 16).
host = reduce(F, sig)
picks = [Pick(clause=0, rename=(("i", v),)) for v in "jklm"]
picks.append(Pick(implicit="x", side="upper", rename=(("n1", "n"),)))
i = Var("i")
sub = {"j": i, "k": S(i), "l": S(i, 2), "m": S(i, 3), "n": i}
lam = [Fraction(k, 16) for k in (1, 2, 4, 8, 1)]
print(lifted_cut(host, CutRequest(picks, sub, lam)).clause)

# the same conclusion found by search
print(entails(F, problem.query, sig).status)

# three halvings are not enough: 8, 4, 2, 1, 0 along a chain
model = parse_model((here / "chain_model.txt").read_text())
three = parse_formula("-x(S(S(S(i))))", sig)
print(sentence_value(F, model), sentence_value(three, model))
print(entails(F, three, sig, max_cuts=20, max_depth=3).status)
