"""
Finite domains
==============

With the objects listed and every function value given, quantifiers
expand into finite min/max and the sentence becomes one MILP.
"""

from pathlib import Path

from fop.ground import concrete_ground, concrete_value
from fop.milp import write_lp
from fop.parser import parse_problem

here = Path(__file__).parent
problem = parse_problem((here / "schema31.fop").read_text())

print(concrete_value(problem))

# sentence p(a) + p(b) + p(c) + p(d) - 2 counts true atoms
cardinality = parse_problem("pred p/1 in int[0,1]; objects a, b, c, d;"
                            "sentence p(a) + p(b) + p(c) + p(d) - 2;")
print(concrete_value(cardinality))

# the ground problem in LP format, exact values in comments
print(write_lp(concrete_ground(problem)))
