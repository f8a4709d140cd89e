"""
Gomory cuts on a tiny MILP
==========================

2x + 2y = 3 has no integer solution.  The LP relaxation does, and one
cut from its optimal tableau removes it.
"""

from fop.milp import Constraint, MilpProblem, Variable, milp_decide, simplex_solve, to_equality_form

x = Variable("x", True, 0, 3)
y = Variable("y", True, 0, 3)
p = MilpProblem([x, y], [Constraint.of({"x": 2, "y": 2}, -3),
                         Constraint.of({"x": -2, "y": -2}, 3)])

relaxation = simplex_solve(to_equality_form(p))
print(relaxation.status, relaxation.point)

d = milp_decide(p)
print(d.status)
for step in d.steps:
    print(step.kind, step.cut, step.lam)

# the final Farkas combination: nonnegative row weights summing to 0 >= positive
print(d.farkas)
