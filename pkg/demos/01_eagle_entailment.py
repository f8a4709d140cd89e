"""
Eagles fly
==========

Three rules and one fact, checked for the consequence that Stanley's
father flies.
"""

from pathlib import Path

from fop.lifted import entails, verify_trace
from fop.parser import parse_formula, parse_problem
from fop.syntax import show

here = Path(__file__).parent
problem = parse_problem((here / "eagle.fop").read_text())
print(show(problem.sentence, unicode=True))

# the query is a sentence too; "holds" means value >= 0
query = parse_formula("flies(father(Stanley)) - 1", problem.signature)
result = entails(problem.sentence, query, problem.signature)
print(result.status)

# the refutand after normalisation: the sentence, the negated query, and nothing else
print(result.sentence.text())

# a trace replays on its own, so it can be checked without trusting the prover
print(verify_trace(result.sentence, result.trace))
print(result.trace.dumps())
