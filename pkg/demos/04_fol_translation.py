"""
From first-order logic
======================

Both translations of a small theory, and a check that they agree with
classical truth on every model over two objects.
"""

from pathlib import Path

from fop.fol import (fop_signature, parse_fol, sentence_holds, show_fol, threshold,
                     translate_fol, truth_grid)
from fop.semantics import enumerate_models, sentence_value
from fop.syntax import show

here = Path(__file__).parent
theory = parse_fol((here / "eagle.fol").read_text())
print(show_fol(theory.formula))

for mode, simplify in (("A", False), ("B", False), ("B", True)):
    f = translate_fol(theory.formula, mode, simplify)
    print(mode, "simplified" if simplify else "", show(f))

# a model satisfies the theory iff the translation reaches the threshold
sig = theory.signature
for mode in ("A", "B"):
    f = translate_fol(theory.formula, mode)
    fsig = fop_signature(sig, mode)
    agree = all(sentence_holds(theory.formula, m) == (sentence_value(f, m) >= threshold(mode))
                for m in enumerate_models(f, fsig, 2, grid=truth_grid(sig, mode)))
    print(mode, agree)
