"""First-order programming: bounded numeric first-order sentences, normal forms and lifted Gomory cuts."""

from .errors import (
    CapExceeded, FopError, FragmentError, ModelError, NoCut, ParseError, SortError, WeakeningError,
)
from .fol import parse_fol, translate_fol
from .ground import (
    concrete_ground, concrete_value, ground_subproblem, herbrand_count, herbrand_terms, naive_infer,
)
from .lifted import (
    CutRequest, LiftedCut, Pick, ProofTrace, entails, epsilon_entails, implicit_clause, infer_value,
    lift_certificate, lifted_cut, refute, verify_trace,
)
from .milp import (
    Constraint, MilpProblem, Variable, eliminate_slacks, gomory_cut, milp_decide, read_lp,
    round_cut, simplex_solve, to_equality_form, write_lp,
)
from .normal import epsilon_of, reduce, to_min_normal, to_reduced_normal
from .parser import parse_formula, parse_problem, parse_term
from .semantics import Model, brute_force_value, evaluate, sentence_value
from .syntax import Signature, show

__all__ = [
    "CapExceeded", "FopError", "FragmentError", "ModelError", "NoCut", "ParseError", "SortError",
    "WeakeningError", "parse_fol", "translate_fol", "concrete_ground", "concrete_value",
    "ground_subproblem", "herbrand_count", "herbrand_terms", "naive_infer", "CutRequest",
    "LiftedCut", "Pick", "ProofTrace", "entails", "epsilon_entails", "implicit_clause",
    "infer_value", "lift_certificate", "lifted_cut", "refute", "verify_trace", "Constraint",
    "MilpProblem", "Variable", "eliminate_slacks", "gomory_cut", "milp_decide", "read_lp",
    "round_cut", "simplex_solve", "to_equality_form", "write_lp", "epsilon_of", "reduce",
    "to_min_normal", "to_reduced_normal", "parse_formula", "parse_problem", "parse_term", "Model",
    "brute_force_value", "evaluate", "sentence_value", "Signature", "show",
]

__version__ = "0.1.0"
