"""``fop`` command line: parse, normalize, evaluate, ground, refute, prove and verify.

Exit status: 0 proved / feasible / valid, 1 disproved / infeasible / invalid,
2 budget exhausted or unknown, 64 usage error, 65 bad input, 66 missing
file, 73 cannot write output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .errors import FopError, ParseError
from .fol import parse_fol, threshold as fol_threshold, translate_problem
from .ground import concrete_ground, concrete_value, ground_instances, herbrand_terms, build_milp, ground_instance, naive_infer
from .lifted import ProofTrace, entailment_margin, infer_value, refute, refutand, verify_trace
from .milp import milp_decide, write_lp
from .normal import reduce, to_min_normal
from .parser import ProblemFile, format_problem, parse_problem
from .semantics import parse_model, sentence_value
from .syntax import Scalar, Sub, show, show_number

EXIT_OK, EXIT_NO, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_DATA, EXIT_NOINPUT, EXIT_CANTCREAT = 64, 65, 66, 73


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise PermissionError(f"cannot write {path}: {exc.strerror}") from None


def load_problem(path: str, mode: str = "B", simplify: bool = False) -> ProblemFile:
    """A ``.fop`` file as is, or a ``.fol`` file through the chosen translation."""
    text = _read(path)
    try:
        if path.endswith(".fol"):
            fp = parse_fol(text)
            sentence, sig = translate_problem(fp, mode, simplify)
            th = fol_threshold(mode, simplify)
            return ProblemFile(sig, sentence, threshold=th if th else None)
        return parse_problem(text)
    except ParseError as exc:
        raise FopError(f"{path}:{exc}") from None


def _sentence(p: ProblemFile):
    if p.sentence is None:
        raise FopError("the problem file has no sentence")
    if p.threshold:
        return Sub(p.sentence, Scalar(p.threshold))
    return p.sentence


def _query(p: ProblemFile, args):
    if getattr(args, "query", None):
        q = parse_problem(_read(args.query), p.signature)
        f = q.query if q.query is not None else q.sentence
        if f is None:
            raise FopError(f"{args.query} has neither a query nor a sentence")
        return f
    return p.query


def _goal(p: ProblemFile, args):
    """The reduced sentence a proof refutes, and a short description."""
    q = _query(p, args)
    s = _sentence(p)
    if q is None:
        return reduce(s, p.signature), "refutation of the sentence"
    margin = Fraction(args.eps) if getattr(args, "eps", None) is not None else entailment_margin(s, q, p.signature)
    return reduce(refutand(s, q, margin), p.signature), "entailment"


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


# --------------------------------------------------------------------------
# subcommands


def cmd_parse(args) -> int:
    p = load_problem(args.file, args.mode, args.simplify)
    text = format_problem(p).rstrip("\n")
    if args.unicode and p.sentence is not None:
        text += f"\n# {show(p.sentence, unicode=True)}"
    _emit(args, {"problem": format_problem(p)}, text)
    return EXIT_OK


def cmd_normalize(args) -> int:
    p = load_problem(args.file, args.mode, args.simplify)
    s = _sentence(p)
    if args.reduced:
        rs = reduce(s, p.signature)
        lines = [str(c) for c in rs.clauses]
        origins = [_origin(o) for o in rs.provenance]
    else:
        mn = to_min_normal(s, p.signature)
        lines = [str(c) for c in mn.superclauses]
        origins = [f"superclause {i}" for i in range(len(lines))]
    text = "\n".join(f"{line};  # {o}" for line, o in zip(lines, origins))
    _emit(args, {"clauses": lines, "origins": origins}, text)
    return EXIT_OK


def _origin(o) -> str:
    i, j = o
    if j is None:
        return f"superclause {i}"
    if j == "R":
        return f"superclause {i}, selector"
    return f"superclause {i}, disjunct {j}"


def cmd_value(args) -> int:
    p = load_problem(args.file, args.mode, args.simplify)
    s = p.sentence
    if s is None:
        raise FopError("the problem file has no sentence")
    if args.model:
        m = parse_model(_read(args.model))
        m.check(p.signature, s)
        v = sentence_value(s, m)
        _emit(args, {"value": show_number(v)}, show_number(v))
        return EXIT_OK
    if args.concrete:
        v = concrete_value(p, s, args.cut_budget)
        _emit(args, {"value": show_number(v)}, show_number(v))
        return EXIT_OK
    lo, hi = infer_value(s, p.signature, args.depth, args.cut_budget, problem=p)
    lo_text = "none" if lo is None else show_number(lo)
    _emit(args, {"lower": None if lo is None else show_number(lo), "upper": show_number(hi)},
          f"{lo_text} {show_number(hi)}")
    return EXIT_OK if lo == hi else EXIT_UNKNOWN


def cmd_ground(args) -> int:
    p = load_problem(args.file, args.mode, args.simplify)
    s = _sentence(p)
    if p.objects:
        milp = concrete_ground(p, s)
    else:
        rs = reduce(s, p.signature)
        inst = ground_instances(rs.clauses, herbrand_terms(rs, args.depth))
        milp, _ = build_milp([ground_instance(rs.clauses[k], sub) for k, sub in inst], rs.signature)
    text = write_lp(milp)
    if args.lp == "-":
        sys.stdout.write(text)
    else:
        _write(args.lp, text)
        print(f"{len(milp.variables)} variables, {len(milp.constraints)} constraints")
    return EXIT_OK


def cmd_feasible(args) -> int:
    p = load_problem(args.file, args.mode, args.simplify)
    s = _sentence(p)
    if p.objects:
        d = milp_decide(concrete_ground(p, s), args.cut_budget)
        status = {"feasible": "FEASIBLE", "infeasible": "INFEASIBLE"}.get(d.status, "UNKNOWN")
        _emit(args, {"status": d.status, "cuts": len(d.steps)}, status)
        return {"feasible": EXIT_OK, "infeasible": EXIT_NO}.get(d.status, EXIT_UNKNOWN)
    rs = reduce(s, p.signature)
    if args.lifted:
        r = refute(rs, args.cut_budget, args.depth)
        proved, cuts, reason = r.status == "proved", (len(r.trace.steps) if r.trace else None), r.reason
    else:
        r = naive_infer(rs, args.depth, args.max_subproblems, args.cut_budget, jobs=args.jobs)
        proved = r.status == "infeasible"
        cuts = len(r.decision.steps) if r.decision else None
        reason = r.reason
    if proved:
        _emit(args, {"status": "infeasible", "cuts": cuts}, "INFEASIBLE")
        return EXIT_NO
    _emit(args, {"status": "budget_exhausted", "reason": reason}, f"UNKNOWN ({reason})")
    return EXIT_UNKNOWN


def cmd_entail(args) -> int:
    p = load_problem(args.file, args.mode, args.simplify)
    if _query(p, args) is None:
        raise FopError("no query: pass --query FILE or add a query directive")
    return _prove(p, args)


def cmd_prove(args) -> int:
    p = load_problem(args.file, args.mode, args.simplify)
    return _prove(p, args)


def _prove(p: ProblemFile, args) -> int:
    rs, what = _goal(p, args)
    r = refute(rs, args.cut_budget, args.depth)
    if r.status != "proved":
        _emit(args, {"status": "budget_exhausted", "reason": r.reason}, f"UNKNOWN ({r.reason})")
        return EXIT_UNKNOWN
    if args.emit_trace:
        _write(args.emit_trace, r.trace.dumps() + "\n")
    _emit(args, {"status": "proved", "goal": what, "cuts": len(r.trace.steps)}, "PROVED")
    return EXIT_OK


def cmd_verify(args) -> int:
    p = load_problem(args.file, args.mode, args.simplify)
    rs, _ = _goal(p, args)
    try:
        trace = ProofTrace.loads(_read(args.trace), rs.signature)
    except (ValueError, KeyError, TypeError) as exc:
        raise FopError(f"malformed trace: {exc}") from None
    v = verify_trace(rs, trace)
    if v.valid:
        _emit(args, {"valid": True}, "VALID")
        return EXIT_OK
    _emit(args, {"valid": False, "step": v.step, "message": v.message}, f"INVALID: {v.message}")
    return EXIT_NO


# --------------------------------------------------------------------------


def _positive(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _nonnegative(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("file", help=".fop problem file (or .fol, translated first)")
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--mode", choices=["A", "B"], default="B", help="translation for .fol input")
    common.add_argument("--simplify", action="store_true", help="simplify translated .fol input")
    common.add_argument("--depth", type=_nonnegative, default=4, help="Herbrand depth limit")
    common.add_argument("--cut-budget", type=_positive, default=200, help="maximum number of cuts")
    common.add_argument("--max-subproblems", type=_positive, default=1000)
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes")

    top = _Parser(prog="fop", description="First-order programming toolkit.")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("parse", parents=[common], help="check and pretty-print a problem")
    sp.add_argument("--unicode", action="store_true")
    sp.set_defaults(run=cmd_parse)

    sp = sub.add_parser("normalize", parents=[common], help="print a normal form")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--min", action="store_true")
    g.add_argument("--reduced", action="store_true")
    sp.set_defaults(run=cmd_normalize)

    sp = sub.add_parser("value", parents=[common], help="evaluate or bound the sentence value")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--model", metavar="FILE")
    g.add_argument("--concrete", action="store_true")
    sp.set_defaults(run=cmd_value)

    sp = sub.add_parser("ground", parents=[common], help="write the grounding as an LP file")
    sp.add_argument("--lp", metavar="OUT", required=True, help="output path, '-' for stdout")
    sp.set_defaults(run=cmd_ground)

    sp = sub.add_parser("feasible", parents=[common], help="try to refute the sentence")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--naive", action="store_true")
    g.add_argument("--lifted", action="store_true")
    sp.set_defaults(run=cmd_feasible)

    for name, run, helptext in (("entail", cmd_entail, "prove that the sentence entails a query"),
                                ("prove", cmd_prove, "prove the query directive (or refute the sentence)")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("--query", metavar="FILE")
        sp.add_argument("--eps", metavar="Q", help="prove value(query) > Q instead")
        sp.add_argument("--emit-trace", metavar="OUT")
        sp.set_defaults(run=run)

    sp = sub.add_parser("verify", parents=[common], help="check a proof trace")
    sp.add_argument("--trace", metavar="FILE", required=True)
    sp.add_argument("--query", metavar="FILE")
    sp.add_argument("--eps", metavar="Q")
    sp.set_defaults(run=cmd_verify)
    return top


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "eps", None) is not None:
            Fraction(args.eps)
        return args.run(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"fop: {exc}", file=sys.stderr)
        return EXIT_NOINPUT
    except PermissionError as exc:
        print(f"fop: {exc}", file=sys.stderr)
        return EXIT_CANTCREAT
    except (FopError, ValueError, ZeroDivisionError) as exc:
        print(f"fop: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
