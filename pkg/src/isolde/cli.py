"""Command line front end.

Every subcommand prints one JSON document on stdout. Exit codes:

- 0: isolated (or the command completed)
- 1: not isolated
- 2: input error (unreadable file, schema violation, invalid PFA or grammar)
- 3: a capacity or exploration budget was exceeded
"""
import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .applications import (
    CONSTRUCTIONS,
    Empty,
    NonEmpty,
    SubsetSumInstance,
    bounded_alternation_isolation,
    emptiness_if_isolated,
    gadget_grammar,
    subset_sum_gadget,
    value_one,
)
from .document import ProblemDocument
from .exactmath import rat_str
from .exceptions import IsoldeCapacityError, IsoldeResourceError, IsoldeValidationError
from .grammar import check_letter_bounded, parikh_image, parse_grammar
from .isolation import FiniteWitness, Isolated, decide
from .oracle import brute_force_min_distance, check_verdict
from .semilinear import is_stratified
from .settings import initialize

logger = logging.getLogger(__name__)

EXIT_ISOLATED = 0
EXIT_NOT_ISOLATED = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def jsonable(value):
    """Fractions as rat-strings, tuples as lists, dict keys as strings."""
    if isinstance(value, Fraction):
        return rat_str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, frozenset, set)):
        items = sorted(value) if isinstance(value, (frozenset, set)) else value
        return [jsonable(v) for v in items]
    return value


def witness_json(w) -> dict:
    if isinstance(w, FiniteWitness):
        return {"finite": list(w.exponents), "component": w.component}
    return {
        "limit": {
            "component": w.component,
            "base": list(w.branch.base),
            "periods": [list(p) for p in w.branch.periods],
            "free": list(w.free),
            "residues": list(w.residues),
            "modulus": w.modulus,
            "value": rat_str(w.value),
        }
    }


def verdict_json(verdict) -> dict:
    if isinstance(verdict, Isolated):
        out = {"verdict": "isolated", "epsilon": rat_str(verdict.epsilon)}
    else:
        out = {"verdict": "non-isolated", "witness": witness_json(verdict.witness)}
    if verdict.note:
        out["note"] = verdict.note
    return out


def _emit(doc: dict):
    sys.stdout.write(json.dumps(jsonable(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n")


def _load(path: str) -> ProblemDocument:
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise IsoldeValidationError("cannot read {0}: {1}".format(path, e.strerror))
    return ProblemDocument.loads(text)


def _verdict_code(verdict) -> int:
    return EXIT_ISOLATED if isinstance(verdict, Isolated) else EXIT_NOT_ISOLATED


def cmd_decide(args) -> int:
    prob = _load(args.path).to_problem()
    decision = decide(prob, trace=args.trace)
    out = verdict_json(decision.verdict)
    if args.trace:
        out["trace"] = decision.trace
        out["nodes"] = decision.nodes
    if args.bound is not None:
        out["check"] = check_verdict(prob, decision.verdict, args.bound).to_json()
    _emit(out)
    return _verdict_code(decision.verdict)


def cmd_emptiness(args) -> int:
    prob = _load(args.path).to_problem()
    outcome = emptiness_if_isolated(prob)
    if isinstance(outcome, Empty):
        _emit({"outcome": "empty"})
    elif isinstance(outcome, NonEmpty):
        _emit({"outcome": "non-empty", "witness": list(outcome.exponents), "value": outcome.value})
    else:
        _emit({"outcome": "not-isolated", "witness": witness_json(outcome.witness)})
        return EXIT_NOT_ISOLATED
    return EXIT_ISOLATED


def cmd_value1(args) -> int:
    prob = _load(args.path).to_problem()
    _emit({"value_one": value_one(prob.pfa, prob.language)})
    return EXIT_ISOLATED


def cmd_gadget(args) -> int:
    inst = SubsetSumInstance(tuple(args.values), args.target)
    prob = subset_sum_gadget(inst, construction=args.construction)
    grammar = gadget_grammar(inst) if args.grammar else None
    text = ProblemDocument.from_problem(prob, grammar=grammar).dumps()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info("wrote %s", args.out)
    else:
        sys.stdout.write(text)
    return EXIT_ISOLATED


def cmd_oracle(args) -> int:
    prob = _load(args.path).to_problem()
    report = brute_force_min_distance(prob, args.bound)
    _emit(report.to_json())
    return EXIT_ISOLATED


def cmd_parikh(args) -> int:
    try:
        with open(args.path, encoding="utf-8") as f:
            g = parse_grammar(f.read())
    except OSError as e:
        raise IsoldeValidationError("cannot read {0}: {1}".format(args.path, e.strerror))
    check_letter_bounded(g)
    image = parikh_image(g)
    _emit(
        {
            "alphabet": list(g.alphabet),
            "components": [{"base": list(c.base), "periods": [list(p) for p in c.periods]} for c in image.components],
            "stratified": is_stratified(image),
        }
    )
    return EXIT_ISOLATED


def cmd_alternation(args) -> int:
    prob = _load(args.path).to_problem()
    verdict = bounded_alternation_isolation(prob.pfa, args.k, prob.lam)
    _emit(verdict_json(verdict))
    return _verdict_code(verdict)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer, got {0}".format(text))
    return value


def _natural(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("expected a natural number, got {0}".format(text))
    return value


def _engine_options(p: argparse.ArgumentParser):
    p.add_argument("--budget", type=_positive, help="Max branch nodes per decision.")
    p.add_argument("--workers", type=_positive, help="Explore language components on this many threads.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isolde", description="Decide cutpoint isolation for PFA on letter-bounded context-free languages."
    )
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    parser.add_argument("-v", "--verbose", action="count", default=0, help="Log to stderr (-vv for branch detail).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="Is the cutpoint isolated?")
    p.add_argument("path", help="Problem file.")
    p.add_argument("--trace", action="store_true", help="Include the branch trace.")
    p.add_argument("--bound", type=_natural, help="Cross-check the verdict by enumeration up to this coordinate bound.")
    _engine_options(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("emptiness", help="Is some word at or above the cutpoint (isolated cutpoints only)?")
    p.add_argument("path", help="Problem file.")
    _engine_options(p)
    p.set_defaults(func=cmd_emptiness)

    p = sub.add_parser("value1", help="Do word values come arbitrarily close to 1?")
    p.add_argument("path", help="Problem file (lambda is ignored).")
    _engine_options(p)
    p.set_defaults(func=cmd_value1)

    p = sub.add_parser("gadget", help="Write the problem file of a subset sum instance.")
    p.add_argument("values", metavar="X", type=_positive, nargs="+", help="Positive integers of the set.")
    p.add_argument("--target", "-t", required=True, type=_natural, help="Target sum.")
    p.add_argument("--out", "-o", help="Output path (default: stdout).")
    p.add_argument("--construction", choices=CONSTRUCTIONS, default="additive", help="Gadget matrices.")
    p.add_argument("--grammar", action="store_true", help="Write the language as a grammar.")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("oracle", help="Minimum distance to the cutpoint by exhaustive enumeration.")
    p.add_argument("path", help="Problem file.")
    p.add_argument("--bound", type=_natural, default=20, help="Coordinate bound (default: 20).")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("parikh", help="Parikh image of a letter-bounded grammar.")
    p.add_argument("path", help="Grammar file.")
    p.set_defaults(func=cmd_parikh)

    p = sub.add_parser("alternation", help="Isolation over words with at most K letter blocks.")
    p.add_argument("path", help="Problem file (the language is ignored).")
    p.add_argument("--k", type=_positive, required=True, help="Number of letter blocks.")
    _engine_options(p)
    p.set_defaults(func=cmd_alternation)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.basicConfig(
            level=logging.DEBUG if args.verbose > 1 else logging.INFO,
            stream=sys.stderr,
            format="%(levelname)s %(name)s: %(message)s",
        )
    overrides = {}
    if getattr(args, "budget", None) is not None:
        overrides["node_budget"] = args.budget
    if getattr(args, "workers", None) is not None:
        overrides["workers"] = args.workers
    initialize(**overrides)
    try:
        return args.func(args)
    except IsoldeValidationError as e:
        _error("input", e, pointer=e.pointer, violations=e.violations)
        return EXIT_INPUT
    except IsoldeCapacityError as e:
        _error("capacity", e)
        return EXIT_RESOURCE
    except IsoldeResourceError as e:
        _error("resource", e)
        return EXIT_RESOURCE


def _error(kind: str, e: Exception, pointer=None, violations=None):
    doc = {"error": kind, "message": str(e)}
    if pointer is not None:
        doc["pointer"] = pointer
    if violations:
        doc["violations"] = list(violations)
    sys.stderr.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
