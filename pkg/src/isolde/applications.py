"""Decision procedures built on the isolation engine, and the subset-sum gadget."""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exactmath import RatMatrix, dot, rat_str
from .exceptions import IsoldeCapacityError, IsoldeProgrammingError
from .isolation import (
    FiniteWitness,
    Isolated,
    LimitWitness,
    NonIsolated,
    Problem,
    Verdict,
    Witness,
    check_problem,
    decide,
    decide_isolation,
)
from .semilinear import LinearSet, SemilinearSet
from .settings import Settings, resolve
from .stochastic import PFA, Letter, pfa_value

logger = logging.getLogger(__name__)

CONSTRUCTIONS = ("additive", "original")


@dataclass(frozen=True)
class SubsetSumInstance:
    """Does some subset of ``values`` sum to ``target``?"""

    values: tuple
    target: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(x) for x in self.values))
        if not self.values:
            raise IsoldeProgrammingError("a subset sum instance needs at least one value")
        if any(x < 1 for x in self.values):
            raise IsoldeProgrammingError("subset sum values must be positive: {0}".format(self.values))
        if self.target < 0:
            raise IsoldeProgrammingError("subset sum target must be a natural number: {0}".format(self.target))

    @property
    def scale(self) -> int:
        """y = sum of (x_i + 1), the common denominator of every gadget word value."""
        return sum(x + 1 for x in self.values)


def _additive_letters(values: Sequence[int]) -> list:
    remaining = [sum(x + 1 for x in values[i:]) for i in range(len(values) + 1)]
    letters = []
    for i, x in enumerate(values):
        y, after = remaining[i], remaining[i + 1]
        keep = Fraction(after, y)
        a = [[keep, Fraction(x, y), Fraction(1, y)], [0, 1, 0], [0, 0, 1]]
        b = [[keep, 0, Fraction(x + 1, y)], [0, 1, 0], [0, 0, 1]]
        letters.append(Letter("a{0}".format(i + 1), RatMatrix(a)))
        letters.append(Letter("b{0}".format(i + 1), RatMatrix(b)))
    return letters


def _original_letters(values: Sequence[int]) -> list:
    letters = []
    for i, x in enumerate(values):
        a = RatMatrix([[1, x, 0], [0, 1, x], [0, 0, x + 1]]).scale(Fraction(1, x + 1))
        b = RatMatrix([[1, 0, x], [0, 1, x], [0, 0, x + 1]]).scale(Fraction(1, x + 1))
        letters.append(Letter("a{0}".format(i + 1), a))
        letters.append(Letter("b{0}".format(i + 1), b))
    return letters


def subset_sum_gadget(inst: SubsetSumInstance, construction: str = "additive") -> Problem:
    """Three-state problem whose cutpoint is isolated iff no subset of ``inst.values`` sums to the target.

    The alphabet is a1 b1 ... ak bk and the language is (a1|b1)...(ak|bk),
    given directly as its 2^k one-point components; choosing a_i puts x_i into
    the subset. The cutpoint is T / y.

    Args:
        inst: the instance
        construction: ``"additive"`` (every word value is exactly the chosen sum
            over y) or ``"original"`` (the classic A_i / B_i matrices, exact for k == 1)

    Returns:
        Problem: the gadget problem
    """
    if construction == "additive":
        letters = _additive_letters(inst.values)
    elif construction == "original":
        letters = _original_letters(inst.values)
    else:
        raise IsoldeProgrammingError(
            "unknown construction {0!r}, expected one of {1}".format(construction, CONSTRUCTIONS)
        )
    k = len(inst.values)
    pfa = PFA((Fraction(1), Fraction(0), Fraction(0)), (0, 1, 0), tuple(letters))
    components = []
    for choice in itertools.product((0, 1), repeat=k):
        base = [0] * (2 * k)
        for i, c in enumerate(choice):
            base[2 * i + c] = 1
        components.append(LinearSet(base))
    return Problem(pfa, SemilinearSet(2 * k, components), Fraction(inst.target, inst.scale))


def gadget_grammar(inst: SubsetSumInstance) -> str:
    """Grammar text of the gadget language, in the format read by :func:`isolde.grammar.parse_grammar`."""
    k = len(inst.values)
    alphabet = " ".join("a{0} b{0}".format(i + 1) for i in range(k))
    lines = ["alphabet: " + alphabet, "start: S"]
    lines.append("S -> " + " ".join("C{0}".format(i + 1) for i in range(k)))
    for i in range(k):
        lines.append("C{0} -> a{0} | b{0}".format(i + 1))
    return "\n".join(lines) + "\n"


def decode_subset(inst: SubsetSumInstance, exponents: Sequence[int]) -> tuple:
    """Indices of the values selected by a gadget word (the i with a_i present)."""
    if len(exponents) != 2 * len(inst.values):
        raise IsoldeProgrammingError(
            "expected {0} exponents, got {1}".format(2 * len(inst.values), len(exponents))
        )
    return tuple(i for i in range(len(inst.values)) if exponents[2 * i])


def subset_sum_brute_force(inst: SubsetSumInstance) -> Optional[tuple]:
    """First subset (as sorted indices, by size then lexicographically) summing to the target, or None."""
    n = len(inst.values)
    for size in range(n + 1):
        for subset in itertools.combinations(range(n), size):
            if sum(inst.values[i] for i in subset) == inst.target:
                return subset
    return None


@dataclass(frozen=True)
class Empty:
    """No word of the language reaches the cutpoint."""


@dataclass(frozen=True)
class NonEmpty:
    exponents: tuple
    value: Fraction


@dataclass(frozen=True)
class NotIsolated:
    """Emptiness was not decided because the cutpoint is not isolated."""

    witness: Witness


EmptinessOutcome = Union[Empty, NonEmpty, NotIsolated]


def emptiness_if_isolated(prob: Problem, settings: Optional[Settings] = None) -> EmptinessOutcome:
    """Decide whether some word of the language has value >= lambda, given an isolated cutpoint.

    Every value lies close to one of the representatives collected by the
    engine (exact leaf values and limit values) and is far from lambda, so a
    word above lambda exists iff some representative lies above lambda. A
    limit representative is turned into a concrete word by walking its
    residue family until the exact value crosses lambda.
    """
    decision = decide(prob, settings=settings, collect=True)
    if isinstance(decision.verdict, NonIsolated):
        return NotIsolated(decision.verdict.witness)
    lam = prob.lam
    above = [rep for rep in decision.representatives if rep.value > lam]
    for rep in above:
        if isinstance(rep.witness, FiniteWitness):
            logger.info("non-empty: %s has value %s", rep.witness.exponents, rat_str(rep.value))
            return NonEmpty(rep.witness.exponents, rep.value)
    for rep in above:
        exponents, value = _walk_family(prob, rep.witness)
        logger.info("non-empty: %s has value %s", exponents, rat_str(value))
        return NonEmpty(exponents, value)
    return Empty()


def _walk_family(prob: Problem, w: LimitWitness) -> tuple:
    m = 0
    while True:
        exponents = w.member(m)
        value = pfa_value(prob.pfa, exponents)
        if value > prob.lam:
            return exponents, value
        m += 1


def value_one(pfa: PFA, language: SemilinearSet, settings: Optional[Settings] = None) -> bool:
    """True iff words of the language have values arbitrarily close to (or equal to) 1."""
    verdict = decide_isolation(Problem(pfa, language, Fraction(1)), settings=settings)
    return isinstance(verdict, NonIsolated)


def bounded_alternation_isolation(
    pfa: PFA, k: int, lam: Fraction, settings: Optional[Settings] = None
) -> Verdict:
    """Isolation of ``lam`` over all words w_1^* ... w_k^* with each w_i a letter of ``pfa``.

    Each of the |alphabet|^k letter sequences becomes its own k-letter problem
    on N^k. The first non-isolated sequence decides; its letter names are
    kept in the verdict note.

    Raises:
        IsoldeCapacityError: if the number of sequences exceeds ``sequence_budget``
    """
    s = resolve(settings)
    if k < 1:
        raise IsoldeProgrammingError("alternation bound must be positive: {0}".format(k))
    if not pfa.letter_count:
        return _empty_word_verdict(pfa, lam)
    count = pfa.letter_count ** k
    if count > s.sequence_budget:
        raise IsoldeCapacityError(
            "{0} letter sequences exceed the budget of {1}".format(count, s.sequence_budget)
        )
    language = SemilinearSet.full(k)
    epsilon = None
    for sequence in itertools.product(range(pfa.letter_count), repeat=k):
        derived = pfa.restricted(sequence)
        verdict = decide_isolation(Problem(derived, language, lam), settings=s)
        names = " ".join(pfa.names[i] for i in sequence)
        if isinstance(verdict, NonIsolated):
            logger.info("sequence %s is not isolated", names)
            return NonIsolated(verdict.witness, note="letter sequence " + names)
        logger.debug("sequence %s isolated with epsilon %s", names, rat_str(verdict.epsilon))
        epsilon = verdict.epsilon if epsilon is None else min(epsilon, verdict.epsilon)
    return Isolated(epsilon)


def _empty_word_verdict(pfa: PFA, lam: Fraction) -> Verdict:
    # without letters every block is empty and the empty word is the only word
    prob = check_problem(Problem(pfa, SemilinearSet(0), lam))
    value = dot(prob.pfa.initial, prob.pfa.final)
    if value == prob.lam:
        return NonIsolated(FiniteWitness((), 0), note="empty word")
    return Isolated(abs(value - prob.lam), note="empty word")
