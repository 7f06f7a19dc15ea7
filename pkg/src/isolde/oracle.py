"""Brute-force ground truth for the decision engine.

Nothing here is used to reach a verdict; these functions enumerate, iterate
numerically and cross-check, so that the engine can be tested against
independent computations.
"""
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .exactmath import RatMatrix, mat_mul, rat_str, vec_mat, dot
from .isolation import (
    Isolated,
    NonIsolated,
    Problem,
    Verdict,
    limit_value_set,
    verify_witness,
)
from .semilinear import LinearSet, SemilinearSet, enumerate_points
from .settings import Settings, resolve
from .stochastic import PFA, Letter, LimitSystem, limit_system, pfa_value

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleReport:
    """Result of an exhaustive enumeration.

    Attributes:
        min_distance (Fraction): smallest |value - lambda| seen, None when nothing was enumerated
        argmin (tuple): first exponent tuple (lexicographically) reaching min_distance
        samples (int): number of language points evaluated
        bound (int): coordinate bound used
    """

    min_distance: Optional[Fraction]
    argmin: Optional[tuple]
    samples: int
    bound: int

    @property
    def unbounded(self) -> bool:
        return self.min_distance is None

    def to_json(self) -> dict:
        return {
            "min_distance": "inf" if self.min_distance is None else rat_str(self.min_distance),
            "argmin": None if self.argmin is None else list(self.argmin),
            "samples": self.samples,
            "bound": self.bound,
        }


class _Powers(object):
    """Incrementally built A^0..A^bound for each letter."""

    def __init__(self, pfa: PFA):
        self.pfa = pfa
        self._cache = [[RatMatrix.identity(pfa.n)] for _ in range(pfa.letter_count)]

    def get(self, j: int, k: int) -> RatMatrix:
        seq = self._cache[j]
        while len(seq) <= k:
            seq.append(mat_mul(seq[-1], self.pfa.matrix(j)))
        return seq[k]


def brute_force_min_distance(prob: Problem, bound: int) -> OracleReport:
    """Evaluate every language point with coordinates <= ``bound`` exactly."""
    powers = _Powers(prob.pfa)
    best = None
    argmin = None
    samples = 0
    for x in enumerate_points(prob.language, bound):
        row = prob.pfa.initial
        for j, k in enumerate(x):
            if k:
                row = vec_mat(row, powers.get(j, k))
        distance = abs(dot(row, prob.pfa.final) - prob.lam)
        samples += 1
        if best is None or distance < best:
            best, argmin = distance, x
    return OracleReport(best, argmin, samples, bound)


def numeric_limit_check(a: RatMatrix, ls: LimitSystem, iterations: int) -> float:
    """Max entrywise |B^iterations - P| in floating point, with B = A^D."""
    b = np.linalg.matrix_power(_floats(a), ls.period)
    iterated = np.linalg.matrix_power(b, iterations)
    return float(np.max(np.abs(iterated - _floats(ls.projection))))


def _floats(m: RatMatrix) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in m], dtype=np.float64)


@dataclass(frozen=True)
class ConsistencyReport:
    passed: bool
    diagnostics: str
    counterexample: Optional[tuple] = None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "diagnostics": self.diagnostics,
            "counterexample": None if self.counterexample is None else list(self.counterexample),
        }


def check_verdict(prob: Problem, verdict: Verdict, bound: int, settings: Optional[Settings] = None) -> ConsistencyReport:
    """Cross-check a verdict: epsilon against enumeration, witnesses by verification."""
    if isinstance(verdict, NonIsolated):
        if verify_witness(prob, verdict.witness, settings=settings):
            return ConsistencyReport(True, "witness verified")
        return ConsistencyReport(False, "witness does not verify: {0!r}".format(verdict.witness))
    if not isinstance(verdict, Isolated):
        raise TypeError("not a verdict: {0!r}".format(verdict))
    if verdict.epsilon <= 0:
        return ConsistencyReport(False, "epsilon {0} is not positive".format(rat_str(verdict.epsilon)))
    report = brute_force_min_distance(prob, bound)
    if report.min_distance is not None and report.min_distance < verdict.epsilon:
        return ConsistencyReport(
            False,
            "{0} has distance {1} < epsilon {2}".format(
                report.argmin, rat_str(report.min_distance), rat_str(verdict.epsilon)
            ),
            report.argmin,
        )
    return ConsistencyReport(True, "{0} points within distance bound".format(report.samples))


def _stochastic_row(rng: random.Random, n: int) -> list:
    denominator = rng.randint(1, 4)
    row = [0] * n
    for _ in range(denominator):
        row[rng.randrange(n)] += 1
    return [Fraction(x, denominator) for x in row]


def _random_language(rng: random.Random, dim: int) -> SemilinearSet:
    units = [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    choice = rng.randrange(4)
    if choice == 0 or dim == 1 and choice == 3:
        return SemilinearSet.full(dim)
    if choice == 1:
        base = [rng.randint(0, 2) for _ in range(dim)]
        return SemilinearSet(dim, [LinearSet(base, [rng.choice(units)])])
    if choice == 2:
        base = [rng.randint(0, 1) for _ in range(dim)]
        period = [rng.randint(1, 2) for _ in range(dim)]
        return SemilinearSet(dim, [LinearSet(base, [period]), LinearSet([0] * dim)])
    # a^n b^n plus its shifted copy
    return SemilinearSet(dim, [LinearSet([0, 0], [(1, 1)]), LinearSet([1, 0], [(1, 1)])])


def random_problem(seed: int, settings: Optional[Settings] = None) -> Problem:
    """Deterministic random problem: n <= 3 states, at most 2 letters, denominators <= 4.

    Lambda is an attained value, a limit value, or one of those moved by 1/64
    (clamped to [0, 1]).
    """
    s = resolve(settings)
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    dim = rng.randint(1, 2)
    letters = []
    for j in range(dim):
        rows = [_stochastic_row(rng, n) for _ in range(n)]
        letters.append(Letter("a{0}".format(j + 1), RatMatrix(rows)))
    initial = tuple(_stochastic_row(rng, n))
    final = tuple(rng.randint(0, 1) for _ in range(n))
    pfa = PFA(initial, final, tuple(letters))
    language = _random_language(rng, dim)

    comp = language.components[rng.randrange(len(language.components))]
    candidates = [pfa_value(pfa, comp.point([rng.randint(0, 3) for _ in comp.periods]))]
    free = sorted({j for p in comp.periods for j, x in enumerate(p) if x})
    if free:
        systems = {j: limit_system(pfa.matrix(j), j, settings=s) for j in free}
        candidates.extend(lv.value for lv in limit_value_set(pfa, comp, free, systems, s))
    lam = rng.choice(candidates)
    shift = rng.choice((0, 0, Fraction(1, 64), Fraction(-1, 64)))
    lam = min(max(lam + shift, Fraction(0)), Fraction(1))
    return Problem(pfa, language, lam)
