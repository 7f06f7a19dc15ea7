"""Cutpoint isolation for PFA on letter-bounded languages.

The engine walks every linear component Q of the language's Parikh image.
At each branch the free indices R (coordinates that Q's periods can drive to
infinity) are either all sent to their limits, which yields finitely many
limit values, or one of them stays below a computable constant C. If some
limit value equals lambda the cutpoint is not isolated. Otherwise the engine
branches on every free index j and every k_j < C, fixing that coordinate, until
no free index remains and the exact value is compared with lambda. The minimum
of all distances recorded along the way is the separation bound.
"""
import itertools
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exactmath import lcm, mat_mul, mat_pow, rat_str
from .exceptions import IsoldeCapacityError, IsoldeException, IsoldeResourceError, IsoldeValidationError
from .semilinear import LinearSet, SemilinearSet, free_indices, fix_coordinate
from .settings import Settings, resolve
from .stochastic import (
    PFA,
    Finite,
    LimitSystem,
    assignment_matrices,
    assignment_value,
    err_bound,
    evaluate,
    limit_system,
    omega,
    pfa_value,
    validate_pfa,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Problem:
    """Is ``lam`` isolated for ``pfa`` on words whose Parikh vectors lie in ``language``?"""

    pfa: PFA
    language: SemilinearSet
    lam: Fraction


def check_problem(prob: Problem) -> Problem:
    violations = validate_pfa(prob.pfa)
    if not 0 <= prob.lam <= 1:
        violations.append("lambda {0} is outside [0, 1]".format(rat_str(prob.lam)))
    if prob.language.dim != prob.pfa.letter_count:
        violations.append(
            "language has dimension {0} but the PFA has {1} letters".format(
                prob.language.dim, prob.pfa.letter_count
            )
        )
    if violations:
        raise IsoldeValidationError("invalid problem: " + "; ".join(violations), violations=violations)
    return prob


@dataclass(frozen=True)
class FiniteWitness:
    """A word of the language whose value is exactly lambda."""

    exponents: tuple
    component: int = 0


@dataclass(frozen=True)
class LimitWitness:
    """A family of words whose values converge to lambda.

    Member m of the family takes parameters ``residues[i] + modulus * m`` in
    ``branch``; every free coordinate grows without bound and the value tends
    to the limit ``value``.
    """

    component: int
    branch: LinearSet
    free: tuple
    residues: tuple
    modulus: int
    value: Fraction

    @property
    def fixed(self) -> dict:
        return {j: x for j, x in enumerate(self.branch.base) if j not in self.free}

    def member(self, m: int) -> tuple:
        return self.branch.point([r + self.modulus * m for r in self.residues])


Witness = Union[FiniteWitness, LimitWitness]


@dataclass(frozen=True)
class Isolated:
    epsilon: Fraction
    note: Optional[str] = None


@dataclass(frozen=True)
class NonIsolated:
    witness: Witness
    note: Optional[str] = None


Verdict = Union[Isolated, NonIsolated]


@dataclass(frozen=True)
class LimitValue:
    value: Fraction
    residues: tuple


@dataclass(frozen=True)
class Representative:
    """A value the closure of the value set is built around: a leaf value or a limit value."""

    value: Fraction
    witness: Witness


@dataclass
class Decision:
    verdict: Verdict
    trace: list = field(default_factory=list)
    representatives: list = field(default_factory=list)
    nodes: int = 0


@dataclass
class _Outcome:
    """Result of exploring one component within ``limit`` branch nodes."""

    index: int
    limit: int
    epsilon: Optional[Fraction] = None
    witness: Optional[Witness] = None
    trace: list = field(default_factory=list)
    representatives: list = field(default_factory=list)
    nodes: int = 0
    error: Optional[IsoldeException] = None


class _Cancelled(Exception):
    """An earlier component already decides the verdict."""


def limit_value_set(
    pfa: PFA,
    q: LinearSet,
    free: Sequence[int],
    systems: Optional[dict] = None,
    settings: Optional[Settings] = None,
    power=None,
) -> list:
    """Distinct limit values of the families of ``q`` in which every parameter grows.

    With W the lcm of the free letters' periods, each parameter residue vector
    r mod W fixes every free exponent mod its period; the free letters are
    replaced by their limit matrices and the other letters keep their exact
    powers at ``q.base``.

    Returns:
        list[LimitValue]: one entry per distinct value, with the first residue vector reaching it

    Raises:
        IsoldeCapacityError: if W ** (number of periods) exceeds ``residue_budget``
    """
    s = resolve(settings)
    free = sorted(free)
    if systems is None:
        systems = {j: limit_system(pfa.matrix(j), j, settings=s) for j in free}
    power = power or (lambda j, k: mat_pow(pfa.matrix(j), k))
    if not free:
        return [LimitValue(_exact_value(pfa, q.base, power), ())]
    modulus = lcm(*(systems[j].period for j in free))
    count = modulus ** len(q.periods)
    if count > s.residue_budget:
        raise IsoldeCapacityError(
            "{0} residue vectors exceed the budget of {1}".format(count, s.residue_budget)
        )
    free_set = set(free)
    found = {}
    for residues in itertools.product(range(modulus), repeat=len(q.periods)):
        x = q.point(residues)
        assignment = [omega(systems[j], x[j]) if j in free_set else Finite(x[j]) for j in range(pfa.letter_count)]
        value = evaluate(pfa, assignment_matrices(pfa, assignment, systems, power))
        if value not in found:
            found[value] = LimitValue(value, residues)
    return list(found.values())


def _exact_value(pfa: PFA, exponents: Sequence[int], power) -> Fraction:
    return evaluate(pfa, [power(j, k) for j, k in enumerate(exponents)])


def branch_constant(systems: Sequence[LimitSystem], lam: Fraction, values: Sequence[LimitValue]) -> int:
    """Least C >= 1 with sum of err_bound(ls, C) <= half the distance from lambda to the limit values.

    When every free exponent is at least C the value lies within that sum of
    the matching limit value, hence at least half that distance away from lambda.
    """
    eps_half = min(abs(lv.value - lam) for lv in values) / 2
    k = 0
    while sum((err_bound(ls, k) for ls in systems), Fraction(0)) > eps_half:
        k += 1
    return max(k, 1)


class IsolationEngine(object):
    """Exhaustive deterministic exploration of the branch tree for one problem.

    Limit systems and matrix powers are cached per engine and shared by all
    branches.

    Examples:
        .. code-block:: python

            from isolde import IsolationEngine, Problem, SemilinearSet, make_pfa

            pfa = make_pfa(["0", "1"], [1, 0], [[[1, 0], ["1/2", "1/2"]]])
            prob = Problem(pfa, SemilinearSet.full(1), Fraction(9, 10))
            decision = IsolationEngine(prob).run()
            decision.verdict  # Isolated(epsilon=Fraction(1, 40))
    """

    def __init__(self, prob: Problem, settings: Optional[Settings] = None, trace: bool = False, collect: bool = False):
        self.prob = check_problem(prob)
        self.settings = resolve(settings)
        self.tracing = trace
        self.collect = collect
        self._systems = {}
        self._powers = {}
        self._lock = threading.RLock()
        self._cutoff = len(prob.language.components)

    def system(self, j: int) -> LimitSystem:
        with self._lock:
            ls = self._systems.get(j)
            if ls is None:
                ls = limit_system(self.prob.pfa.matrix(j), j, settings=self.settings)
                self._systems[j] = ls
        return ls

    def power(self, j: int, k: int):
        key = (j, k)
        with self._lock:
            m = self._powers.get(key)
            prev = self._powers.get((j, k - 1)) if m is None and k else None
        if m is None:
            # computed outside the lock; a concurrent fill stores the same matrix
            a = self.prob.pfa.matrix(j)
            m = mat_mul(prev, a) if prev is not None else mat_pow(a, k)
            with self._lock:
                m = self._powers.setdefault(key, m)
        return m

    def _tick(self, out: _Outcome):
        if out.index > self._cutoff:
            raise _Cancelled()
        out.nodes += 1
        if out.nodes > out.limit:
            raise IsoldeResourceError(
                "exploration exceeded the budget of {0} branch nodes".format(self.settings.node_budget)
            )

    def run(self) -> Decision:
        """Explore the components and reduce their outcomes in component order.

        Components share one node budget, counted in component order, and the
        first component holding a witness decides. The thread pool explores
        components concurrently but the reduction is the serial one, so the
        decision does not depend on ``workers``.

        Raises:
            IsoldeResourceError: if the branch nodes up to the deciding component exceed ``node_budget``
            IsoldeCapacityError: if a construction inside a component exceeds its capacity
        """
        prob = self.prob
        components = prob.language.components
        if not components:
            logger.info("empty language: lambda=%s is trivially isolated", rat_str(prob.lam))
            return Decision(verdict=Isolated(Fraction(1), note="empty language"))
        pending = frozenset(range(prob.pfa.letter_count))
        budget = self.settings.node_budget
        if self.settings.workers > 1 and len(components) > 1:
            with ThreadPoolExecutor(max_workers=self.settings.workers) as pool:
                outcomes = list(pool.map(lambda ic: self._component(ic[0], ic[1], pending, budget), enumerate(components)))
        else:
            outcomes = []
            used = 0
            for ci, comp in enumerate(components):
                out = self._component(ci, comp, pending, budget - used)
                outcomes.append(out)
                used += out.nodes
                if out.witness is not None or out.error is not None:
                    break
        decision = self._reduce(outcomes)
        logger.info(
            "lambda=%s: %s after %d branch nodes",
            rat_str(prob.lam),
            "isolated" if isinstance(decision.verdict, Isolated) else "not isolated",
            decision.nodes,
        )
        return decision

    def _reduce(self, outcomes: Sequence[_Outcome]) -> Decision:
        budget = self.settings.node_budget
        decision = Decision(verdict=None)
        epsilon = None
        for out in outcomes:
            decision.nodes += out.nodes
            if out.error is not None:
                raise out.error
            if decision.nodes > budget:
                raise IsoldeResourceError("exploration exceeded the budget of {0} branch nodes".format(budget))
            decision.trace.extend(out.trace)
            decision.representatives.extend(out.representatives)
            if out.witness is not None:
                decision.verdict = NonIsolated(out.witness)
                return decision
            epsilon = out.epsilon if epsilon is None else min(epsilon, out.epsilon)
        decision.verdict = Isolated(epsilon)
        return decision

    def _component(self, ci: int, comp: LinearSet, pending: frozenset, limit: int) -> _Outcome:
        out = _Outcome(index=ci, limit=limit)
        try:
            self._explore(ci, comp, pending, out)
        except _Cancelled:
            return out
        except IsoldeException as e:
            out.error = e
        if out.witness is not None or out.error is not None:
            with self._lock:
                self._cutoff = min(self._cutoff, ci)
        return out

    def _explore(self, ci: int, q: LinearSet, pending: frozenset, out: _Outcome) -> None:
        self._tick(out)
        prob = self.prob
        free = free_indices(q, pending)
        record = None
        if self.tracing:
            record = {
                "component": ci,
                "fixed": {j: q.base[j] for j in range(len(q.base)) if j not in free},
                "free": sorted(free),
            }
            out.trace.append(record)
        if not free:
            value = _exact_value(prob.pfa, q.base, self.power)
            witness = FiniteWitness(q.base, ci)
            if self.collect:
                out.representatives.append(Representative(value, witness))
            if record is not None:
                record.update(value=value, outcome="attained" if value == prob.lam else "leaf")
            if value == prob.lam:
                out.witness = witness
                return
            self._lower(out, abs(value - prob.lam))
            return

        systems = {j: self.system(j) for j in free}
        values = limit_value_set(prob.pfa, q, free, systems, self.settings, self.power)
        modulus = lcm(*(ls.period for ls in systems.values()))
        for lv in values:
            if self.collect or lv.value == prob.lam:
                witness = LimitWitness(ci, q, tuple(sorted(free)), lv.residues, modulus, lv.value)
                if self.collect:
                    out.representatives.append(Representative(lv.value, witness))
                if lv.value == prob.lam:
                    if record is not None:
                        record.update(modulus=modulus, limit_values=[v.value for v in values], outcome="limit-attained")
                    out.witness = witness
                    return

        ordered = [systems[j] for j in sorted(free)]
        constant = branch_constant(ordered, prob.lam, values)
        distance = min(abs(lv.value - prob.lam) for lv in values)
        residual = sum((err_bound(ls, constant) for ls in ordered), Fraction(0))
        self._lower(out, distance - residual)
        if record is not None:
            record.update(
                modulus=modulus,
                limit_values=[v.value for v in values],
                constant=constant,
                epsilon=distance - residual,
                outcome="branched",
            )
        logger.debug(
            "component %d base=%s free=%s: %d limit values, C=%d", ci, q.base, sorted(free), len(values), constant
        )
        for j in sorted(free):
            rest = free - {j}
            for k in range(constant):
                for sub in fix_coordinate(q, j, k):
                    self._explore(ci, sub, rest, out)
                    if out.witness is not None:
                        return

    @staticmethod
    def _lower(out: _Outcome, epsilon: Fraction):
        if out.epsilon is None or epsilon < out.epsilon:
            out.epsilon = epsilon


def decide(prob: Problem, settings: Optional[Settings] = None, trace: bool = False, collect: bool = False) -> Decision:
    """Run the isolation engine and return the verdict with its trace and representatives."""
    return IsolationEngine(prob, settings=settings, trace=trace, collect=collect).run()


def decide_isolation(prob: Problem, settings: Optional[Settings] = None) -> Verdict:
    """Decide whether ``prob.lam`` is isolated.

    Returns:
        Verdict: ``Isolated(epsilon)`` with a certified separation bound, or
        ``NonIsolated(witness)`` with an independently checkable witness

    Raises:
        IsoldeValidationError: invalid problem
        IsoldeCapacityError: a limit value computation exceeds its residue budget
        IsoldeResourceError: the exploration exceeds its node budget
    """
    return decide(prob, settings=settings).verdict


def verify_witness(prob: Problem, w: Witness, settings: Optional[Settings] = None) -> bool:
    """Check a non-isolation witness without re-running the search.

    A finite witness must lie in the language and evaluate exactly to lambda.
    A limit witness must describe a sub-family of one language component whose
    limit evaluates exactly to lambda, and members along the family must stay
    within the certified error bound of lambda while that bound shrinks.
    """
    s = resolve(settings)
    pfa = prob.pfa
    if isinstance(w, FiniteWitness):
        if len(w.exponents) != pfa.letter_count or any(k < 0 for k in w.exponents):
            return False
        return prob.language.contains(w.exponents) and pfa_value(pfa, w.exponents) == prob.lam

    if not 0 <= w.component < len(prob.language.components):
        return False
    comp = prob.language.components[w.component]
    branch = w.branch
    if branch.dim != pfa.letter_count or not comp.contains(branch.base):
        return False
    if any(p not in comp.periods for p in branch.periods):
        return False
    if tuple(sorted(free_indices(branch, range(branch.dim)))) != tuple(w.free) or not w.free:
        return False
    if len(w.residues) != len(branch.periods) or w.modulus < 1:
        return False
    systems = {j: limit_system(pfa.matrix(j), j, settings=s) for j in w.free}
    if any(w.modulus % systems[j].period for j in w.free):
        return False
    x = branch.point(w.residues)
    assignment = [omega(systems[j], x[j]) if j in systems else Finite(x[j]) for j in range(pfa.letter_count)]
    limit = assignment_value(pfa, assignment, systems)
    if limit != prob.lam or limit != w.value:
        return False

    # every free exponent grows by at least `modulus` per family step
    span = max(ls.period * ls.decay.m0 for ls in systems.values())
    stride = -(-span // w.modulus)
    bounds = []
    for i in range(1, s.witness_checks + 1):
        member = w.member(stride * i)
        bound = sum((err_bound(systems[j], member[j]) for j in w.free), Fraction(0))
        if abs(pfa_value(pfa, member) - prob.lam) > bound:
            return False
        bounds.append(bound)
    if any(b2 > b1 for b1, b2 in zip(bounds, bounds[1:])):
        return False
    return bounds[-1] == 0 or bounds[-1] < bounds[0]
