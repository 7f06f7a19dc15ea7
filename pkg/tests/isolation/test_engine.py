import itertools
import unittest
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from tests import setup_env  # noqa
from tests.helpers import HALVING, SWAP, halving_problem, identity_problem, swap_problem
from isolde import (
    FiniteWitness,
    Isolated,
    IsoldeCapacityError,
    IsoldeResourceError,
    IsoldeValidationError,
    IsolationEngine,
    LimitWitness,
    LinearSet,
    NonIsolated,
    Problem,
    RatMatrix,
    SemilinearSet,
    Settings,
    branch_constant,
    decide,
    decide_isolation,
    limit_system,
    limit_value_set,
    make_pfa,
    pfa_value,
    verify_witness,
)
from isolde.exactmath import mat_pow
from isolde.isolation import LimitValue
from isolde.stochastic import DecayCert, LimitSystem


class TestHalvingFamily(unittest.TestCase):
    """value(a^k) = 1 - 2^-k: every closed-form cutpoint of the family."""

    def test_attained(self):
        for lam, k in [("0", 0), ("1/2", 1), ("3/4", 2), ("7/8", 3)]:
            with self.subTest(lam=lam):
                verdict = decide_isolation(halving_problem(lam))
                self.assertEqual(verdict, NonIsolated(FiniteWitness((k,), 0)))

    def test_isolated(self):
        self.assertEqual(decide_isolation(halving_problem("9/10")), Isolated(Fraction(1, 40)))
        self.assertEqual(decide_isolation(halving_problem("1/3")), Isolated(Fraction(1, 6)))

    def test_limit(self):
        verdict = decide_isolation(halving_problem("1"))
        self.assertIsInstance(verdict, NonIsolated)
        w = verdict.witness
        self.assertIsInstance(w, LimitWitness)
        self.assertEqual(w.value, 1)
        self.assertEqual(w.free, (0,))
        self.assertEqual(w.modulus, 1)
        self.assertEqual(w.fixed, {})
        self.assertEqual(w.member(3), (3,))

    def test_trace(self):
        decision = decide(halving_problem("9/10"), trace=True)
        root = decision.trace[0]
        self.assertEqual(root["outcome"], "branched")
        self.assertEqual(root["free"], [0])
        self.assertEqual(root["modulus"], 1)
        self.assertEqual(root["limit_values"], [Fraction(1)])
        self.assertEqual(root["constant"], 12)
        self.assertEqual(root["epsilon"], Fraction(11, 160))
        leaves = decision.trace[1:]
        self.assertEqual([r["fixed"] for r in leaves], [{0: k} for k in range(12)])
        self.assertTrue(all(r["outcome"] == "leaf" for r in leaves))
        self.assertEqual(leaves[3]["value"], Fraction(7, 8))
        self.assertEqual(decision.nodes, 13)

    def test_no_trace_by_default(self):
        decision = decide(halving_problem("9/10"))
        self.assertEqual(decision.trace, [])
        self.assertEqual(decision.representatives, [])

    def test_node_budget(self):
        with self.assertRaises(IsoldeResourceError):
            decide_isolation(halving_problem("9/10"), settings=Settings(node_budget=5))


class TestPeriodic(unittest.TestCase):
    def test_swap(self):
        self.assertEqual(decide_isolation(swap_problem("1/2")), Isolated(Fraction(1, 2)))

    def test_swap_limit_at_odd_powers(self):
        verdict = decide_isolation(swap_problem("0"))
        self.assertEqual(
            verdict, NonIsolated(LimitWitness(0, LinearSet([0], [[1]]), (0,), (1,), 2, Fraction(0)))
        )
        self.assertEqual(verdict.witness.member(2), (5,))

    def test_identity(self):
        self.assertEqual(decide_isolation(identity_problem([1, 0], "1")), Isolated(Fraction(1)))
        verdict = decide_isolation(identity_problem([1, 0], "0"))
        self.assertIsInstance(verdict.witness, LimitWitness)


class TestLanguages(unittest.TestCase):
    def test_empty_language(self):
        prob = halving_problem("1/2")
        prob = Problem(prob.pfa, SemilinearSet(1), prob.lam)
        self.assertEqual(decide_isolation(prob), Isolated(Fraction(1), note="empty language"))

    def test_finite_language(self):
        prob = halving_problem("1/2")
        prob = Problem(prob.pfa, SemilinearSet(1, [LinearSet([2]), LinearSet([4])]), prob.lam)
        self.assertEqual(decide_isolation(prob), Isolated(Fraction(1, 4)))

    def test_two_letters(self):
        # a halves towards state 0, b swaps; value(a^i b^j) alternates around the limit
        pfa = make_pfa(["0", "1"], [1, 0], [HALVING, SWAP], names=["a", "b"])
        prob = Problem(pfa, SemilinearSet.full(2), Fraction(1, 2))
        w = decide_isolation(prob).witness
        # value(a b^j) is 1/2 for every j
        self.assertEqual(w.branch, LinearSet([1, 0], [[0, 1]]))
        self.assertEqual((w.free, w.residues, w.modulus, w.value), ((1,), (0,), 2, Fraction(1, 2)))
        self.assertTrue(verify_witness(prob, w))
        prob = Problem(pfa, SemilinearSet(2, [LinearSet([0, 0], [[1, 0]]), LinearSet([0, 1], [[1, 0]])]), Fraction(1, 3))
        self.assertIsInstance(decide_isolation(prob), Isolated)

    def test_workers_agree(self):
        pfa = halving_problem("0").pfa
        languages = [
            SemilinearSet(1, [LinearSet([0], [[2]]), LinearSet([1], [[2]])]),
            SemilinearSet(1, [LinearSet([5]), LinearSet([2]), LinearSet([1], [[3]])]),
        ]
        for language in languages:
            for lam in [Fraction(3, 4), Fraction(9, 10), Fraction(1)]:
                prob = Problem(pfa, language, lam)
                serial = decide_isolation(prob, settings=Settings(workers=1))
                parallel = decide_isolation(prob, settings=Settings(workers=2))
                self.assertEqual(serial, parallel)

    def test_first_component_wins(self):
        pfa = halving_problem("0").pfa
        prob = Problem(pfa, SemilinearSet(1, [LinearSet([5]), LinearSet([2]), LinearSet([2])]), Fraction(3, 4))
        for workers in (1, 3):
            verdict = decide_isolation(prob, settings=Settings(workers=workers))
            self.assertEqual(verdict, NonIsolated(FiniteWitness((2,), 1)))

    def test_workers_share_budget_in_component_order(self):
        pfa = halving_problem("0").pfa
        # the witness of the first component fits the budget; the infinite second one never does
        prob = Problem(pfa, SemilinearSet(1, [LinearSet([2]), LinearSet([3], [[1]])]), Fraction(3, 4))
        for workers in (1, 2, 4):
            decision = decide(prob, settings=Settings(node_budget=2, workers=workers))
            self.assertEqual(decision.verdict, NonIsolated(FiniteWitness((2,), 0)))
            self.assertEqual(decision.nodes, 1)

    def test_workers_exhaust_budget_alike(self):
        pfa = halving_problem("0").pfa
        # one node for the first leaf leaves nothing for the witness of the second
        prob = Problem(pfa, SemilinearSet(1, [LinearSet([5]), LinearSet([2])]), Fraction(3, 4))
        for workers in (1, 2):
            with self.assertRaises(IsoldeResourceError):
                decide_isolation(prob, settings=Settings(node_budget=1, workers=workers))
            verdict = decide_isolation(prob, settings=Settings(node_budget=2, workers=workers))
            self.assertEqual(verdict, NonIsolated(FiniteWitness((2,), 1)))

    def test_workers_same_trace_and_nodes(self):
        pfa = halving_problem("0").pfa
        language = SemilinearSet(1, [LinearSet([0], [[2]]), LinearSet([1], [[2]]), LinearSet([4])])
        prob = Problem(pfa, language, Fraction(9, 10))
        serial = decide(prob, settings=Settings(workers=1), trace=True)
        parallel = decide(prob, settings=Settings(workers=3), trace=True)
        self.assertEqual(serial, parallel)

    def test_caches_filled_from_threads(self):
        engine = IsolationEngine(halving_problem("1/2"))
        keys = [(0, k) for k in range(12)] * 8
        with ThreadPoolExecutor(max_workers=8) as pool:
            powers = list(pool.map(lambda key: engine.power(*key), keys))
            systems = list(pool.map(engine.system, [0] * 16))
        for (_, k), m in zip(keys, powers):
            self.assertEqual(m, mat_pow(RatMatrix(HALVING), k))
            self.assertIs(m, engine.power(0, k))
        self.assertTrue(all(ls is systems[0] for ls in systems))


class TestValidation(unittest.TestCase):
    def test_lambda_range(self):
        with self.assertRaises(IsoldeValidationError) as cm:
            decide_isolation(halving_problem("3/2"))
        self.assertEqual(len(cm.exception.violations), 1)

    def test_dimension(self):
        prob = halving_problem("1/2")
        with self.assertRaises(IsoldeValidationError):
            IsolationEngine(Problem(prob.pfa, SemilinearSet.full(2), prob.lam))

    def test_invalid_pfa(self):
        pfa = make_pfa(["1/2", "1/4"], [1, 0], [[[1, 0], [1, 1]]])
        with self.assertRaises(IsoldeValidationError) as cm:
            decide_isolation(Problem(pfa, SemilinearSet.full(1), Fraction(1, 2)))
        self.assertEqual(len(cm.exception.violations), 2)


class TestLimitValues(unittest.TestCase):
    def test_swap(self):
        prob = swap_problem("1/2")
        values = limit_value_set(prob.pfa, prob.language.components[0], [0])
        self.assertEqual(values, [LimitValue(Fraction(1), (0,)), LimitValue(Fraction(0), (1,))])

    def test_fixed_letters_keep_exact_powers(self):
        pfa = make_pfa(["0", "1"], [1, 0], [HALVING, SWAP], names=["a", "b"])
        q = LinearSet([0, 1], [[1, 0]])
        # a^inf sends everything to state 0, then one swap
        self.assertEqual(limit_value_set(pfa, q, [0]), [LimitValue(Fraction(0), (0,))])

    def test_no_free_letters(self):
        prob = halving_problem("1/2")
        values = limit_value_set(prob.pfa, LinearSet([2]), [])
        self.assertEqual(values, [LimitValue(Fraction(3, 4), ())])

    def test_residue_budget(self):
        prob = swap_problem("1/2")
        with self.assertRaises(IsoldeCapacityError):
            limit_value_set(prob.pfa, prob.language.components[0], [0], settings=Settings(residue_budget=1))


class TestBranchConstant(unittest.TestCase):
    def test_examples(self):
        halving = [limit_system(RatMatrix(HALVING))]
        one = [LimitValue(Fraction(1), (0,))]
        self.assertEqual(branch_constant(halving, Fraction(9, 10), one), 12)
        self.assertEqual(branch_constant(halving, Fraction(3, 4), one), 8)
        self.assertEqual(branch_constant(halving, Fraction(1, 3), one), 6)
        swap = [limit_system(RatMatrix(SWAP))]
        both = [LimitValue(Fraction(1), (0,)), LimitValue(Fraction(0), (1,))]
        self.assertEqual(branch_constant(swap, Fraction(1, 2), both), 1)


class TestBranchBounds(unittest.TestCase):
    """Beyond the branch constant every value keeps the recorded distance from lambda."""

    def check(self, prob):
        decision = decide(prob, trace=True)
        self.assertIsInstance(decision.verdict, Isolated)
        branched = [r for r in decision.trace if r["outcome"] == "branched"]
        self.assertTrue(branched)
        for record in branched:
            c = record["constant"]
            for values in itertools.product(range(c, c + 6), repeat=len(record["free"])):
                x = [0] * prob.pfa.letter_count
                for j, k in record["fixed"].items():
                    x[j] = k
                for j, k in zip(record["free"], values):
                    x[j] = k
                self.assertGreaterEqual(abs(pfa_value(prob.pfa, x) - prob.lam), record["epsilon"])

    def test_halving(self):
        self.check(halving_problem("9/10"))

    def test_two_letters(self):
        pfa = make_pfa(["0", "1"], [1, 0], [HALVING, SWAP], names=["a", "b"])
        self.check(Problem(pfa, SemilinearSet.full(2), Fraction(1, 3)))


class TestBranchConstantCertificates(unittest.TestCase):
    """err_bound(k) = 2^-k: D = 1, m0 = 1, K = 1."""

    def setUp(self):
        self.ls = LimitSystem(0, 1, RatMatrix.identity(2), DecayCert(1, Fraction(1)))
        # distance 1/4 from lambda, so the half distance is 1/8
        self.values = [LimitValue(Fraction(1), (0,))]

    def test_single(self):
        self.assertEqual(branch_constant([self.ls], Fraction(3, 4), self.values), 3)

    def test_two_letters(self):
        self.assertEqual(branch_constant([self.ls, self.ls], Fraction(3, 4), self.values), 4)

    def test_halving_limit_values(self):
        prob = halving_problem("1/2")
        self.assertEqual(limit_value_set(prob.pfa, prob.language.components[0], [0]), self.values)
