import unittest

from tests import setup_env  # noqa
from isolde import (
    IsoldeCapacityError,
    IsoldeValidationError,
    LinearSet,
    Settings,
    SubsetSumInstance,
    enumerate_points,
    is_stratified,
    parikh_image,
    parse_grammar,
    validate_letter_bounded,
)
from isolde.applications import gadget_grammar
from isolde.grammar import check_letter_bounded, enumerate_words, normalize, parikh_vector

ANBN = "alphabet: a b\nS -> a S b | ε\n"
ASTAR_BSTAR = """
alphabet: a b
S -> A B
A -> a A | eps
B -> b B |
"""

CORPUS = [
    ANBN,
    ASTAR_BSTAR,
    "alphabet: a\nS -> S S | a\n",
    "alphabet: a b c\nS -> a S c | B\nB -> b B | ε\n",
    "alphabet: a b\nS -> a S b b | a b | ε\n",
    "alphabet: a b c d\nS -> A C\nA -> a A b | ε\nC -> c C d | ε\n",
    "alphabet: a\nS -> T | a\nT -> S\n",
    "alphabet: a b\nS -> a a S | T\nT -> T b | b\n",
    "alphabet: a b c\nS -> a S | B C\nB -> b B b | b\nC -> c | C c c\n",
]


class TestParseGrammar(unittest.TestCase):
    def test_basic(self):
        g = parse_grammar(ANBN)
        self.assertEqual(g.alphabet, ("a", "b"))
        self.assertEqual(g.start, "S")
        self.assertEqual(g.productions["S"], (("a", "S", "b"), ()))

    def test_start_header_and_comments(self):
        g = parse_grammar("# example\nalphabet: a\nstart: T  # explicit\nS -> a\nT -> S S\n")
        self.assertEqual(g.start, "T")
        self.assertEqual(g.nonterminals, ("S", "T"))

    def test_empty_alternative(self):
        g = parse_grammar(ASTAR_BSTAR)
        self.assertIn((), g.productions["B"])
        self.assertIn((), g.productions["A"])

    def test_errors(self):
        bad = [
            "S -> a\n",
            "alphabet: a\nS -> c\n",
            "alphabet: a S\nS -> a\n",
            "alphabet: a\n",
            "alphabet: a\nhello\n",
            "alphabet: a a\nS -> a\n",
            "alphabet: a\nstart: T\nS -> a\n",
            "alphabet: a\nX Y -> a\n",
        ]
        for text in bad:
            with self.subTest(text=text):
                with self.assertRaises(IsoldeValidationError):
                    parse_grammar(text)


class TestNormalize(unittest.TestCase):
    def test_drops_useless(self):
        g = normalize(parse_grammar("alphabet: a\nS -> a | B\nB -> B a\nC -> a\n"))
        self.assertEqual(g.nonterminals, ("S",))
        self.assertEqual(g.productions, {"S": (("a",),)})

    def test_empty_language(self):
        g = normalize(parse_grammar("alphabet: a\nS -> a S\n"))
        self.assertEqual(g.nonterminals, ())


class TestEnumerateWords(unittest.TestCase):
    def test_anbn(self):
        g = parse_grammar(ANBN)
        self.assertEqual(enumerate_words(g, 4), {(), ("a", "b"), ("a", "a", "b", "b")})
        self.assertEqual(parikh_vector(g, ("a", "a", "b")), (2, 1))


class TestLetterBounded(unittest.TestCase):
    def test_bounded(self):
        for text in CORPUS:
            with self.subTest(text=text):
                self.assertIsNone(validate_letter_bounded(parse_grammar(text)))

    def test_wrong_order(self):
        self.assertEqual(validate_letter_bounded(parse_grammar("alphabet: a b\nS -> b a\n")), ("b", "a"))

    def test_shortest_violation(self):
        g = parse_grammar("alphabet: a b\nS -> a S | b S | ε\n")
        self.assertEqual(validate_letter_bounded(g), ("b", "a"))

    def test_other_order(self):
        g = parse_grammar(ANBN)
        self.assertEqual(validate_letter_bounded(g, order=("b", "a")), ("a", "b"))

    def test_check_raises(self):
        with self.assertRaises(IsoldeValidationError):
            check_letter_bounded(parse_grammar("alphabet: a b\nS -> a S | b S | ε\n"))


class TestParikhImage(unittest.TestCase):
    def test_anbn(self):
        image = parikh_image(parse_grammar(ANBN))
        self.assertEqual(image.components, (LinearSet([0, 0], [[1, 1]]),))
        self.assertTrue(is_stratified(image))

    def test_astar_bstar(self):
        image = parikh_image(parse_grammar(ASTAR_BSTAR))
        self.assertEqual(len(image.components), 1)
        comp = image.components[0]
        self.assertEqual(comp.base, (0, 0))
        self.assertEqual(set(comp.periods), {(1, 0), (0, 1)})

    def test_doubling(self):
        # pumps of S -> S S need the root label again off the spine
        image = parikh_image(parse_grammar("alphabet: a\nS -> S S | a\n"))
        self.assertEqual(image.components, (LinearSet([1], [[1]]),))

    def test_zero_pumps(self):
        image = parikh_image(parse_grammar("alphabet: a\nS -> T | a\nT -> S\n"))
        self.assertEqual(image.components, (LinearSet([1]),))

    def test_empty_language(self):
        image = parikh_image(parse_grammar("alphabet: a b\nS -> a S\n"))
        self.assertTrue(image.is_empty())
        self.assertEqual(image.dim, 2)

    def test_nested_is_stratified(self):
        image = parikh_image(parse_grammar(CORPUS[5]))
        self.assertTrue(is_stratified(image))

    def test_agrees_with_words(self):
        bound = 12
        grammars = list(CORPUS)
        for values in [(1,), (2, 3), (1, 1, 2)]:
            grammars.append(gadget_grammar(SubsetSumInstance(values, 1)))
        for text in grammars:
            with self.subTest(text=text):
                g = parse_grammar(text)
                expected = {parikh_vector(g, w) for w in enumerate_words(g, bound)}
                image = parikh_image(g)
                got = {x for x in enumerate_points(image, bound) if sum(x) <= bound}
                self.assertEqual(got, expected)
                self.assertTrue(is_stratified(image))

    def test_too_many_nonterminals(self):
        lines = ["alphabet: a", "S -> N1"]
        lines += ["N{0} -> N{1} | a".format(i, i + 1) for i in range(1, 9)]
        lines.append("N9 -> a")
        g = parse_grammar("\n".join(lines))
        with self.assertRaises(IsoldeCapacityError):
            parikh_image(g, settings=Settings(max_nonterminals=8))

    def test_summary_budget(self):
        with self.assertRaises(IsoldeCapacityError):
            parikh_image(parse_grammar(CORPUS[3]), settings=Settings(parikh_budget=2))
