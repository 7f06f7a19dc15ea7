import unittest

from hypothesis import given
from hypothesis import strategies as st

from tests import setup_env  # noqa
from isolde import (
    IsoldeProgrammingError,
    LinearSet,
    SemilinearSet,
    enumerate_points,
    fix_coordinate,
    free_indices,
    is_stratified,
)


vectors2 = st.lists(st.integers(min_value=0, max_value=3), min_size=2, max_size=2)


class TestLinearSet(unittest.TestCase):
    def test_drops_zero_and_repeated_periods(self):
        q = LinearSet([1, 0], [[1, 1], [0, 0], [1, 1]])
        self.assertEqual(q.base, (1, 0))
        self.assertEqual(q.periods, ((1, 1),))

    def test_rejects_bad_vectors(self):
        with self.assertRaises(IsoldeProgrammingError):
            LinearSet([-1, 0])
        with self.assertRaises(IsoldeProgrammingError):
            LinearSet([0, 0], [[1]])
        with self.assertRaises(IsoldeProgrammingError):
            SemilinearSet(2, [LinearSet([0])])

    def test_contains(self):
        q = LinearSet([1], [[2], [3]])
        self.assertTrue(q.contains([1]))
        self.assertFalse(q.contains([2]))
        self.assertTrue(q.contains([3]))
        self.assertTrue(q.contains([4]))
        self.assertTrue(q.contains([6]))
        self.assertFalse(q.contains([0]))
        self.assertFalse(q.contains([1, 0]))

    def test_point(self):
        q = LinearSet([1, 0], [[1, 1], [0, 2]])
        self.assertEqual(q.point([0, 0]), (1, 0))
        self.assertEqual(q.point([2, 1]), (3, 4))

    def test_full(self):
        s = SemilinearSet.full(3)
        self.assertTrue(s.contains((0, 5, 2)))
        self.assertFalse(s.is_empty())
        self.assertTrue(SemilinearSet(2).is_empty())
        self.assertFalse(SemilinearSet(2).contains((0, 0)))

    @given(vectors2, st.lists(vectors2, max_size=2), st.lists(st.integers(min_value=0, max_value=3), min_size=2, max_size=2))
    def test_points_are_members(self, base, periods, params):
        q = LinearSet(base, periods)
        self.assertTrue(q.contains(q.point(params)))


class TestFixCoordinate(unittest.TestCase):
    def test_unit_periods(self):
        q = LinearSet([0, 0], [[1, 0], [0, 1]])
        self.assertEqual(fix_coordinate(q, 0, 3), [LinearSet([3, 0], [[0, 1]])])

    def test_shared_period(self):
        q = LinearSet([0, 0], [[1, 1]])
        self.assertEqual(fix_coordinate(q, 0, 2), [LinearSet([2, 2])])

    def test_several_touching_periods(self):
        q = LinearSet([0, 0], [[1, 0], [2, 1]])
        self.assertEqual(fix_coordinate(q, 0, 2), [LinearSet([2, 1]), LinearSet([2, 0])])

    def test_below_base(self):
        self.assertEqual(fix_coordinate(LinearSet([3], [[1]]), 0, 1), [])

    def test_untouched_coordinate(self):
        q = LinearSet([1, 0], [[0, 1]])
        self.assertEqual(fix_coordinate(q, 0, 1), [q])
        self.assertEqual(fix_coordinate(q, 0, 2), [])

    @given(vectors2, st.lists(vectors2, max_size=3), st.integers(min_value=0, max_value=1), st.integers(min_value=0, max_value=6))
    def test_slices_partition_the_coordinate(self, base, periods, j, value):
        q = LinearSet(base, periods)
        subs = fix_coordinate(q, j, value)
        for sub in subs:
            self.assertEqual(sub.base[j], value)
            self.assertFalse(any(p[j] for p in sub.periods))
        bound = 8
        expected = {x for x in enumerate_points(SemilinearSet(2, [q]), bound) if x[j] == value}
        got = set(enumerate_points(SemilinearSet(2, subs), bound))
        self.assertEqual(got, expected)


class TestFreeIndices(unittest.TestCase):
    def test_free_indices(self):
        q = LinearSet([0, 0, 0], [[1, 0, 0], [0, 0, 2]])
        self.assertEqual(free_indices(q, {0, 1, 2}), frozenset({0, 2}))
        self.assertEqual(free_indices(q, {1, 2}), frozenset({2}))
        self.assertEqual(free_indices(LinearSet([4, 4]), {0, 1}), frozenset())


class TestStratified(unittest.TestCase):
    def test_unit_periods(self):
        self.assertTrue(is_stratified(SemilinearSet.full(3)))

    def test_wide_period(self):
        self.assertFalse(is_stratified(SemilinearSet(3, [LinearSet([0, 0, 0], [[1, 1, 1]])])))

    def test_interlaced_supports(self):
        s = SemilinearSet(4, [LinearSet([0] * 4, [[1, 0, 1, 0], [0, 1, 0, 1]])])
        self.assertFalse(is_stratified(s))

    def test_nested_supports(self):
        s = SemilinearSet(4, [LinearSet([0] * 4, [[1, 0, 0, 1], [0, 1, 1, 0]])])
        self.assertTrue(is_stratified(s))


class TestEnumeratePoints(unittest.TestCase):
    def test_sorted_and_distinct(self):
        s = SemilinearSet(2, [LinearSet([0, 0], [[1, 1]]), LinearSet([1, 0]), LinearSet([0, 0])])
        self.assertEqual(list(enumerate_points(s, 2)), [(0, 0), (1, 0), (1, 1), (2, 2)])

    def test_base_out_of_bound(self):
        s = SemilinearSet(1, [LinearSet([5], [[1]])])
        self.assertEqual(list(enumerate_points(s, 4)), [])

    def test_shared_points_across_components(self):
        s = SemilinearSet(1, [LinearSet([0], [[2]]), LinearSet([0], [[3]])])
        self.assertEqual(list(enumerate_points(s, 6)), [(0,), (2,), (3,), (4,), (6,)])

    @given(st.lists(st.tuples(vectors2, st.lists(vectors2, max_size=2)), min_size=1, max_size=3))
    def test_agrees_with_membership(self, comps):
        s = SemilinearSet(2, [LinearSet(b, ps) for b, ps in comps])
        bound = 5
        points = set(enumerate_points(s, bound))
        for x in range(bound + 1):
            for y in range(bound + 1):
                self.assertEqual((x, y) in points, s.contains((x, y)))
