from fractions import Fraction

import isolde
from isolde import LinearSet, Problem, RatMatrix, SemilinearSet, make_pfa
from hypothesis import strategies as st

HALVING = [[1, 0], ["1/2", "1/2"]]
SWAP = [[0, 1], [1, 0]]


def halving_problem(lam) -> Problem:
    """value(a^k) = 1 - 2^-k on a*."""
    pfa = make_pfa(["0", "1"], [1, 0], [HALVING], names=["a"])
    return Problem(pfa, SemilinearSet.full(1), isolde.rat(lam))


def swap_problem(lam) -> Problem:
    pfa = make_pfa([1, 0], [1, 0], [SWAP], names=["a"])
    return Problem(pfa, SemilinearSet.full(1), isolde.rat(lam))


def identity_problem(initial, lam) -> Problem:
    pfa = make_pfa(initial, [0, 1], [[[1, 0], [0, 1]]], names=["a"])
    return Problem(pfa, SemilinearSet(1, [LinearSet([0], [[1]])]), isolde.rat(lam))


@st.composite
def stochastic_matrices(draw, max_n=5, max_den=6):
    """Row-stochastic matrices with entries k/d, d <= max_den."""
    n = draw(st.integers(min_value=1, max_value=max_n))
    rows = []
    for _ in range(n):
        d = draw(st.integers(min_value=1, max_value=max_den))
        cuts = sorted(draw(st.lists(st.integers(min_value=0, max_value=d), min_size=n - 1, max_size=n - 1)))
        bounds = [0] + cuts + [d]
        rows.append([Fraction(bounds[i + 1] - bounds[i], d) for i in range(n)])
    return RatMatrix(rows)
