"""PFA data model, exact word values, and the limits of stochastic matrix powers.

For a row-stochastic matrix A the sequence A, A^2, ... has finitely many limit
points. With D the dominant period (lcm of the orders of the root-of-unity
eigenvalues), A^(Dm + r) converges to P A^r as m grows, where P is the limit of
(A^D)^m. Everything is computed over the rationals: root-of-unity detection
through cyclotomic divisibility, P from the minimal polynomial of A^D, and the
speed of convergence from norms of powers of A^D - P.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exactmath import (
    ONE,
    RatMatrix,
    RatPoly,
    ZERO,
    char_poly,
    cyclotomic,
    dot,
    inf_norm,
    is_row_stochastic,
    lcm,
    mat_mul,
    mat_pow,
    min_poly,
    poly_divides,
    poly_divmod,
    poly_eval,
    rat,
    rat_str,
    vec_mat,
)
from .exceptions import IsoldeCapacityError, IsoldeProgrammingError, IsoldeValidationError
from .settings import Settings, resolve

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Letter:
    name: str
    matrix: RatMatrix


@dataclass(frozen=True)
class PFA:
    """Probabilistic finite automaton over an ordered letter alphabet.

    Attributes:
        initial (tuple[Fraction]): initial distribution u
        final (tuple[int]): 0/1 indicator v of the final states
        letters (tuple[Letter]): letters a_1..a_l in alphabet order, one row-stochastic matrix each
    """

    initial: tuple
    final: tuple
    letters: tuple = ()

    @property
    def n(self) -> int:
        return len(self.initial)

    @property
    def letter_count(self) -> int:
        return len(self.letters)

    @property
    def names(self) -> tuple:
        return tuple(letter.name for letter in self.letters)

    def matrix(self, index: int) -> RatMatrix:
        return self.letters[index].matrix

    def restricted(self, indices: Sequence[int]) -> "PFA":
        """PFA whose i-th letter is this PFA's ``indices[i]``-th letter.

        A letter used more than once is renamed ``name.i`` at each position i (1-based).
        """
        repeated = {i for i in indices if list(indices).count(i) > 1}
        letters = []
        for pos, i in enumerate(indices, 1):
            letter = self.letters[i]
            if i in repeated:
                letter = Letter("{0}.{1}".format(letter.name, pos), letter.matrix)
            letters.append(letter)
        return PFA(self.initial, self.final, tuple(letters))


def make_pfa(initial, final, matrices, names=None) -> PFA:
    """Build a :class:`PFA` from plain nested lists, without validating it."""
    names = names or ["a{0}".format(i + 1) for i in range(len(matrices))]
    return PFA(
        tuple(rat(x) for x in initial),
        tuple(int(x) for x in final),
        tuple(Letter(name, m if isinstance(m, RatMatrix) else RatMatrix(m)) for name, m in zip(names, matrices)),
    )


def validate_pfa(p: PFA) -> list:
    """Collect every violated PFA constraint.

    Returns:
        list[str]: violations, empty when the PFA is valid
    """
    violations = []
    n = p.n
    if n == 0:
        violations.append("initial distribution is empty")
    if any(x < 0 for x in p.initial):
        for i, x in enumerate(p.initial):
            if x < 0:
                violations.append("initial[{0}] is negative: {1}".format(i, rat_str(x)))
    total = sum(p.initial, ZERO)
    if n and total != 1:
        violations.append("initial distribution sums to {0}".format(rat_str(total)))
    if len(p.final) != n:
        violations.append("final vector has length {0}, expected {1}".format(len(p.final), n))
    for i, x in enumerate(p.final):
        if x not in (0, 1):
            violations.append("final[{0}] is {1}, expected 0 or 1".format(i, x))
    names = [letter.name for letter in p.letters]
    for name in sorted({x for x in names if names.count(x) > 1}):
        violations.append("letter name {0!r} is used more than once".format(name))
    for letter in p.letters:
        m = letter.matrix
        if m.shape != (n, n):
            violations.append(
                "matrix of letter {0!r} is {1}x{2}, expected {3}x{3}".format(letter.name, m.rows, m.cols, n)
            )
            continue
        for i, row in enumerate(m):
            for j, x in enumerate(row):
                if x < 0:
                    violations.append(
                        "entry ({0}, {1}) of letter {2!r} is negative: {3}".format(i, j, letter.name, rat_str(x))
                    )
            s = sum(row, ZERO)
            if s != 1:
                violations.append("row {0} of letter {1!r} sums to {2}".format(i, letter.name, rat_str(s)))
    return violations


def check_pfa(p: PFA) -> PFA:
    """Return ``p`` unchanged, or raise with every violation listed."""
    violations = validate_pfa(p)
    if violations:
        raise IsoldeValidationError("invalid PFA: " + "; ".join(violations), violations=violations)
    return p


def evaluate(p: PFA, matrices: Sequence[RatMatrix]) -> Fraction:
    """<u| M_1 ... M_k |v> for an explicit matrix sequence."""
    row = p.initial
    for m in matrices:
        row = vec_mat(row, m)
    return dot(row, p.final)


def pfa_value(p: PFA, ks: Sequence[int]) -> Fraction:
    """Exact value <u| A_1^k_1 ... A_l^k_l |v> of the word a_1^k_1 ... a_l^k_l."""
    if len(ks) != p.letter_count:
        raise IsoldeProgrammingError(
            "expected {0} exponents, got {1}".format(p.letter_count, len(ks))
        )
    row = p.initial
    for letter, k in zip(p.letters, ks):
        if k < 0:
            raise IsoldeProgrammingError("negative exponent: {0}".format(k))
        if k:
            row = vec_mat(row, mat_pow(letter.matrix, k))
    return dot(row, p.final)


def _require_stochastic(a: RatMatrix):
    if not is_row_stochastic(a):
        raise IsoldeProgrammingError("row-stochastic matrix required: {0!r}".format(a))


def dominant_period(a: RatMatrix) -> int:
    """lcm of the k <= n such that the k-th cyclotomic polynomial divides char_poly(a).

    Every modulus-1 eigenvalue of a stochastic matrix is a root of unity of
    order at most n, so these are exactly the orders of its dominant eigenvalues.
    """
    _require_stochastic(a)
    cp = char_poly(a)
    orders = [k for k in range(1, a.rows + 1) if poly_divides(cyclotomic(k), cp)]
    return lcm(*orders)


def power_projection(a: RatMatrix, period: int) -> RatMatrix:
    """Limit P of (a^period)^m, as h(B)/h(1) where min_poly(B) = (x - 1) h(x).

    Raises:
        IsoldeProgrammingError: if 1 is not a semisimple eigenvalue of B, which
            only happens when ``a`` is not stochastic or ``period`` is wrong
    """
    b = mat_pow(a, period)
    m = min_poly(b)
    h, rem = poly_divmod(m, RatPoly([-1, 1]))
    if not rem.is_zero():
        raise IsoldeProgrammingError("1 is not an eigenvalue of A^{0}".format(period))
    h1 = h(ONE)
    if h1 == 0:
        raise IsoldeProgrammingError("eigenvalue 1 of A^{0} is not semisimple".format(period))
    return poly_eval(h, b).scale(1 / h1)


@dataclass(frozen=True)
class DecayCert:
    """Certificate of geometric decay of ||A^k - P A^(k mod D)||.

    Attributes:
        m0 (int): power with ||(B - P)^m0|| <= 1/2
        K (Fraction): constant such that the residual at k is at most K * 2^-(floor(floor(k/D)/m0))
    """

    m0: int
    K: Fraction


@dataclass(frozen=True)
class LimitSystem:
    """Limit data of one letter.

    Attributes:
        index (int): letter index
        period (int): dominant period D
        projection (RatMatrix): P = lim (A^D)^m
        decay (DecayCert): certified convergence speed
    """

    index: int
    period: int
    projection: RatMatrix
    decay: DecayCert


def decay_certificate(a: RatMatrix, period: int, projection: RatMatrix, ceiling: int = 2**16) -> DecayCert:
    """Find m0 by doubling so that ||(B - P)^m0|| <= 1/2, then the matching constant K.

    Since B^q - P = (B - P)^q for q >= 1, writing q = s*m0 + t gives
    ||B^q - P|| <= 2^-s ||(B - P)^t|| when t >= 1 and <= 2 h 2^-s when t = 0
    (h the norm at m0); q = 0 is covered by ||I - P||. K is the max of these factors.

    Raises:
        IsoldeCapacityError: if no power up to ``ceiling`` decays enough
    """
    b = mat_pow(a, period)
    residual = b - projection
    m0 = 1
    power = residual
    while inf_norm(power) > HALF:
        m0 *= 2
        if m0 > ceiling:
            raise IsoldeCapacityError(
                "residual of A^{0} does not halve within {1} steps; is the matrix stochastic?".format(period, ceiling)
            )
        power = mat_mul(power, power)
    factors = [inf_norm(RatMatrix.identity(a.rows) - projection), 2 * inf_norm(power)]
    partial = residual
    for _ in range(1, m0):
        factors.append(inf_norm(partial))
        partial = mat_mul(partial, residual)
    return DecayCert(m0=m0, K=max(factors))


def limit_system(a: RatMatrix, index: int = 0, settings: Optional[Settings] = None) -> LimitSystem:
    """Compute the full :class:`LimitSystem` of one letter matrix."""
    s = resolve(settings)
    period = dominant_period(a)
    projection = power_projection(a, period)
    decay = decay_certificate(a, period, projection, ceiling=s.decay_ceiling)
    logger.debug(
        "letter %d: period=%d m0=%d K=%s", index, period, decay.m0, rat_str(decay.K)
    )
    return LimitSystem(index=index, period=period, projection=projection, decay=decay)


def limit_matrix(ls: LimitSystem, a: RatMatrix, residue: int) -> RatMatrix:
    """lim_m A^(Dm + residue) = P A^(residue mod D)."""
    if residue < 0:
        raise IsoldeProgrammingError("negative residue: {0}".format(residue))
    return mat_mul(ls.projection, mat_pow(a, residue % ls.period))


def err_bound(ls: LimitSystem, k: int) -> Fraction:
    """Certified upper bound on ||A^k - limit_matrix(ls, A, k)||; non-increasing in k."""
    halvings = (k // ls.period) // ls.decay.m0
    return ls.decay.K / (2 ** halvings)


@dataclass(frozen=True)
class Finite:
    k: int


@dataclass(frozen=True)
class Omega:
    residue: int


Exponent = Union[Finite, Omega]


def omega(ls: LimitSystem, residue: int) -> Omega:
    """Omega exponent with its residue canonicalized mod the letter's period."""
    return Omega(residue % ls.period)


def assignment_matrices(p: PFA, assignment: Sequence[Exponent], systems: dict, power=None) -> list:
    """Matrices of an exponent assignment: exact powers for Finite, limit matrices for Omega.

    Args:
        p: the PFA
        assignment: one Finite or Omega per letter
        systems: LimitSystem per letter index (needed for Omega letters only)
        power: optional ``power(index, k)`` returning the cached matrix power
    """
    power = power or (lambda index, k: mat_pow(p.matrix(index), k))
    out = []
    for index, e in enumerate(assignment):
        if isinstance(e, Finite):
            out.append(power(index, e.k))
        else:
            ls = systems[index]
            out.append(mat_mul(ls.projection, power(index, e.residue % ls.period)))
    return out


def assignment_value(p: PFA, assignment: Sequence[Exponent], systems: dict) -> Fraction:
    """Value of the PFA with some letters taken to their limit powers."""
    return evaluate(p, assignment_matrices(p, assignment, systems))
