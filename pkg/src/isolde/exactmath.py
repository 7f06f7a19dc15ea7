"""Exact rational scalars, matrices and univariate polynomials.

Values handed to the rest of the package are :class:`fractions.Fraction`;
products, powers, elimination and polynomial algebra run on sympy's
``DomainMatrix`` and ``Poly`` over ``QQ``. No value ever passes through a
float. Matrices and polynomials are immutable, so they can be shared freely
between branch workers.
"""
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Optional, Sequence, Union

from sympy import Poly, QQ, Symbol, cyclotomic_poly
from sympy.polys.matrices import DomainMatrix

from .exceptions import IsoldeProgrammingError

Rat = Fraction
RatLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)

X = Symbol("x")


def rat(value: RatLike) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string into an exact rational.

    Floats are refused: they would carry binary rounding into a decision.

    Args:
        value: integer, Fraction or rational literal
    Returns:
        Fraction: the value in lowest terms
    """
    if isinstance(value, bool):
        raise IsoldeProgrammingError("booleans are not rationals: {0!r}".format(value))
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        # Fraction() also accepts decimals and exponents; rat-strings are p/q only
        text = value.strip()
        num, _, den = text.partition("/")
        if not _is_int_literal(num) or (den and not den.isdigit()):
            raise ValueError("invalid rational literal: {0!r}".format(value))
        return Fraction(text)
    raise IsoldeProgrammingError("not an exact rational: {0!r}".format(value))


def _is_int_literal(text: str) -> bool:
    return text.lstrip("+-").isdigit() and text.count("-") + text.count("+") <= 1


def rat_str(value: Fraction) -> str:
    """Canonical ``p/q`` (or integer) literal for a rational."""
    if value.denominator == 1:
        return str(value.numerator)
    return "{0}/{1}".format(value.numerator, value.denominator)


def lcm(*values: int) -> int:
    return math.lcm(*values)


def to_qq(value: Fraction):
    """Fraction to an element of sympy's ``QQ``."""
    return QQ(value.numerator, value.denominator)


def from_qq(value) -> Fraction:
    # QQ elements are PythonMPQ or gmpy2.mpq depending on the ground types
    return Fraction(int(value.numerator), int(value.denominator))


class RatMatrix(object):
    """Rectangular matrix of exact rationals.

    Entries read back as Fractions; arithmetic goes through the equivalent
    ``DomainMatrix`` over ``QQ``, built on first use.

    Examples:
        .. code-block:: python

            from isolde.exactmath import RatMatrix, mat_pow

            a = RatMatrix([[1, 0], ["1/2", "1/2"]])
            mat_pow(a, 3)  # RatMatrix([[1, 0], [7/8, 1/8]])
    """

    __slots__ = ("_rows", "_domain")

    def __init__(self, rows: Iterable[Iterable[RatLike]]):
        data = tuple(tuple(rat(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise IsoldeProgrammingError("matrix must have at least one row and one column")
        width = len(data[0])
        for i, row in enumerate(data):
            if len(row) != width:
                raise IsoldeProgrammingError(
                    "row {0} has {1} entries, expected {2}".format(i, len(row), width)
                )
        self._rows = data
        self._domain = None

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls([[ZERO] * cols for _ in range(rows)])

    @classmethod
    def from_domain(cls, dm: DomainMatrix) -> "RatMatrix":
        m = cls([[from_qq(x) for x in row] for row in dm.to_list()])
        m._domain = dm
        return m

    def to_domain(self) -> DomainMatrix:
        if self._domain is None:
            self._domain = DomainMatrix([[to_qq(x) for x in row] for row in self._rows], self.shape, QQ)
        return self._domain

    @property
    def rows(self) -> int:
        return len(self._rows)

    @property
    def cols(self) -> int:
        return len(self._rows[0])

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self._rows)

    def __getitem__(self, index):
        i, j = index
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def entries(self) -> tuple:
        return tuple(x for row in self._rows for x in row)

    def _require_square(self):
        if not self.is_square():
            raise IsoldeProgrammingError("square matrix required, got {0}x{1}".format(*self.shape))

    def _require_same_shape(self, other: "RatMatrix"):
        if self.shape != other.shape:
            raise IsoldeProgrammingError(
                "dimension mismatch: {0}x{1} vs {2}x{3}".format(*self.shape, *other.shape)
            )

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._require_same_shape(other)
        return RatMatrix.from_domain(self.to_domain() + other.to_domain())

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._require_same_shape(other)
        return RatMatrix.from_domain(self.to_domain() - other.to_domain())

    def __neg__(self) -> "RatMatrix":
        return RatMatrix.from_domain(-self.to_domain())

    def scale(self, factor: RatLike) -> "RatMatrix":
        return RatMatrix.from_domain(self.to_domain() * to_qq(rat(factor)))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        return mat_mul(self, other)

    def __pow__(self, k: int) -> "RatMatrix":
        return mat_pow(self, k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(rat_str(x) for x in row) + "]" for row in self._rows)
        return "RatMatrix([{0}])".format(body)


def mat_mul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    """Exact product ``a @ b``.

    Raises:
        IsoldeProgrammingError: if ``a.cols != b.rows``
    """
    if a.cols != b.rows:
        raise IsoldeProgrammingError(
            "dimension mismatch: {0}x{1} @ {2}x{3}".format(a.rows, a.cols, b.rows, b.cols)
        )
    return RatMatrix.from_domain(a.to_domain().matmul(b.to_domain()))


def mat_pow(a: RatMatrix, k: int) -> RatMatrix:
    """Exact ``a ** k``; ``a ** 0`` is the identity."""
    if not a.is_square():
        raise IsoldeProgrammingError("square matrix required, got {0}x{1}".format(*a.shape))
    if k < 0:
        raise IsoldeProgrammingError("negative exponent: {0}".format(k))
    if k == 0:
        return RatMatrix.identity(a.rows)
    return RatMatrix.from_domain(a.to_domain().pow(k))


def vec_mat(u: Sequence[Fraction], a: RatMatrix) -> tuple:
    """Row vector times matrix."""
    if len(u) != a.rows:
        raise IsoldeProgrammingError("dimension mismatch: vector {0} @ {1}x{2}".format(len(u), a.rows, a.cols))
    return tuple(sum((x * y for x, y in zip(u, a.column(j))), ZERO) for j in range(a.cols))


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise IsoldeProgrammingError("dimension mismatch: {0} vs {1}".format(len(u), len(v)))
    return sum((x * y for x, y in zip(u, v)), ZERO)


def inf_norm(a: RatMatrix) -> Fraction:
    """Max over rows of the sum of absolute entries."""
    return max(sum((abs(x) for x in row), ZERO) for row in a)


def is_row_stochastic(a: RatMatrix) -> bool:
    return a.is_square() and all(x >= 0 for x in a.entries()) and all(sum(row) == 1 for row in a)


def solve(columns: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> Optional[list]:
    """Find c with ``sum(c[i] * columns[i]) == target`` from the reduced row echelon form.

    Returns:
        list: one solution (free variables set to 0), or None if the system is inconsistent
    """
    width = len(columns)
    height = len(target)
    augmented = DomainMatrix(
        [[to_qq(col[r]) for col in columns] + [to_qq(target[r])] for r in range(height)], (height, width + 1), QQ
    )
    reduced, pivots = augmented.rref()
    if width in pivots:
        return None
    rows = reduced.to_list()
    solution = [ZERO] * width
    for i, c in enumerate(pivots):
        solution[c] = from_qq(rows[i][width])
    return solution


class RatPoly(object):
    """Univariate polynomial with rational coefficients, a ``Poly`` over ``QQ`` underneath.

    Coefficients are listed lowest degree first. The zero polynomial has
    degree :attr:`ZERO_DEGREE`.
    """

    __slots__ = ("_poly",)

    ZERO_DEGREE = -1

    def __init__(self, coeffs: Iterable[RatLike] = ()):
        data = [to_qq(rat(c)) for c in coeffs]
        self._poly = Poly.from_list(list(reversed(data)) or [QQ.zero], X, domain=QQ)

    @classmethod
    def from_poly(cls, poly: Poly) -> "RatPoly":
        p = cls.__new__(cls)
        p._poly = poly.set_domain(QQ)
        return p

    @classmethod
    def x(cls) -> "RatPoly":
        return cls([0, 1])

    @classmethod
    def constant(cls, c: RatLike) -> "RatPoly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c: RatLike = 1) -> "RatPoly":
        return cls([0] * k + [c])

    @property
    def poly(self) -> Poly:
        return self._poly

    @property
    def coeffs(self) -> tuple:
        return tuple(from_qq(c) for c in reversed(self._poly.rep.to_list()))

    @property
    def degree(self) -> int:
        return self.ZERO_DEGREE if self.is_zero() else int(self._poly.degree())

    def is_zero(self) -> bool:
        return self._poly.is_zero

    def leading(self) -> Fraction:
        return ZERO if self.is_zero() else from_qq(self._poly.rep.to_list()[0])

    def monic(self) -> "RatPoly":
        if self.is_zero():
            raise IsoldeProgrammingError("zero polynomial has no monic form")
        return RatPoly.from_poly(self._poly.monic())

    def __add__(self, other: "RatPoly") -> "RatPoly":
        return RatPoly.from_poly(self._poly + other._poly)

    def __neg__(self) -> "RatPoly":
        return RatPoly.from_poly(-self._poly)

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return RatPoly.from_poly(self._poly - other._poly)

    def __mul__(self, other: "RatPoly") -> "RatPoly":
        return RatPoly.from_poly(self._poly * other._poly)

    def __divmod__(self, other: "RatPoly"):
        return poly_divmod(self, other)

    def __call__(self, x: RatLike) -> Fraction:
        value = ZERO
        xv = rat(x)
        for c in reversed(self.coeffs):
            value = value * xv + c
        return value

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return "RatPoly({0})".format(self)

    def __str__(self) -> str:
        coeffs = self.coeffs
        if not coeffs:
            return "0"
        terms = []
        for k in range(len(coeffs) - 1, -1, -1):
            c = coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = rat_str(mag)
            else:
                power = "x" if k == 1 else "x^{0}".format(k)
                body = power if mag == 1 else "{0}*{1}".format(rat_str(mag), power)
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += " {0} {1}".format(sign, body)
        return text


def poly_divmod(q: RatPoly, p: RatPoly):
    """Exact division ``q = quot * p + rem`` with ``deg rem < deg p``.

    Raises:
        IsoldeProgrammingError: if ``p`` is the zero polynomial
    """
    if p.is_zero():
        raise IsoldeProgrammingError("division by the zero polynomial")
    quot, rem = q.poly.div(p.poly)
    return RatPoly.from_poly(quot), RatPoly.from_poly(rem)


def poly_divides(p: RatPoly, q: RatPoly) -> bool:
    """True iff ``p`` divides ``q`` exactly."""
    return poly_divmod(q, p)[1].is_zero()


def poly_eval(p: RatPoly, a: RatMatrix) -> RatMatrix:
    """Evaluate ``p`` at a square matrix by Horner's rule."""
    a._require_square()
    n = a.rows
    dm = a.to_domain()
    ident = DomainMatrix.eye(n, QQ).to_dense()
    result = DomainMatrix.zeros((n, n), QQ).to_dense()
    for c in p.poly.rep.to_list():
        result = result.matmul(dm) + ident * c
    return RatMatrix.from_domain(result)


def char_poly(a: RatMatrix) -> RatPoly:
    """Monic characteristic polynomial ``det(xI - a)``."""
    a._require_square()
    return RatPoly.from_poly(Poly.from_list(a.to_domain().charpoly(), X, domain=QQ))


def min_poly(a: RatMatrix) -> RatPoly:
    """Monic minimal polynomial, from the first linear dependence among I, a, a^2, ...

    Powers are stacked as columns of flattened entries; a^d solves the system
    of the lower powers exactly when it lies in their span.
    """
    a._require_square()
    powers = [RatMatrix.identity(a.rows).entries()]
    current = RatMatrix.identity(a.rows)
    for _ in range(a.rows):
        current = mat_mul(current, a)
        target = current.entries()
        combo = solve(powers, target)
        if combo is not None:
            return RatPoly([-c for c in combo] + [ONE])
        powers.append(target)
    # unreachable: Cayley-Hamilton bounds the degree by n
    raise IsoldeProgrammingError("no annihilating polynomial of degree <= {0}".format(a.rows))


@lru_cache(maxsize=None)
def cyclotomic(k: int) -> RatPoly:
    """k-th cyclotomic polynomial."""
    if k < 1:
        raise IsoldeProgrammingError("cyclotomic index must be positive: {0}".format(k))
    return RatPoly.from_poly(cyclotomic_poly(k, X, polys=True))
