"""Linear and semilinear subsets of N^l.

A linear set is ``{q0 + t1*q1 + ... + tr*qr : t in N^r}``; a semilinear set is
a finite union of them. Vectors are plain tuples of non-negative ints.
"""
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .exceptions import IsoldeProgrammingError


def _vec(values: Iterable[int]) -> tuple:
    out = tuple(int(x) for x in values)
    if any(x < 0 for x in out):
        raise IsoldeProgrammingError("vector entries must be natural numbers: {0}".format(out))
    return out


def vec_add(a: Sequence[int], b: Sequence[int], times: int = 1) -> tuple:
    return tuple(x + times * y for x, y in zip(a, b))


@dataclass(frozen=True)
class LinearSet:
    """``{base + sum(t_i * periods[i])}``; zero and repeated periods are dropped at construction."""

    base: tuple
    periods: tuple = ()

    def __init__(self, base: Iterable[int], periods: Iterable[Iterable[int]] = ()):
        b = _vec(base)
        kept = []
        for p in periods:
            v = _vec(p)
            if len(v) != len(b):
                raise IsoldeProgrammingError(
                    "period {0} does not match dimension {1}".format(v, len(b))
                )
            if any(v) and v not in kept:
                kept.append(v)
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "periods", tuple(kept))

    @property
    def dim(self) -> int:
        return len(self.base)

    def point(self, params: Sequence[int]) -> tuple:
        """The element obtained with parameter vector ``params``."""
        x = self.base
        for t, p in zip(params, self.periods):
            if t:
                x = vec_add(x, p, t)
        return x

    def contains(self, x: Sequence[int]) -> bool:
        """Membership by depth-first search over period multiplicities."""
        target = tuple(x)
        if len(target) != self.dim:
            return False
        rest = tuple(t - b for t, b in zip(target, self.base))
        if any(r < 0 for r in rest):
            return False
        return _decompose(rest, self.periods, 0)


def _decompose(rest: tuple, periods: tuple, start: int) -> bool:
    if not any(rest):
        return True
    for i in range(start, len(periods)):
        p = periods[i]
        nxt = tuple(r - q for r, q in zip(rest, p))
        if all(r >= 0 for r in nxt) and _decompose(nxt, periods, i):
            return True
    return False


@dataclass(frozen=True)
class SemilinearSet:
    """Finite union of linear sets of one dimension; no components means the empty set."""

    dim: int
    components: tuple = ()

    def __init__(self, dim: int, components: Iterable[LinearSet] = ()):
        comps = tuple(components)
        for c in comps:
            if c.dim != dim:
                raise IsoldeProgrammingError(
                    "component of dimension {0} in a set of dimension {1}".format(c.dim, dim)
                )
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "components", comps)

    def is_empty(self) -> bool:
        return not self.components

    def contains(self, x: Sequence[int]) -> bool:
        return any(c.contains(x) for c in self.components)

    @classmethod
    def full(cls, dim: int) -> "SemilinearSet":
        """All of N^dim: base 0 with the unit periods."""
        units = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
        return cls(dim, [LinearSet([0] * dim, units)])


def free_indices(q: LinearSet, pending: Iterable[int]) -> frozenset:
    """Indices j in ``pending`` where some period has a nonzero j-th coordinate."""
    return frozenset(j for j in pending if any(p[j] for p in q.periods))


def fix_coordinate(q: LinearSet, j: int, value: int) -> list:
    """Split ``{x in q : x[j] == value}`` into linear sets.

    Every parameter whose period touches coordinate j is assigned; each
    feasible assignment gives one linear set whose base absorbs the assigned
    periods and whose periods are the untouched ones. An empty list means no
    element of ``q`` has ``x[j] == value``.
    """
    touching = [p for p in q.periods if p[j]]
    others = [p for p in q.periods if not p[j]]
    need = value - q.base[j]
    if need < 0:
        return []
    if not touching:
        return [LinearSet(q.base, others)] if need == 0 else []
    out = []
    for counts in _compositions(need, [p[j] for p in touching]):
        base = q.base
        for t, p in zip(counts, touching):
            if t:
                base = vec_add(base, p, t)
        out.append(LinearSet(base, others))
    return out


def _compositions(total: int, weights: Sequence[int]) -> Iterator[tuple]:
    """All t in N^len(weights) with sum(t_i * weights_i) == total, in lexicographic order."""
    if not weights:
        if total == 0:
            yield ()
        return
    w = weights[0]
    for t in range(total // w + 1):
        for rest in _compositions(total - t * w, weights[1:]):
            yield (t,) + rest


def is_stratified(s: SemilinearSet) -> bool:
    """Every period has at most two nonzero coordinates and no two supports interlace."""
    for c in s.components:
        supports = []
        for p in c.periods:
            nz = [i for i, x in enumerate(p) if x]
            if len(nz) > 2:
                return False
            if len(nz) == 2:
                supports.append(tuple(nz))
        for (i1, j1), (i2, j2) in itertools.combinations(supports, 2):
            if i1 < i2 < j1 < j2 or i2 < i1 < j2 < j1:
                return False
    return True


def enumerate_points(s: SemilinearSet, bound: int) -> Iterator[tuple]:
    """Yield each element of ``s`` with all coordinates <= bound once, in lexicographic order."""
    points = set()
    for c in s.components:
        if any(x > bound for x in c.base):
            continue
        visited = {c.base}
        stack = [c.base]
        while stack:
            x = stack.pop()
            for p in c.periods:
                y = vec_add(x, p)
                if y not in visited and all(v <= bound for v in y):
                    visited.add(y)
                    stack.append(y)
        points |= visited
    yield from sorted(points)
