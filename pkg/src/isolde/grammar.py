"""Letter-bounded context-free grammars and their Parikh images.

Grammar text format::

    # comments run to the end of the line
    alphabet: a b
    start: S            # optional, defaults to the first left-hand side
    S -> a S b | ε

Terminals are the alphabet tokens, nonterminals are the left-hand sides, and
``ε`` / ``eps`` / ``epsilon`` / an empty alternative denote the empty word.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

from .exceptions import IsoldeCapacityError, IsoldeValidationError
from .semilinear import LinearSet, SemilinearSet, vec_add
from .settings import Settings, resolve

logger = logging.getLogger(__name__)

EPS_SYMBOLS = {"ε", "eps", "epsilon"}


@dataclass(frozen=True)
class Grammar:
    """Context-free grammar over an ordered alphabet.

    Attributes:
        alphabet (tuple[str]): terminals a_1..a_l in the letter-bounded order
        nonterminals (tuple[str]): nonterminals in order of first definition
        start (str): start symbol
        productions (dict[str, tuple[tuple[str]]]): right-hand sides per nonterminal
    """

    alphabet: tuple
    nonterminals: tuple
    start: str
    productions: Dict[str, tuple]

    def is_terminal(self, symbol: str) -> bool:
        return symbol in self.alphabet

    def letter_index(self, symbol: str) -> int:
        return self.alphabet.index(symbol)


def parse_grammar(text: str) -> Grammar:
    """Parse the grammar text format.

    Raises:
        IsoldeValidationError: missing alphabet header, malformed line, or undeclared symbol
    """
    alphabet = None
    start = None
    order = []
    productions: Dict[str, list] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            key, sep, value = line.partition(":")
            key = key.strip().lower()
            if not sep or key not in ("alphabet", "start"):
                raise IsoldeValidationError("line {0}: expected a production or a header: {1!r}".format(lineno, raw))
            if key == "alphabet":
                alphabet = tuple(value.split())
                if len(set(alphabet)) != len(alphabet):
                    raise IsoldeValidationError("line {0}: alphabet letters must be distinct".format(lineno))
            else:
                start = value.strip()
            continue
        lhs, _, rhs_block = line.partition("->")
        lhs = lhs.strip()
        if not lhs or len(lhs.split()) != 1:
            raise IsoldeValidationError("line {0}: bad left-hand side: {1!r}".format(lineno, raw))
        if lhs not in productions:
            productions[lhs] = []
            order.append(lhs)
        for alt in rhs_block.split("|"):
            symbols = tuple(s for s in alt.split() if s not in EPS_SYMBOLS)
            productions[lhs].append(symbols)
    if alphabet is None:
        raise IsoldeValidationError("grammar has no 'alphabet:' header line")
    if not order:
        raise IsoldeValidationError("grammar contains no productions")
    clash = sorted(set(alphabet) & set(order))
    if clash:
        raise IsoldeValidationError("symbols used both as letters and nonterminals: {0}".format(", ".join(clash)))
    for lhs in order:
        for rhs in productions[lhs]:
            for s in rhs:
                if s not in productions and s not in alphabet:
                    raise IsoldeValidationError("undeclared symbol {0!r} in a production of {1}".format(s, lhs))
    start = start or order[0]
    if start not in productions:
        raise IsoldeValidationError("start symbol {0!r} has no productions".format(start))
    return Grammar(
        alphabet=alphabet,
        nonterminals=tuple(order),
        start=start,
        productions={k: tuple(dict.fromkeys(v)) for k, v in productions.items()},
    )


def normalize(g: Grammar) -> Grammar:
    """Drop non-generating and then unreachable nonterminals, and the productions using them."""
    generating = set()
    changed = True
    while changed:
        changed = False
        for x in g.nonterminals:
            if x in generating:
                continue
            if any(all(g.is_terminal(s) or s in generating for s in rhs) for rhs in g.productions[x]):
                generating.add(x)
                changed = True
    useful = {
        x: tuple(rhs for rhs in g.productions[x] if all(g.is_terminal(s) or s in generating for s in rhs))
        for x in g.nonterminals
        if x in generating
    }
    reachable = set()
    stack = [g.start] if g.start in useful else []
    while stack:
        x = stack.pop()
        if x in reachable:
            continue
        reachable.add(x)
        stack.extend(s for rhs in useful[x] for s in rhs if not g.is_terminal(s))
    kept = tuple(x for x in g.nonterminals if x in reachable)
    return Grammar(g.alphabet, kept, g.start, {x: useful[x] for x in kept})


def enumerate_words(g: Grammar, max_len: int) -> frozenset:
    """All words of L(g) of length <= max_len, as tuples of letters."""
    words = {x: set() for x in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for x in g.nonterminals:
            for rhs in g.productions[x]:
                partial = {()}
                for s in rhs:
                    options = [(s,)] if g.is_terminal(s) else words[s]
                    partial = {w + o for w in partial for o in options if len(w) + len(o) <= max_len}
                    if not partial:
                        break
                new = partial - words[x]
                if new:
                    words[x] |= new
                    changed = True
    return frozenset(words[g.start])


def parikh_vector(g: Grammar, word: Sequence[str]) -> tuple:
    counts = [0] * len(g.alphabet)
    for s in word:
        counts[g.letter_index(s)] += 1
    return tuple(counts)


def validate_letter_bounded(g: Grammar, order: Optional[Sequence[str]] = None) -> Optional[tuple]:
    """Decide whether L(g) is contained in a_1* a_2* ... a_l*.

    The grammar is run against the automaton of a_1*...a_l* (state i: the last
    letter read was a_i; one extra dead state) by computing, for each
    nonterminal and pair of states, the shortest word leading from one to the
    other. Ties are broken lexicographically.

    Args:
        g: grammar
        order: letter order; defaults to the grammar's alphabet order
    Returns:
        tuple[str]: a shortest word of L(g) violating the order, or None if there is none
    """
    order = tuple(order or g.alphabet)
    rank = {a: i for i, a in enumerate(order)}
    dead = len(order)
    states = range(dead + 1)

    def step(state, letter):
        if state == dead or letter not in rank or rank[letter] < state:
            return dead
        return rank[letter]

    best: Dict[tuple, tuple] = {}

    def key(word):
        return (len(word), word)

    changed = True
    while changed:
        changed = False
        for x in g.nonterminals:
            for rhs in g.productions[x]:
                for p in states:
                    reach = {p: ()}
                    for s in rhs:
                        nxt = {}
                        for state, word in reach.items():
                            if g.is_terminal(s):
                                options = [(step(state, s), (s,))]
                            else:
                                options = [(q, best[(s, state, q)]) for q in states if (s, state, q) in best]
                            for q, w in options:
                                cand = word + w
                                if q not in nxt or key(cand) < key(nxt[q]):
                                    nxt[q] = cand
                        reach = nxt
                        if not reach:
                            break
                    for q, word in reach.items():
                        k = (x, p, q)
                        if k not in best or key(word) < key(best[k]):
                            best[k] = word
                            changed = True
    return best.get((g.start, 0, dead))


def check_letter_bounded(g: Grammar) -> Grammar:
    bad = validate_letter_bounded(g)
    if bad is not None:
        raise IsoldeValidationError(
            "grammar is not letter-bounded for order {0}: derives {1!r}".format(" ".join(g.alphabet), " ".join(bad))
        )
    return g


class _TreeSummaries(object):
    """Parikh vectors of bounded derivation trees inside one nonterminal subset U.

    A full tree is summarized by (parikh vector, bitmask of nonterminals used).
    ``counts`` is the number of occurrences of each nonterminal of U on the path
    from the root, current node included.
    """

    def __init__(self, g: Grammar, subset: Sequence[str], budget: int):
        self.g = g
        self.subset = tuple(subset)
        self.pos = {x: i for i, x in enumerate(self.subset)}
        self.rules = {
            x: [rhs for rhs in g.productions[x] if all(g.is_terminal(s) or s in self.pos for s in rhs)]
            for x in self.subset
        }
        self.zero = (0,) * len(g.alphabet)
        self.budget = budget
        self.stored = 0
        self._full = {}
        self._pumps = {}

    def _charge(self, n):
        self.stored += n
        if self.stored > self.budget:
            raise IsoldeCapacityError(
                "Parikh construction exceeds {0} tree summaries; raise parikh_budget or simplify the grammar".format(self.budget)
            )

    def _unit(self, letter):
        v = [0] * len(self.g.alphabet)
        v[self.g.letter_index(letter)] = 1
        return tuple(v)

    def _enter(self, counts, x, bound):
        i = self.pos[x]
        if counts[i] + 1 > bound:
            return None
        return counts[:i] + (counts[i] + 1,) + counts[i + 1:]

    def full(self, x, counts, bound) -> frozenset:
        key = (x, counts, bound)
        if key in self._full:
            return self._full[key]
        out = set()
        bit = 1 << self.pos[x]
        for rhs in self.rules[x]:
            partial = {(self.zero, bit)}
            for s in rhs:
                if self.g.is_terminal(s):
                    u = self._unit(s)
                    partial = {(vec_add(v, u), m) for v, m in partial}
                    continue
                inner = self._enter(counts, s, bound)
                if inner is None:
                    partial = set()
                    break
                child = self.full(s, inner, bound)
                partial = {(vec_add(v, cv), m | cm) for v, m in partial for cv, cm in child}
                if not partial:
                    break
            out |= partial
        result = frozenset(out)
        self._charge(len(result))
        self._full[key] = result
        return result

    def pumps(self, y, counts, foot) -> frozenset:
        """Parikh vectors of trees from ``y`` with exactly one unexpanded ``foot`` leaf.

        Every nonterminal occurs at most twice on each path, the foot leaf not counted.
        """
        key = (y, counts, foot)
        if key in self._pumps:
            return self._pumps[key]
        out = set()
        for rhs in self.rules[y]:
            for spine, s in enumerate(rhs):
                if self.g.is_terminal(s):
                    continue
                options = set()
                if s == foot:
                    options.add(self.zero)
                inner = self._enter(counts, s, 2)
                if inner is not None:
                    options |= self.pumps(s, inner, foot)
                if not options:
                    continue
                partial = options
                for i, t in enumerate(rhs):
                    if i == spine:
                        continue
                    if self.g.is_terminal(t):
                        u = self._unit(t)
                        partial = {vec_add(v, u) for v in partial}
                        continue
                    sub = self._enter(counts, t, 2)
                    if sub is None:
                        partial = set()
                        break
                    child = self.full(t, sub, 2)
                    partial = {vec_add(v, cv) for v in partial for cv, _ in child}
                    if not partial:
                        break
                out |= partial
        result = frozenset(out)
        self._charge(len(result))
        self._pumps[key] = result
        return result


def parikh_image(g: Grammar, settings: Optional[Settings] = None) -> SemilinearSet:
    """Parikh image of L(g) as an explicit semilinear set.

    For each subset U of nonterminals containing the start symbol: the bases are
    the Parikh vectors of derivation trees using exactly the nonterminals of U
    in which no nonterminal repeats more than |U| times on a path; the periods
    are the Parikh vectors of pump trees X =>* alpha X beta (X in U, labels in U)
    in which no nonterminal occurs more than twice on a path. A tree using
    exactly U with a label repeated more than |U| times on a path has a pump
    between two consecutive occurrences whose removal keeps every label of U,
    and a pump tree with a label occurring three times on a path splits off a
    smaller pump that avoids its foot. Any such base can absorb any such pump,
    so the union over U is exact.

    Raises:
        IsoldeCapacityError: more than ``max_nonterminals`` useful nonterminals,
            or more than ``parikh_budget`` tree summaries
    """
    s = resolve(settings)
    ng = normalize(g)
    dim = len(g.alphabet)
    if not ng.nonterminals:
        logger.info("grammar generates the empty language")
        return SemilinearSet(dim, [])
    if len(ng.nonterminals) > s.max_nonterminals:
        raise IsoldeCapacityError(
            "grammar has {0} useful nonterminals, the Parikh construction accepts at most {1}".format(
                len(ng.nonterminals), s.max_nonterminals
            )
        )
    others = [x for x in ng.nonterminals if x != ng.start]
    components = []
    seen = set()
    for size in range(len(others) + 1):
        for extra in itertools.combinations(others, size):
            subset = (ng.start,) + extra
            trees = _TreeSummaries(ng, subset, s.parikh_budget)
            root = trees._enter((0,) * len(subset), ng.start, len(subset))
            everything = (1 << len(subset)) - 1
            bases = sorted(
                {v for v, m in trees.full(ng.start, root, len(subset)) if m == everything},
                key=lambda v: (sum(v), v),
            )
            if not bases:
                continue
            periods = []
            for x in subset:
                start = trees._enter((0,) * len(subset), x, 2)
                periods.extend(trees.pumps(x, start, x))
            periods = _irredundant(periods)
            kept = []
            for b in bases:
                if not any(LinearSet(k, periods).contains(b) for k in kept):
                    kept.append(b)
            for b in kept:
                ls = LinearSet(b, periods)
                if ls not in seen:
                    seen.add(ls)
                    components.append(ls)
            logger.debug("subset %s: %d bases, %d periods", subset, len(kept), len(periods))
    return SemilinearSet(dim, components)


def _irredundant(periods) -> list:
    """Drop periods that are sums of other periods, smallest first."""
    kept = []
    for p in sorted(set(periods), key=lambda v: (sum(v), v)):
        if not any(p):
            continue
        if not kept or not LinearSet((0,) * len(p), kept).contains(p):
            kept.append(p)
    return kept
