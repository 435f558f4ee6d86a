"""Exhaustive enumeration of free trees and the extremal check for T(n, d).

Generation uses networkx's constant-time-per-tree free tree generator; each
tree is relabelled and the stream is sorted by canonical code so iteration
order is reproducible. Two independent oracles back the generator up:
deduplicating every Pruefer sequence (small n) and the Cayley identity
``sum(n! / |Aut(T)|) == n^(n-2)`` over the generated classes.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Optional

import networkx as nx

from . import rational
from .brooms import balanced_broom, balanced_mixing_closed_form
from .errors import BadDiameterError, OrderTooLargeError
from .mixing import mixing_time
from .tree import Tree, canonical_code, centers, diameter

DEFAULT_MAX_ORDER = 10
LONG_MAX_ORDER = 12


def _check_order(n: int, allow_long: bool) -> None:
    cap = LONG_MAX_ORDER if allow_long else DEFAULT_MAX_ORDER
    if n < 1:
        raise OrderTooLargeError(f"order must be positive, got {n}")
    if n > cap:
        hint = "" if allow_long or n > LONG_MAX_ORDER else " (pass allow_long for n <= 12)"
        raise OrderTooLargeError(f"order {n} exceeds the cap of {cap}{hint}")


def _generate(n: int) -> list[Tree]:
    if n == 1:
        return [Tree([], n=1)]
    if n == 2:
        return [Tree([(0, 1)])]
    out = []
    for g in nx.nonisomorphic_trees(n):
        out.append(Tree(list(g.edges()), n=n))
    out.sort(key=canonical_code)
    return out


class TreeClassIterator:
    """One representative per isomorphism class of trees of order ``n``,
    optionally restricted to diameter ``d``, in canonical-code order."""

    def __init__(self, n: int, d: Optional[int] = None, allow_long: bool = False):
        _check_order(n, allow_long)
        self.n = n
        self.d = d
        self._trees = None

    def _load(self) -> list[Tree]:
        if self._trees is None:
            trees = _generate(self.n)
            if self.d is not None:
                trees = [t for t in trees if diameter(t) == self.d]
            self._trees = trees
        return self._trees

    def __iter__(self) -> Iterator[Tree]:
        return iter(self._load())

    def __len__(self) -> int:
        return len(self._load())


def all_trees(n: int, allow_long: bool = False) -> TreeClassIterator:
    return TreeClassIterator(n, None, allow_long)


def trees_with_diameter(n: int, d: int, allow_long: bool = False) -> TreeClassIterator:
    _check_order(n, allow_long)
    lo = 0 if n == 1 else (1 if n == 2 else 2)
    if not lo <= d <= n - 1:
        raise BadDiameterError(f"no tree of order {n} has diameter {d}")
    return TreeClassIterator(n, d, allow_long)


# -- oracles ------------------------------------------------------------------

def prufer_decode(seq, n: int) -> Tree:
    """The labelled tree with Pruefer sequence ``seq`` on vertices 0..n-1."""
    if n == 1:
        return Tree([], n=1)
    if len(seq) != n - 2:
        raise ValueError("Pruefer sequence must have length n - 2")
    deg = [1] * n
    for a in seq:
        deg[a] += 1
    leaves = [v for v in range(n) if deg[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for a in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, a))
        deg[a] -= 1
        if deg[a] == 1:
            heapq.heappush(leaves, a)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return Tree(edges, n=n)


def prufer_class_codes(n: int) -> set:
    """Canonical codes of all labelled trees on n vertices (n^(n-2) decodes)."""
    if n <= 2:
        return {canonical_code(prufer_decode((), n))}
    return {canonical_code(prufer_decode(seq, n)) for seq in product(range(n), repeat=n - 2)}


def automorphism_count(tree: Tree) -> int:
    """|Aut(T)| from the center-rooted canonical structure."""
    cs = centers(tree)

    def rooted(root, blocked):
        # returns (code, aut) of the subtree at root avoiding blocked
        order, parent = [root], {root: blocked}
        i = 0
        while i < len(order):
            u = order[i]
            i += 1
            for w in tree.adjacency[u]:
                if w != parent[u]:
                    parent[w] = u
                    order.append(w)
        code, aut = {}, {}
        for u in reversed(order):
            kids = [w for w in tree.adjacency[u] if w != parent[u]]
            codes = sorted(code[w] for w in kids)
            code[u] = "(" + "".join(codes) + ")"
            a = 1
            for w in kids:
                a *= aut[w]
            for mult in Counter(codes).values():
                a *= math.factorial(mult)
            aut[u] = a
        return code[root], aut[root]

    if len(cs) == 1:
        return rooted(cs[0], -1)[1]
    a, b = cs
    ca, aa = rooted(a, b)
    cb, ab = rooted(b, a)
    return aa * ab * (2 if ca == cb else 1)


def labelled_count(trees) -> int:
    """sum over classes of n!/|Aut|; equals n^(n-2) iff the list is complete
    (given that its members are pairwise non-isomorphic)."""
    total = 0
    for t in trees:
        total += math.factorial(t.n) // automorphism_count(t)
    return total


# -- extremal verification ---------------------------------------------------------

@dataclass(frozen=True)
class ExtremalReport:
    n: int
    d: int
    max_tmix: Fraction
    argmax_codes: tuple
    is_unique: bool
    matches_balanced_broom: bool
    matches_closed_form: bool
    class_count: int

    @property
    def passed(self) -> bool:
        return self.is_unique and self.matches_balanced_broom and self.matches_closed_form

    def csv_row(self) -> list:
        return [self.n, self.d, self.class_count, self.max_tmix.numerator,
                self.max_tmix.denominator, str(self.is_unique).lower(),
                str(self.matches_balanced_broom).lower(),
                self.argmax_codes[0].hex() if self.argmax_codes else ""]


EXTREMAL_CSV_HEADER = ["n", "d", "class_count", "tmix_num", "tmix_den", "unique",
                       "matches_broom", "argmax_code"]


def verify_extremal(n: int, d: int, allow_long: bool = False, trees=None) -> ExtremalReport:
    """Compute T_mix over every class in T(n, d) and compare the winner with
    the balanced double broom D_{n,d}.

    ``trees`` overrides the candidate pool (used to exercise the failure path).
    """
    _check_order(n, allow_long)
    if not 3 <= d <= n - 1:
        raise BadDiameterError(f"need 3 <= d <= n-1, got n={n}, d={d}")
    pool = list(trees) if trees is not None else list(trees_with_diameter(n, d, allow_long))
    scored = [(mixing_time(t).t_mix, canonical_code(t)) for t in pool]
    best = max(s for s, _ in scored)
    winners = tuple(sorted({c for s, c in scored if s == best}))
    broom_code = canonical_code(balanced_broom(n, d).tree)
    return ExtremalReport(
        n=n, d=d, max_tmix=best, argmax_codes=winners,
        is_unique=len(winners) == 1,
        matches_balanced_broom=winners == (broom_code,),
        matches_closed_form=best == balanced_mixing_closed_form(n, d),
        class_count=len(pool),
    )


def extremal_pairs(n_max: int, d: Optional[int] = None):
    for n in range(4, n_max + 1):
        for dd in range(3, n):
            if d is None or dd == d:
                yield n, dd


def extremal_table(n_max: int, allow_long: bool = False, d: Optional[int] = None,
                   workers: int = 1) -> list[ExtremalReport]:
    """One report per (n, d) with 4 <= n <= n_max and 3 <= d <= n-1."""
    _check_order(max(n_max, 1), allow_long)
    pairs = list(extremal_pairs(n_max, d))
    if workers > 1 and len(pairs) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_verify_pair, pairs, [allow_long] * len(pairs)))
    return [verify_extremal(n, dd, allow_long) for n, dd in pairs]


def _verify_pair(pair, allow_long):
    return verify_extremal(pair[0], pair[1], allow_long)


def format_report(rep: ExtremalReport) -> str:
    status = "PASS" if rep.passed else "FAIL"
    return (f"{status} n={rep.n} d={rep.d} classes={rep.class_count} "
            f"max T_mix={rational.fmt(rep.max_tmix)}")
