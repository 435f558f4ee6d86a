"""Immutable trees on dense integer vertex ids and their structural queries.

Vertex ids are always ``0..n-1``. Paths are plain tuples of vertex ids with
consecutive entries adjacent; a one-vertex path ``(u,)`` is the geodesic from
``u`` to itself.
"""

from __future__ import annotations

from collections import deque
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import (
    DisconnectedError,
    DuplicateEdgeError,
    HasCycleError,
    InvalidVertexError,
    NotAnEdgeError,
    ParseError,
    SelfLoopError,
)

Edge = tuple[int, int]
VertexPath = tuple[int, ...]


class Tree:
    """A validated tree.

    Build one with :func:`from_edge_list` (or ``Tree(edges)``). Instances are
    hashable and compare equal when they have the same vertex count and edge
    set, i.e. labelled equality; use :func:`canonical_code` for isomorphism.
    """

    def __init__(self, edges: Iterable[Sequence[int]], n: Optional[int] = None):
        edge_list = [(int(a), int(b)) for a, b in edges]
        if n is None:
            n = 1 + max((max(a, b) for a, b in edge_list), default=0)
        if n < 1:
            raise DisconnectedError("a tree needs at least one vertex")
        seen = set()
        adj: list[list[int]] = [[] for _ in range(n)]
        for a, b in edge_list:
            if a < 0 or b < 0 or a >= n or b >= n:
                raise InvalidVertexError(f"edge ({a}, {b}) outside 0..{n - 1}")
            if a == b:
                raise SelfLoopError(f"self-loop at vertex {a}")
            key = (a, b) if a < b else (b, a)
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge {key}")
            seen.add(key)
            adj[a].append(b)
            adj[b].append(a)
        m = len(seen)
        if m > n - 1:
            raise HasCycleError(f"{m} edges on {n} vertices: not acyclic")
        reached = _bfs_order(adj, 0)
        if len(reached) != n:
            if m < n - 1:
                raise DisconnectedError(
                    f"only {len(reached)} of {n} vertices reachable from 0")
            raise HasCycleError("edge count is n-1 but the graph is disconnected, so it has a cycle")
        self._n = n
        self._adj = tuple(tuple(sorted(nb)) for nb in adj)
        self._edges = tuple(sorted(seen))

    # basic accessors --------------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._adj

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(nb) for nb in self._adj)

    @property
    def edges(self) -> tuple[Edge, ...]:
        """Edges as sorted ``(a, b)`` pairs with ``a < b``."""
        return self._edges

    def neighbors(self, v: int) -> tuple[int, ...]:
        self.check_vertex(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        self.check_vertex(v)
        return len(self._adj[v])

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self._edge_set

    @cached_property
    def _edge_set(self) -> frozenset:
        return frozenset(self._edges)

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        if self._n == 1:
            return ()
        return tuple(v for v, nb in enumerate(self._adj) if len(nb) == 1)

    def is_leaf(self, v: int) -> bool:
        self.check_vertex(v)
        return len(self._adj[v]) == 1

    def check_vertex(self, v) -> None:
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < self._n:
            raise InvalidVertexError(f"vertex {v!r} not in 0..{self._n - 1}")

    # derived trees ----------------------------------------------------------

    def replace_edges(self, remove: Iterable[Edge], add: Iterable[Edge]) -> "Tree":
        """Return a new tree with ``remove`` deleted and ``add`` inserted."""
        current = set(self._edges)
        for a, b in remove:
            key = (min(a, b), max(a, b))
            if key not in current:
                raise NotAnEdgeError(f"({a}, {b}) is not an edge")
            current.discard(key)
        for a, b in add:
            current.add((min(a, b), max(a, b)))
        return Tree(sorted(current), n=self._n)

    def relabel(self, perm: Sequence[int]) -> "Tree":
        """Return the tree with vertex ``v`` renamed to ``perm[v]``."""
        if sorted(perm) != list(range(self._n)):
            raise InvalidVertexError("relabelling must be a permutation of 0..n-1")
        return Tree([(perm[a], perm[b]) for a, b in self._edges], n=self._n)

    # dunder -----------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self):
        return hash((self._n, self._edges))

    def __repr__(self):
        return f"Tree(n={self._n}, edges={list(self._edges)})"

    def __len__(self):
        return self._n

    # cached metric data -----------------------------------------------------

    @cached_property
    def _distances(self) -> tuple[tuple[int, ...], ...]:
        rows = []
        for s in range(self._n):
            dist = [-1] * self._n
            dist[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self._adj[u]:
                    if dist[w] < 0:
                        dist[w] = dist[u] + 1
                        queue.append(w)
            rows.append(tuple(dist))
        return tuple(rows)


def _bfs_order(adj, root):
    seen = [False] * len(adj)
    seen[root] = True
    order = [root]
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                order.append(w)
    return order


def rooted_parents(tree: Tree, root: int) -> tuple[list[int], list[int]]:
    """BFS order from ``root`` and the parent of every vertex (-1 at the root)."""
    tree.check_vertex(root)
    parent = [-1] * tree.n
    order = [root]
    seen = [False] * tree.n
    seen[root] = True
    i = 0
    adj = tree.adjacency
    while i < len(order):
        u = order[i]
        i += 1
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                parent[w] = u
                order.append(w)
    return order, parent


# construction / IO ----------------------------------------------------------

def from_edge_list(edges: Iterable[Sequence[int]], n: Optional[int] = None) -> Tree:
    """Validate an edge list and build a :class:`Tree`.

    ``n`` defaults to one more than the largest id mentioned.
    """
    return Tree(edges, n=n)


def path_tree(n: int) -> Tree:
    return Tree([(i, i + 1) for i in range(n - 1)], n=n)


def star_tree(n: int) -> Tree:
    return Tree([(0, i) for i in range(1, n)], n=n)


def parse_edge_list(text: str) -> Tree:
    """Parse the whitespace edge-list format: one ``u v`` pair per line.

    Blank lines and lines starting with ``#`` are skipped.
    """
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two vertex ids, got {line!r}", lineno)
        try:
            a, b = int(parts[0], 10), int(parts[1], 10)
        except ValueError:
            raise ParseError(f"non-integer vertex id in {line!r}", lineno) from None
        if a < 0 or b < 0:
            raise ParseError(f"negative vertex id in {line!r}", lineno)
        edges.append((a, b))
    if not edges:
        raise ParseError("no edges found")
    return Tree(edges)


def read_edge_list(path) -> Tree:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def format_edge_list(tree: Tree) -> str:
    return "".join(f"{a} {b}\n" for a, b in tree.edges)


# metric queries -------------------------------------------------------------

def distance(tree: Tree, u: int, v: int) -> int:
    tree.check_vertex(u)
    tree.check_vertex(v)
    return tree._distances[u][v]


def distance_matrix(tree: Tree) -> tuple[tuple[int, ...], ...]:
    return tree._distances


def diameter(tree: Tree) -> int:
    return max(max(row) for row in tree._distances)


def path_overlap(tree: Tree, u: int, v: int, w: int) -> int:
    """Length of the common part of the u-w and v-w geodesics."""
    d = distance_matrix(tree)
    for x in (u, v, w):
        tree.check_vertex(x)
    twice = d[u][w] + d[v][w] - d[u][v]
    # on a tree the three geodesics meet in a median vertex, so this is even
    assert twice % 2 == 0
    return twice // 2


def side_set(tree: Tree, u: int, v: int) -> frozenset:
    """Vertices of the component of ``tree - (u, v)`` that contains ``u``."""
    tree.check_vertex(u)
    tree.check_vertex(v)
    if not tree.has_edge(u, v):
        raise NotAnEdgeError(f"({u}, {v}) is not an edge")
    seen = {u, v}
    stack = [u]
    while stack:
        a = stack.pop()
        for w in tree.adjacency[a]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    seen.discard(v)
    return frozenset(seen)


def geodesic(tree: Tree, u: int, v: int) -> VertexPath:
    """The unique u-v path, endpoints included."""
    tree.check_vertex(u)
    tree.check_vertex(v)
    d = tree._distances
    path = [u]
    cur = u
    while cur != v:
        cur = next(w for w in tree.adjacency[cur] if d[w][v] == d[cur][v] - 1)
        path.append(cur)
    return tuple(path)


def is_caterpillar_spine(tree: Tree, path: Sequence[int]) -> bool:
    """True when every vertex lies on ``path`` or next to it."""
    on = set(path)
    return all(v in on or any(w in on for w in tree.adjacency[v])
               for v in range(tree.n))


def caterpillar_spine(tree: Tree) -> Optional[VertexPath]:
    """Lexicographically smallest diameter path that works as a caterpillar
    spine, or ``None`` when the tree is not a caterpillar."""
    if tree.n <= 2:
        return tuple(range(tree.n))
    d = tree._distances
    diam = diameter(tree)
    best = None
    leaves = tree.leaves
    for a, b in combinations(leaves, 2):
        if d[a][b] != diam:
            continue
        forward = geodesic(tree, a, b)
        # geodesic(b, a) is the reverse; a < b so forward is the smaller one
        if best is not None and forward >= best:
            continue
        if is_caterpillar_spine(tree, forward):
            best = forward
    return best


def is_caterpillar(tree: Tree) -> bool:
    return caterpillar_spine(tree) is not None


# canonical form -------------------------------------------------------------

def centers(tree: Tree) -> tuple[int, ...]:
    """The one or two central vertices, found by repeated leaf stripping."""
    n = tree.n
    if n <= 2:
        return tuple(range(n))
    deg = list(tree.degrees)
    layer = [v for v in range(n) if deg[v] == 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for leaf in layer:
            for w in tree.adjacency[leaf]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return tuple(sorted(layer))


def _rooted_code(tree: Tree, root: int, blocked: int = -1) -> str:
    """AHU parenthesis code of the subtree at ``root``, not crossing ``blocked``."""
    order = [root]
    parent = {root: blocked}
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        for w in tree.adjacency[u]:
            if w != parent[u]:
                parent[w] = u
                order.append(w)
    code: dict[int, str] = {}
    for u in reversed(order):
        kids = sorted(code[w] for w in tree.adjacency[u] if w != parent[u])
        code[u] = "(" + "".join(kids) + ")"
    return code[root]


def canonical_code(tree: Tree) -> bytes:
    """Isomorphism-invariant byte string (center-rooted AHU encoding).

    Bicentral trees are cut at the central edge and the two halves are
    encoded in sorted order, so the code is a complete invariant.
    """
    cs = centers(tree)
    if len(cs) == 1:
        return _rooted_code(tree, cs[0]).encode("ascii")
    a, b = cs
    left, right = sorted((_rooted_code(tree, a, b), _rooted_code(tree, b, a)))
    return ("=" + left + right).encode("ascii")
