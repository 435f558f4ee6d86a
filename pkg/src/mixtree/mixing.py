"""Exact hitting times, access times and mixing times of random walks on trees.

All quantities are exact: hitting times between vertices are Python ints,
everything involving the stationary distribution is a ``Fraction``.

The walk is the simple (non-lazy) walk. For a lazy walk every quantity here
doubles; that variant is not provided.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from . import rational
from .errors import (
    BadDistributionError,
    InvalidVertexError,
    InvariantViolation,
    TrivialTreeError,
)
from .linalg import solve_rational
from .tree import Tree, geodesic, path_overlap, rooted_parents

REPORT_FORMAT = "mixtree/mixing-report"
REPORT_VERSION = 1

Distribution = tuple  # tuple[Fraction, ...], one weight per vertex


def _need_walk(tree: Tree) -> None:
    if tree.n < 2:
        raise TrivialTreeError("random walks need at least one edge (n >= 2)")


def stationary(tree: Tree) -> Distribution:
    """pi_v = deg(v) / 2|E|."""
    _need_walk(tree)
    two_m = 2 * (tree.n - 1)
    return tuple(Fraction(d, two_m) for d in tree.degrees)


def as_distribution(tree: Tree, weights) -> Distribution:
    """Validate ``weights`` as a probability vector on the tree's vertices."""
    w = tuple(Fraction(x) for x in weights)
    if len(w) != tree.n:
        raise BadDistributionError(f"expected {tree.n} weights, got {len(w)}")
    if any(x < 0 for x in w):
        raise BadDistributionError("negative weight")
    if sum(w) != 1:
        raise BadDistributionError(f"weights sum to {sum(w)}, not 1")
    return w


def point_mass(tree: Tree, v: int) -> Distribution:
    tree.check_vertex(v)
    return tuple(Fraction(int(u == v)) for u in range(tree.n))


def return_time(tree: Tree, u: int) -> Fraction:
    """Expected return time 2|E| / deg(u)."""
    tree.check_vertex(u)
    _need_walk(tree)
    return Fraction(2 * (tree.n - 1), tree.degree(u))


# hitting times --------------------------------------------------------------

@lru_cache(maxsize=512)
def _hitting_columns(tree: Tree) -> tuple[tuple[int, ...], ...]:
    # cols[v][u] = H(u, v). Rooting at v, a step from u to its parent p costs
    # 2|subtree(u)| - 1, and H(u, v) = H(u, p) + H(p, v).
    n = tree.n
    cols = []
    for v in range(n):
        order, parent = rooted_parents(tree, v)
        size = [1] * n
        for u in reversed(order[1:]):
            size[parent[u]] += size[u]
        h = [0] * n
        for u in order[1:]:
            h[u] = h[parent[u]] + 2 * size[u] - 1
        cols.append(tuple(h))
    return tuple(cols)


def hitting_time(tree: Tree, u: int, v: int) -> int:
    """Expected number of steps for a walk from ``u`` to first reach ``v``."""
    tree.check_vertex(u)
    tree.check_vertex(v)
    return _hitting_columns(tree)[v][u]


def hitting_matrix(tree: Tree) -> tuple[tuple[int, ...], ...]:
    """``H[u][v]`` for all pairs, computed in O(n^2)."""
    cols = _hitting_columns(tree)
    n = tree.n
    return tuple(tuple(cols[v][u] for v in range(n)) for u in range(n))


def hitting_column(tree: Tree, v: int) -> tuple[int, ...]:
    """``(H(u, v) for u in vertices)``."""
    tree.check_vertex(v)
    return _hitting_columns(tree)[v]


def hitting_time_overlap_sum(tree: Tree, u: int, v: int) -> int:
    """H(u,v) as the sum over w of overlap(u, w; v) * deg(w).

    Cubic over all pairs; kept as a cross-check for :func:`hitting_time`.
    """
    deg = tree.degrees
    return sum(path_overlap(tree, u, w, v) * deg[w] for w in range(tree.n))


def hitting_vector_linear_oracle(graph, v: int) -> list[Fraction]:
    """Hitting times into ``v`` from the first-step linear system.

    ``graph`` is a :class:`Tree` or any adjacency list of a connected
    undirected graph (cycles allowed). Solves H(v,v) = 0 and
    deg(u) H(u,v) - sum_{w~u} H(w,v) = deg(u) by exact elimination.
    """
    adj = graph.adjacency if isinstance(graph, Tree) else [list(nb) for nb in graph]
    n = len(adj)
    if not isinstance(v, int) or not 0 <= v < n:
        raise InvalidVertexError(f"vertex {v!r} not in 0..{n - 1}")
    if n == 1:
        return [Fraction(0)]
    others = [u for u in range(n) if u != v]
    index = {u: k for k, u in enumerate(others)}
    a = [[0] * len(others) for _ in others]
    b = []
    for u in others:
        row = a[index[u]]
        row[index[u]] = len(adj[u])
        for w in adj[u]:
            if w != v:
                row[index[w]] -= 1
        b.append(len(adj[u]))
    sol = solve_rational(a, b)
    out = [Fraction(0)] * n
    for u, x in zip(others, sol):
        out[u] = x
    return out


# access and mixing times ----------------------------------------------------

def access_to_vertex(tree: Tree, sigma, v: int) -> Fraction:
    """H(sigma, v) = sum_u sigma_u H(u, v): walk until you first reach v."""
    sigma = as_distribution(tree, sigma)
    col = hitting_column(tree, v)
    return sum((s * h for s, h in zip(sigma, col)), Fraction(0))


def pi_access(tree: Tree, v: int) -> Fraction:
    """H(pi, v)."""
    return access_to_vertex(tree, stationary(tree), v)


def pessimal_vertices(tree: Tree, v: int) -> tuple[int, ...]:
    """All vertices w maximising H(w, v), in increasing id order."""
    col = hitting_column(tree, v)
    top = max(col)
    return tuple(u for u, h in enumerate(col) if h == top)


def mix_from_vertex(tree: Tree, v: int) -> Fraction:
    """H(v, pi) = H(v', v) - H(pi, v) for a v-pessimal vertex v'."""
    _need_walk(tree)
    col = hitting_column(tree, v)
    return max(col) - pi_access(tree, v)


@dataclass(frozen=True)
class MixingReport:
    t_mix: Fraction
    z: int
    z_partner: int
    mix_from: tuple      # H(v, pi) per vertex
    access_to: tuple     # H(pi, v) per vertex

    @property
    def n(self) -> int:
        return len(self.mix_from)

    def to_record(self) -> dict:
        return {
            "format": REPORT_FORMAT,
            "version": REPORT_VERSION,
            "n": self.n,
            "t_mix": rational.to_record(self.t_mix),
            "z": self.z,
            "z_partner": self.z_partner,
            "mix_from": [rational.to_record(q) for q in self.mix_from],
            "access_to": [rational.to_record(q) for q in self.access_to],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), indent=2) + "\n"

    @classmethod
    def from_record(cls, rec: dict) -> "MixingReport":
        if rec.get("format") != REPORT_FORMAT or rec.get("version") != REPORT_VERSION:
            raise ValueError("not a mixtree mixing report v1")
        return cls(
            t_mix=rational.from_record(rec["t_mix"]),
            z=rec["z"],
            z_partner=rec["z_partner"],
            mix_from=tuple(rational.from_record(q) for q in rec["mix_from"]),
            access_to=tuple(rational.from_record(q) for q in rec["access_to"]),
        )


@lru_cache(maxsize=512)
def mixing_time(tree: Tree) -> MixingReport:
    """T_mix = max_v H(v, pi), with a pessimal pair (z, z') both attaining it.

    Ties go to the smallest vertex id. The duality statement (z' attains
    T_mix too and z is z'-pessimal) is checked before returning.
    """
    _need_walk(tree)
    cols = _hitting_columns(tree)
    pi = stationary(tree)
    access = tuple(sum((p * h for p, h in zip(pi, cols[v])), Fraction(0))
                   for v in range(tree.n))
    mix = tuple(max(cols[v]) - access[v] for v in range(tree.n))
    t_mix = max(mix)
    z = mix.index(t_mix)
    col_z = cols[z]
    z_partner = col_z.index(max(col_z))
    if mix[z_partner] != t_mix:
        raise InvariantViolation(
            f"duality: H({z_partner}, pi) = {mix[z_partner]} != T_mix = {t_mix}")
    back = cols[z_partner]
    if back[z] != max(back):
        raise InvariantViolation(f"duality: {z} is not {z_partner}-pessimal")
    return MixingReport(t_mix, z, z_partner, mix, access)


def tmix(tree: Tree) -> Fraction:
    return mixing_time(tree).t_mix


def pessimal_path(tree: Tree, report: Optional[MixingReport] = None):
    """Geodesic from z to z' of the mixing report: a leaf-to-leaf path whose
    two endpoints both attain T_mix."""
    report = report or mixing_time(tree)
    return geodesic(tree, report.z, report.z_partner)


def commute_time(tree: Tree, u: int, v: int) -> int:
    return hitting_time(tree, u, v) + hitting_time(tree, v, u)
