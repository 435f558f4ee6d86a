"""Leaf-moving tree surgeries and the evolution of a tree into a balanced
double broom.

The evolution runs in three phases:

1. ``sigma`` moves: pull every leaf hanging off the pessimal path onto the
   path, producing a caterpillar whose spine is that path.
2. paired ``tau`` moves: push interior leaves outward two at a time until
   at most one leaf sits on ``v_2 .. v_{d-2}``.
3. single ``tau`` moves: throw a remaining interior leaf to the lighter end,
   then move leaves from the heavy end to the light end until balanced.

Every step recomputes the mixing time from scratch and asserts that it went
up, together with the hitting-time facts each move is supposed to satisfy.
Nothing is taken on trust; a failed check raises ``InvariantViolation``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import rational
from .brooms import BroomParams, balanced_broom, broom_params_of
from .errors import (
    AlreadyAdjacentError,
    IndexOutOfRangeError,
    InsufficientLeavesError,
    InvariantViolation,
    NoLeafAtError,
    NotACaterpillarError,
    NotALeafError,
    NotBroomLikeError,
    NotOnPathError,
    TrivialTreeError,
)
from .mixing import hitting_column, hitting_matrix, mixing_time, pessimal_path, pi_access
from .tree import (
    Tree,
    VertexPath,
    canonical_code,
    caterpillar_spine,
    diameter,
    distance_matrix,
    is_caterpillar_spine,
)

CERT_FORMAT = "mixtree/evolution-certificate"
CERT_VERSION = 1

SIGMA = "sigma"
TAU_SINGLE = "tau_single"
TAU_PAIR = "tau_pair"


# -- spine helpers -----------------------------------------------------------

def _check_path(tree: Tree, path: Sequence[int]) -> VertexPath:
    path = tuple(path)
    if not path or len(set(path)) != len(path):
        raise NotOnPathError("path must be a non-empty sequence of distinct vertices")
    for v in path:
        tree.check_vertex(v)
    for a, b in zip(path, path[1:]):
        if not tree.has_edge(a, b):
            raise NotOnPathError(f"({a}, {b}) on the path is not an edge")
    return path


def _check_spine(tree: Tree, spine: Sequence[int]) -> VertexPath:
    spine = _check_path(tree, spine)
    if not is_caterpillar_spine(tree, spine):
        raise NotACaterpillarError("some vertex is more than one step from the spine")
    return spine


def spine_leaves(tree: Tree, spine: Sequence[int], k: int) -> tuple[int, ...]:
    """Non-spine leaves attached to ``spine[k]``, smallest id first."""
    on = set(spine)
    v = spine[k]
    return tuple(w for w in tree.adjacency[v] if w not in on and tree.degree(w) == 1)


def leaf_counts(tree: Tree, spine: Sequence[int]) -> list[int]:
    return [len(spine_leaves(tree, spine, k)) for k in range(len(spine))]


@dataclass(frozen=True)
class CaterpillarPartition:
    """``sets[k]`` holds ``spine[k]`` and the non-spine leaves next to it."""
    spine: VertexPath
    sets: tuple

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.sets)

    def index_of(self, v: int) -> int:
        for k, s in enumerate(self.sets):
            if v in s:
                return k
        raise KeyError(v)


def partition(tree: Tree, spine: Sequence[int]) -> CaterpillarPartition:
    spine = _check_spine(tree, spine)
    on = set(spine)
    sets = []
    for v in spine:
        sets.append(frozenset([v, *(w for w in tree.adjacency[v] if w not in on)]))
    return CaterpillarPartition(spine, tuple(sets))


# -- surgeries ----------------------------------------------------------------

def _nearest_on_path(tree: Tree, path: Sequence[int], y: int) -> int:
    d = distance_matrix(tree)
    return min(path, key=lambda v: d[y][v])


def sigma(tree: Tree, pessimal_path: Sequence[int], y: int) -> Tree:
    """Move leaf ``y`` (off the path, not next to it) onto the nearest path
    vertex."""
    path = _check_path(tree, pessimal_path)
    tree.check_vertex(y)
    if not tree.is_leaf(y):
        raise NotALeafError(f"vertex {y} is not a leaf")
    on = set(path)
    if y in on:
        raise AlreadyAdjacentError(f"leaf {y} lies on the path")
    (x,) = tree.adjacency[y]
    if x in on:
        raise AlreadyAdjacentError(f"leaf {y} is already adjacent to the path")
    vk = _nearest_on_path(tree, path, y)
    return tree.replace_edges([(x, y)], [(vk, y)])


def _pick_leaf(tree, spine, i, exclude=()):
    if not 0 <= i < len(spine):
        raise IndexOutOfRangeError(f"spine index {i} outside 0..{len(spine) - 1}")
    cands = [w for w in spine_leaves(tree, spine, i) if w not in exclude]
    if not cands:
        if exclude and spine_leaves(tree, spine, i):
            raise InsufficientLeavesError(f"need two distinct leaves at spine index {i}")
        raise NoLeafAtError(i)
    return cands[0]


def _check_index(spine, j):
    if not 0 <= j < len(spine):
        raise IndexOutOfRangeError(f"spine index {j} outside 0..{len(spine) - 1}")


def tau_single(tree: Tree, spine: Sequence[int], i: int, j: int,
               leaf: Optional[int] = None) -> Tree:
    """Move a non-spine leaf from ``spine[i]`` to ``spine[j]``.

    ``leaf`` picks which one; by default the smallest id at ``spine[i]``.
    """
    return _tau_single(tree, tuple(spine), i, j, leaf)[0]


def _tau_single(tree, spine, i, j, leaf=None):
    _check_index(spine, i)
    _check_index(spine, j)
    if leaf is None:
        leaf = _pick_leaf(tree, spine, i)
    elif leaf not in spine_leaves(tree, spine, i):
        raise NoLeafAtError(i)
    if i == j:
        return tree, leaf
    return tree.replace_edges([(spine[i], leaf)], [(spine[j], leaf)]), leaf


def tau_pair(tree: Tree, spine: Sequence[int], i: int, j: int, k: int, l: int,
             x: Optional[int] = None, y: Optional[int] = None) -> Tree:
    """Move leaf ``x`` from ``spine[i]`` to ``spine[j]`` and leaf ``y`` from
    ``spine[k]`` to ``spine[l]`` in one surgery."""
    return _tau_pair(tree, tuple(spine), i, j, k, l, x, y)[0]


def _tau_pair(tree, spine, i, j, k, l, x=None, y=None):
    for t in (i, j, k, l):
        _check_index(spine, t)
    if x is None:
        x = _pick_leaf(tree, spine, i, exclude=(y,) if y is not None else ())
    elif x not in spine_leaves(tree, spine, i):
        raise NoLeafAtError(i)
    if y is None:
        y = _pick_leaf(tree, spine, k, exclude=(x,))
    elif y not in spine_leaves(tree, spine, k):
        raise NoLeafAtError(k)
    if x == y:
        raise InsufficientLeavesError("the two moved leaves must differ")
    new = tree.replace_edges([(spine[i], x), (spine[k], y)], [(spine[j], x), (spine[l], y)])
    return new, x, y


# -- the Delta-hitting table ----------------------------------------------------

@dataclass(frozen=True)
class DeltaTable:
    """Change in H(v, v_d) under the paired move (i, i-1) & (j, j+1).

    ``delta`` is measured by recomputing both hitting matrices. ``predicted``
    is the case table usually stated for this move; ``case`` labels which row
    of that table applies to each vertex.
    """
    i: int
    j: int
    x: int
    y: int
    delta: tuple
    predicted: tuple
    case: tuple

    def mismatches(self) -> dict:
        return {v: (self.predicted[v] - self.delta[v])
                for v in range(len(self.delta)) if self.predicted[v] != self.delta[v]}


def delta_hitting_table(tree: Tree, spine: Sequence[int], i: int, j: int,
                        x: Optional[int] = None, y: Optional[int] = None) -> DeltaTable:
    spine = _check_spine(tree, spine)
    d = len(spine) - 1
    if not 2 <= i <= j <= d - 2:
        raise IndexOutOfRangeError(f"need 2 <= i <= j <= d-2, got i={i}, j={j}, d={d}")
    new, x, y = _tau_pair(tree, spine, i, i - 1, j, j + 1, x, y)
    vd = spine[d]
    before = hitting_column(tree, vd)
    after = hitting_column(new, vd)
    part = partition(tree, spine)
    h = hitting_matrix(tree)
    h_left = h[spine[i - 1]][spine[i]]
    h_right = h[spine[j]][spine[j + 1]]
    delta, predicted, case = [], [], []
    for v in range(tree.n):
        delta.append(after[v] - before[v])
        k = part.index_of(v)
        if v == x:
            predicted.append(2 + h_left)
            case.append("x")
        elif v == y:
            predicted.append(2 - h_right)
            case.append("y")
        elif i <= k <= j:
            predicted.append(-2)
            case.append("inner")
        else:
            predicted.append(0)
            case.append("outer")
    return DeltaTable(i, j, x, y, tuple(delta), tuple(predicted), tuple(case))


# -- evolution records ------------------------------------------------------------

@dataclass(frozen=True)
class SurgeryStep:
    phase: int
    kind: str
    indices: tuple
    moved: tuple
    spine: VertexPath
    before_tmix: Fraction
    after_tmix: Fraction
    before_tree: Tree
    after_tree: Tree
    path_recomputed: bool = False
    diagnostic: bool = False

    def to_record(self) -> dict:
        return {
            "phase": self.phase,
            "kind": self.kind,
            "indices": list(self.indices),
            "moved": list(self.moved),
            "spine": list(self.spine),
            "before_tmix": rational.to_record(self.before_tmix),
            "after_tmix": rational.to_record(self.after_tmix),
            "path_recomputed": self.path_recomputed,
            "diagnostic": self.diagnostic,
            "after_edges": [list(e) for e in self.after_tree.edges],
        }


@dataclass(frozen=True)
class EvolutionCertificate:
    initial_tree: Tree
    steps: tuple
    final_tree: Tree
    final_spine: VertexPath
    final_params: Optional[BroomParams]
    original_diameter: int
    final_diameter: int
    initial_tmix: Fraction
    final_tmix: Fraction
    target_tmix: Fraction           # T_mix(D_{n,d}) for the original diameter
    notes: tuple = field(default=())

    @property
    def diameter_gap(self) -> Fraction:
        return self.target_tmix - self.final_tmix

    def to_record(self) -> dict:
        fp = self.final_params
        return {
            "format": CERT_FORMAT,
            "version": CERT_VERSION,
            "n": self.initial_tree.n,
            "initial_edges": [list(e) for e in self.initial_tree.edges],
            "original_diameter": self.original_diameter,
            "initial_tmix": rational.to_record(self.initial_tmix),
            "steps": [s.to_record() for s in self.steps],
            "final_edges": [list(e) for e in self.final_tree.edges],
            "final_spine": list(self.final_spine),
            "final_diameter": self.final_diameter,
            "final_params": None if fp is None else
            {"n": fp.n, "d": fp.d, "ell": fp.ell, "r": fp.r},
            "final_tmix": rational.to_record(self.final_tmix),
            "target_tmix": rational.to_record(self.target_tmix),
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"initial: n={self.initial_tree.n} d={self.original_diameter} "
                 f"T_mix={rational.fmt(self.initial_tmix)}"]
        for k, s in enumerate(self.steps, 1):
            lines.append(
                f"step {k} phase {s.phase} {s.kind}{tuple(s.indices)} moved={list(s.moved)}: "
                f"{rational.fmt(s.before_tmix)} -> {rational.fmt(s.after_tmix)}")
        if self.final_params is not None:
            p = self.final_params
            lines.append(f"final: D_{{{p.n},{p.d}}} ell={p.ell} r={p.r} "
                         f"T_mix={rational.fmt(self.final_tmix)}")
        if self.final_diameter < self.original_diameter:
            lines.append(
                f"compare: T_mix(D_{{{self.initial_tree.n},{self.original_diameter}}}) = "
                f"{rational.fmt(self.target_tmix)} > {rational.fmt(self.final_tmix)}")
        return "\n".join(lines) + "\n"


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise InvariantViolation(what)


# -- phase 1 --------------------------------------------------------------------

def _off_path_leaves(tree: Tree, path) -> list[int]:
    on = set(path)
    return [y for y in tree.leaves
            if y not in on and tree.adjacency[y][0] not in on]


def _check_sigma_step(g: Tree, g2: Tree, path, y) -> None:
    h, h2 = hitting_matrix(g), hitting_matrix(g2)
    for a in path:
        for b in path:
            _require(h2[a][b] == h[a][b], f"sigma: H*({a},{b}) changed")
    for vj in path:
        _require(all(h2[v][vj] <= h[v][vj] for v in range(g.n)),
                 f"sigma: some hitting time into {vj} increased")
        _require(h2[y][vj] < h[y][vj], f"sigma: H*({y},{vj}) did not drop")
        _require(pi_access(g2, vj) < pi_access(g, vj),
                 f"sigma: H*(pi*,{vj}) did not drop")


def phase1_caterpillarify(tree: Tree, check: bool = True):
    """Apply sigma moves along the pessimal path until the tree is a
    caterpillar around it. Returns ``(tree, steps, spine)``."""
    report = mixing_time(tree)
    path = pessimal_path(tree, report)
    steps = []
    g = tree
    while True:
        cands = _off_path_leaves(g, path)
        if not cands:
            break
        y = cands[0]
        x = g.adjacency[y][0]
        vk = _nearest_on_path(g, path, y)
        g2 = sigma(g, path, y)
        report2 = mixing_time(g2)
        if check:
            _require(report.mix_from[path[0]] == report.t_mix,
                     "sigma: path start does not attain T_mix")
            _check_sigma_step(g, g2, path, y)
            _require(report2.mix_from[path[0]] > report.t_mix,
                     "sigma: H*(v_0, pi*) did not exceed T_mix(G)")
        _require(report2.t_mix > report.t_mix, "sigma: T_mix did not increase")
        recomputed = not (report2.mix_from[path[0]] == report2.t_mix
                          and report2.mix_from[path[-1]] == report2.t_mix)
        steps.append(SurgeryStep(1, SIGMA, (y, x, vk), (y,), path,
                                 report.t_mix, report2.t_mix, g, g2, recomputed))
        g, report = g2, report2
        if recomputed:
            path = pessimal_path(g, report)
    return g, steps, path


# -- phase 2 --------------------------------------------------------------------

def _interior(counts) -> list[int]:
    d = len(counts) - 1
    return [k for k in range(2, d - 1) for _ in range(counts[k])]


def _potential(counts) -> int:
    d = len(counts) - 1
    return sum(counts[k] * (k - 1) * (d - 1 - k) for k in range(2, d - 1))


def _resolve_spine(tree: Tree, spine) -> VertexPath:
    if spine is not None:
        return _check_spine(tree, spine)
    if tree.n >= 2:
        p = pessimal_path(tree)
        if is_caterpillar_spine(tree, p) and len(p) - 1 == diameter(tree):
            return p
    s = caterpillar_spine(tree)
    if s is None:
        raise NotACaterpillarError("tree is not a caterpillar")
    return s


def phase2_to_broomlike(caterpillar: Tree, spine=None, check: bool = True):
    """Paired outward moves until at most one leaf remains on v_2..v_{d-2}.

    Each move takes the leftmost interior leaf one step left and the
    rightmost one step right. Returns ``(tree, steps, spine)``.
    """
    spine = _resolve_spine(caterpillar, spine)
    d = len(spine) - 1
    g = caterpillar
    steps = []
    counts = leaf_counts(g, spine)
    while len(_interior(counts)) >= 2:
        inner = _interior(counts)
        i, j = inner[0], inner[-1]
        before = mixing_time(g)
        g2, x, y = _tau_pair(g, spine, i, i - 1, j, j + 1)
        after = mixing_time(g2)
        v0, vd = spine[0], spine[d]
        if check:
            _require(hitting_column(g2, vd)[v0] == hitting_column(g, vd)[v0],
                     "tau pair: H(v_0, v_d) changed")
            _require(pi_access(g2, vd) < pi_access(g, vd), "tau pair: H(pi, v_d) did not drop")
            _require(pi_access(g2, v0) < pi_access(g, v0), "tau pair: H(pi, v_0) did not drop")
            table = delta_hitting_table(g, spine, i, j, x, y)
            _require(all(table.delta[v] == table.predicted[v]
                         for v in range(g.n) if table.case[v] in ("inner", "outer")),
                     "tau pair: Delta-hitting cases 0 / -2 do not match")
        _require(after.t_mix > before.t_mix, "tau pair: T_mix did not increase")
        counts2 = leaf_counts(g2, spine)
        _require(_potential(counts2) < _potential(counts), "tau pair: potential did not drop")
        steps.append(SurgeryStep(2, TAU_PAIR, (i, i - 1, j, j + 1), (x, y), spine,
                                 before.t_mix, after.t_mix, g, g2))
        g, counts = g2, counts2
    return g, steps, spine


# -- phase 3 --------------------------------------------------------------------

def _broomlike_shape(tree: Tree, spine) -> list[int]:
    """Interior leaf indices; raises unless the tree is a (near) double broom
    around ``spine``."""
    on = set(spine)
    for v in range(tree.n):
        if v not in on and tree.degree(v) != 1:
            raise NotBroomLikeError("a vertex off the spine is not a leaf")
    inner = _interior(leaf_counts(tree, spine))
    if len(inner) > 1:
        raise NotBroomLikeError(f"{len(inner)} leaves on interior spine vertices")
    return inner


def phase3_to_balanced(broomlike: Tree, spine=None, check: bool = True):
    """Throw a lone interior leaf to the lighter end, then move leaves from
    the heavier end until the two ends differ by at most one.

    Returns ``(tree, steps, spine)``; the spine is reversed if needed so that
    ``deg(v_1) >= deg(v_{d-1})``.
    """
    try:
        spine = _resolve_spine(broomlike, spine)
    except NotACaterpillarError:
        raise NotBroomLikeError("tree is not a caterpillar") from None
    g = broomlike
    _broomlike_shape(g, spine)
    d = len(spine) - 1
    steps = []
    if d < 3:
        return g, steps, spine
    if g.degree(spine[1]) < g.degree(spine[d - 1]):
        spine = spine[::-1]
    inner = _interior(leaf_counts(g, spine))
    m = g.n - 1
    if inner:
        (i,) = inner
        before = mixing_time(g)
        hm = hitting_matrix(g)
        g2, x = _tau_single(g, spine, i, d - 1)
        after = mixing_time(g2)
        if check:
            h2 = hitting_matrix(g2)
            _require(h2[spine[0]][spine[d]] - hm[spine[0]][spine[d]] == -2 * (d - i - 1),
                     "near broom: H(v_0, v_d) did not drop by 2(d-i-1)")
            _require(m <= hm[spine[i]][spine[i + 1]] + d - i - 3,
                     "near broom: |E| <= H(v_i, v_i+1) + d - i - 3 fails")
        _require(after.t_mix > before.t_mix, "near broom: T_mix did not increase")
        steps.append(SurgeryStep(3, TAU_SINGLE, (i, d - 1), (x,), spine,
                                 before.t_mix, after.t_mix, g, g2))
        g = g2
    while True:
        ell = g.degree(spine[1]) - 1
        r = g.degree(spine[d - 1]) - 1
        if ell < r + 2:
            break
        before = mixing_time(g)
        hm = hitting_matrix(g)
        g2, x = _tau_single(g, spine, 1, d - 1)
        after = mixing_time(g2)
        if check:
            _require(m <= hm[spine[1]][spine[2]] + d - 4,
                     "balance: |E| <= H(v_1, v_2) + d - 4 fails")
        _require(after.t_mix > before.t_mix, "balance: T_mix did not increase")
        steps.append(SurgeryStep(3, TAU_SINGLE, (1, d - 1), (x,), spine,
                                 before.t_mix, after.t_mix, g, g2))
        g = g2
    return g, steps, spine


# -- the whole pipeline -------------------------------------------------------------

def is_balanced_broom(tree: Tree) -> bool:
    d = diameter(tree)
    if d < 2 or tree.n < 3:
        return tree.n <= 2
    return canonical_code(tree) == canonical_code(balanced_broom(tree.n, d).tree)


def evolve(tree: Tree, check: bool = True) -> EvolutionCertificate:
    """Run phases 1-3 and return a certificate whose T_mix values strictly
    increase from the input tree to a balanced double broom D_{n,s}."""
    if tree.n < 2:
        raise TrivialTreeError("evolution needs n >= 2")
    d = diameter(tree)
    t0 = mixing_time(tree).t_mix
    notes = []
    if tree.n <= 3 or d <= 2 or is_balanced_broom(tree):
        spine = caterpillar_spine(tree)
        params = broom_params_of(tree, spine) if d >= 2 else None
        return EvolutionCertificate(tree, (), tree, spine, params, d, d, t0, t0, t0)
    g, s1, path = phase1_caterpillarify(tree, check)
    g, s2, spine = phase2_to_broomlike(g, path, check)
    g, s3, spine = phase3_to_balanced(g, spine, check)
    steps = tuple(s1 + s2 + s3)
    tmixes = [t0] + [st.after_tmix for st in steps]
    _require(all(a < b for a, b in zip(tmixes, tmixes[1:])), "T_mix chain not increasing")
    s = len(spine) - 1
    final_params = broom_params_of(g, spine)
    _require(abs(final_params.ell - final_params.r) <= 1, "final broom is not balanced")
    _require(is_balanced_broom(g), "final tree is not a balanced double broom")
    final_t = mixing_time(g).t_mix
    target = mixing_time(balanced_broom(tree.n, d).tree).t_mix
    if s < d:
        _require(final_t < target, "T_mix(D_{n,s}) >= T_mix(D_{n,d})")
        notes.append(f"diameter dropped from {d} to {s}")
    if any(st.path_recomputed for st in steps):
        notes.append("pessimal path changed during phase 1")
    return EvolutionCertificate(tree, steps, g, spine, final_params, d, s,
                                t0, final_t, target, tuple(notes))
