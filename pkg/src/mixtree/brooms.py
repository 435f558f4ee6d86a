"""Double brooms and the closed forms for their hitting and mixing times.

A double broom with parameters ``(n, d, ell, r)`` is the path
``v_1 .. v_{d-1}`` with ``ell`` pendant leaves on ``v_1`` and ``r`` on
``v_{d-1}``; one left leaf is ``v_0`` and one right leaf is ``v_d``. The
counts obey ``ell + r = n - d + 1``.

Vertex ids: the spine ``v_0..v_d`` is ``0..d``, the remaining left leaves
follow, then the remaining right leaves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadIndexError, BadParamsError
from .tree import Tree, VertexPath


@dataclass(frozen=True)
class BroomParams:
    n: int
    d: int
    ell: int
    r: int

    def __post_init__(self):
        n, d, ell, r = self.n, self.d, self.ell, self.r
        if d < 2:
            raise BadParamsError(f"diameter {d} < 2")
        if ell < 1 or r < 1:
            raise BadParamsError(f"leaf counts must be positive (ell={ell}, r={r})")
        if ell + r != n - d + 1:
            raise BadParamsError(
                f"ell + r = {ell + r} but n - d + 1 = {n - d + 1}")

    @classmethod
    def from_split(cls, n: int, d: int, ell: int) -> "BroomParams":
        return cls(n, d, ell, n - d + 1 - ell)

    @classmethod
    def balanced(cls, n: int, d: int) -> "BroomParams":
        if not 2 <= d <= n - 1:
            raise BadParamsError(f"need 2 <= d <= n-1, got n={n}, d={d}")
        leaves = n - d + 1
        return cls(n, d, (leaves + 1) // 2, leaves // 2)


@dataclass(frozen=True)
class LabeledBroom:
    params: BroomParams
    tree: Tree
    spine: VertexPath


def build_double_broom(params: BroomParams) -> LabeledBroom:
    n, d, ell, r = params.n, params.d, params.ell, params.r
    edges = [(k, k + 1) for k in range(d)]
    nxt = d + 1
    for _ in range(ell - 1):
        edges.append((1, nxt))
        nxt += 1
    for _ in range(r - 1):
        edges.append((d - 1, nxt))
        nxt += 1
    assert nxt == n
    return LabeledBroom(params, Tree(edges, n=n), tuple(range(d + 1)))


def balanced_broom(n: int, d: int) -> LabeledBroom:
    """The balanced double broom D_{n,d}: ell = ceil((n-d+1)/2), r = floor."""
    return build_double_broom(BroomParams.balanced(n, d))


def broom_params_of(tree: Tree, spine) -> BroomParams:
    """Read ``(n, d, ell, r)`` off a double broom given its spine."""
    d = len(spine) - 1
    if d < 2:
        raise BadParamsError("spine too short for a double broom")
    on = set(spine)
    extra = [v for v in range(tree.n) if v not in on]
    for v in extra:
        nb = tree.adjacency[v]
        if len(nb) != 1 or nb[0] not in (spine[1], spine[d - 1]):
            raise BadParamsError(f"vertex {v} is not a broom leaf")
    if d == 2:
        return BroomParams.balanced(tree.n, 2)
    ell = tree.degree(spine[1]) - 1
    r = tree.degree(spine[d - 1]) - 1
    return BroomParams(tree.n, d, ell, r)


# closed forms ----------------------------------------------------------------

def broom_hitting_closed_form(params: BroomParams, k: int, to_end: bool = False) -> int:
    """Closed-form hitting times along the spine.

    ``to_end=False``: H(v_0, v_k) for 1 <= k <= d (k = d is the end-to-end
    formula). ``to_end=True``: H(v_k, v_d) for 1 <= k <= d-1.
    """
    d, ell, r = params.d, params.ell, params.r
    if to_end:
        if not 1 <= k <= d - 1:
            raise BadIndexError(f"k={k} outside 1..{d - 1}")
        return d * d - k * k + 2 * (ell - 1) * (d - k) + 2 * (r - 1)
    if not 1 <= k <= d:
        raise BadIndexError(f"k={k} outside 1..{d}")
    if k == d:
        return d * d + 2 * (ell - 1) * (d - 1) + 2 * (r - 1)
    return k * k + 2 * (ell - 1) * (k - 1)


def broom_hitting_as_printed(params: BroomParams, k: int) -> int:
    """The near-end formula H(v_0, v_k) = k^2 + (ell-1)(k-1) exactly as it is
    usually quoted. It drops a factor 2 and only agrees with the true value
    when ell == 1 or k == 1; kept so the discrepancy stays pinned by tests."""
    if not 1 <= k < params.d:
        raise BadIndexError(f"k={k} outside 1..{params.d - 1}")
    return k * k + (params.ell - 1) * (k - 1)


def broom_pi_access_closed_form(params: BroomParams) -> Fraction:
    """H(pi, v_d) for a double broom."""
    n, d, l, r = params.n, params.d, params.ell, params.r
    num = (4 * d**3 + 12 * d**2 * (l - 1) + d * (12 * l * (l - 2) + 24 * r - 13)
           + 3 * (-4 * l**2 + l * (8 * r - 3) + r * (4 * r - 19) + 14))
    return Fraction(num, 6 * (n - 1))


def broom_mixing_closed_form(params: BroomParams) -> Fraction:
    """T_mix of a double broom (symmetric in ell and r)."""
    n, d, l, r = params.n, params.d, params.ell, params.r
    num = (2 * d**3 + 6 * d**2 * (l + r - 2) + d * (12 * l * (r - 2) - 24 * r + 37)
           + l * (33 - 24 * r) + 33 * r - 42)
    return Fraction(num, 6 * (n - 1))


def double_star_mixing(ell: int, r: int) -> Fraction:
    """T_mix of the double star with ell and r leaves: 4 ell r / 2(n-1) + 5/2."""
    n = ell + r + 2
    return Fraction(4 * ell * r, 2 * (n - 1)) + Fraction(5, 2)


def balanced_mixing_closed_form(n: int, d: int) -> Fraction:
    """T_mix(D_{n,d}), dispatched on the parity of n - d."""
    if not 3 <= d <= n - 1:
        raise BadParamsError(f"need 3 <= d <= n-1, got n={n}, d={d}")
    head = Fraction((d - 2) * n - d + 5, 2)
    if (n - d) % 2:
        tail = d**3 - 6 * d**2 + 8 * d
    else:
        tail = d**3 - 6 * d**2 + 11 * d - 6
    return head - Fraction(tail, 6 * (n - 1))


def diameter_step_formulas(n: int, d: int) -> dict:
    """The displayed expressions for T_mix(D_{n,d+1}) - T_mix(D_{n,d}).

    Returns the two printed forms for the parity case of ``(n, d)``:
    ``"expanded"`` (single fraction) and ``"split"`` ((n-1)/2 minus a term).
    For ``n - d`` even the two printed forms disagree with each other; the
    expanded one is the true difference.
    """
    m = n - 1
    if (n - d) % 2:
        expanded = Fraction(-d * d + 2 * d + m * m, 2 * m)
        split = Fraction(m, 2) - Fraction(d * d - 2 * d, 2 * m)
    else:
        expanded = Fraction(-d * d + 4 * d + n * n - 2 * n - 2, 2 * n - 2)
        split = Fraction(m, 2) - Fraction(d * d - 2 * d + 3, 2 * m)
    return {"expanded": expanded, "split": split}


def balanced_mixing_monotone_check(n: int) -> bool:
    """True iff T_mix(D_{n,d}) strictly increases over d = 3..n-1, every
    step equals its expanded displayed difference, and every displayed
    difference expression is positive."""
    if n < 5:
        raise BadParamsError(f"need n >= 5 for two diameters to compare, got {n}")
    values = [balanced_mixing_closed_form(n, d) for d in range(3, n)]
    for d, (lo, hi) in zip(range(3, n), zip(values, values[1:])):
        if not hi > lo:
            return False
        forms = diameter_step_formulas(n, d)
        if hi - lo != forms["expanded"]:
            return False
        if not all(v > 0 for v in forms.values()):
            return False
    return True
