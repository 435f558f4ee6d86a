import json
import random
from fractions import Fraction

import pytest

from mixtree.brooms import BroomParams, balanced_broom, build_double_broom
from mixtree.errors import (
    AlreadyAdjacentError,
    IndexOutOfRangeError,
    NoLeafAtError,
    NotACaterpillarError,
    NotALeafError,
    NotBroomLikeError,
    NotOnPathError,
)
from mixtree.mixing import mixing_time
from mixtree.surgery import (
    delta_hitting_table,
    evolve,
    is_balanced_broom,
    leaf_counts,
    partition,
    phase1_caterpillarify,
    phase2_to_broomlike,
    phase3_to_balanced,
    sigma,
    tau_pair,
    tau_single,
)
from mixtree.tree import Tree, diameter, is_caterpillar, path_tree

from conftest import random_caterpillar, random_tree

# spine 0..5 with 2, 0, 3, 1 leaves on v_1..v_4: twelve vertices, diameter 5
FIG3 = Tree([(0, 1), (1, 2), (2, 3), (3, 4), (4, 5),
             (1, 6), (1, 7), (3, 8), (3, 9), (3, 10), (4, 11)])
SPINE = (0, 1, 2, 3, 4, 5)


def test_fig3_partition():
    assert partition(FIG3, SPINE).sizes() == (1, 3, 1, 4, 2, 1)
    assert partition(path_tree(5), range(5)).sizes() == (1,) * 5
    b = balanced_broom(13, 5)
    assert partition(b.tree, b.spine).sizes() == (1, 5, 1, 1, 4, 1)


def test_partition_rejects_non_caterpillar(fig2_tree):
    with pytest.raises(NotACaterpillarError):
        partition(fig2_tree, (0, 1, 2, 3, 4, 5))


def test_sigma_fig4a_style():
    # leaf 3 hangs two steps off the path 0-1-2; it lands on 1
    t = Tree([(0, 1), (1, 2), (1, 4), (4, 3)])
    g = sigma(t, (0, 1, 2), 3)
    assert g.has_edge(3, 1) and not g.has_edge(3, 4)
    with pytest.raises(NotALeafError):
        sigma(t, (0, 1, 2), 4)
    with pytest.raises(AlreadyAdjacentError):
        sigma(g, (0, 1, 2), 3)
    with pytest.raises(NotOnPathError):
        sigma(t, (0, 1, 3), 3)


def test_tau_moves():
    g = tau_pair(FIG3, SPINE, 3, 2, 4, 5)
    assert leaf_counts(g, SPINE) == [0, 2, 1, 2, 0, 1]
    g = tau_single(FIG3, SPINE, 3, 1)
    assert leaf_counts(g, SPINE) == [0, 3, 0, 2, 1, 0]
    assert tau_single(FIG3, SPINE, 3, 3) == FIG3
    with pytest.raises(NoLeafAtError):
        tau_single(FIG3, SPINE, 2, 1)
    with pytest.raises(IndexOutOfRangeError):
        tau_single(FIG3, SPINE, 3, 9)


def test_delta_table_regression():
    # The rows "0" and "-2" agree with recomputation. At the two moved leaves
    # the usual statement over-counts by exactly 2:
    # true Delta at x is H(v_{i-1}, v_i), true Delta at y is -H(v_j, v_{j+1}).
    t = Tree(list(FIG3.edges) + [(2, 12)])
    tab = delta_hitting_table(t, SPINE, 2, 3)
    for v, c in enumerate(tab.case):
        if c in ("inner", "outer"):
            assert tab.delta[v] == tab.predicted[v]
    assert tab.mismatches() == {tab.x: 2, tab.y: 2}


@pytest.mark.parametrize("seed", range(15))
def test_delta_table_random(seed):
    rng = random.Random(seed)
    d = rng.randint(5, 9)
    t, spine = random_caterpillar(rng, d, rng.randint(4, 10))
    counts = leaf_counts(t, spine)
    pairs = [(i, j) for i in range(2, d - 1) for j in range(i, d - 1)
             if counts[i] and counts[j] and (i != j or counts[i] >= 2)]
    if not pairs:
        pytest.skip("no interior pair")
    i, j = rng.choice(pairs)
    tab = delta_hitting_table(t, spine, i, j)
    assert tab.mismatches() == {tab.x: 2, tab.y: 2}


def test_fig2_full_run(fig2_tree):
    assert diameter(fig2_tree) == 6
    rep = mixing_time(fig2_tree)
    assert (rep.z, rep.z_partner) == (0, 5)
    cert = evolve(fig2_tree)
    kinds = [s.kind for s in cert.steps]
    assert kinds == ["sigma", "sigma", "tau_pair", "tau_pair", "tau_single", "tau_single"]
    chain = [cert.initial_tmix] + [s.after_tmix for s in cert.steps]
    assert chain == [Fraction(x, y) for x, y in
                     [(27, 2), (29, 2), (89, 6), (33, 2), (103, 6), (109, 6), (115, 6)]]
    assert cert.final_params == BroomParams(13, 5, 5, 4)
    assert cert.target_tmix == Fraction(149, 6)
    assert "compare: T_mix(D_{13,6})" in cert.to_text()
    rec = json.loads(cert.to_json())
    assert rec["format"] == "mixtree/evolution-certificate"
    assert len(rec["steps"]) == 6


def test_phases_individually(fig2_tree):
    g, steps, path = phase1_caterpillarify(fig2_tree)
    assert len(steps) == 2 and is_caterpillar(g) and len(path) == 6
    g2, steps2, spine = phase2_to_broomlike(g, path)
    assert len(steps2) == 2
    g3, steps3, spine = phase3_to_balanced(g2, spine)
    assert len(steps3) == 2 and is_balanced_broom(g3)


def test_zero_step_inputs():
    b = balanced_broom(11, 5)
    assert evolve(b.tree).steps == ()
    assert phase1_caterpillarify(FIG3)[1] == []
    db = build_double_broom(BroomParams.from_split(10, 4, 4))
    assert phase2_to_broomlike(db.tree, db.spine)[1] == []


def test_one_balancing_step():
    db = build_double_broom(BroomParams.from_split(11, 4, 5))  # ell = r + 2
    g, steps, _ = phase3_to_balanced(db.tree, db.spine)
    assert len(steps) == 1 and is_balanced_broom(g)


def test_phase3_rejects_busy_interior():
    with pytest.raises(NotBroomLikeError):
        phase3_to_balanced(Tree(list(FIG3.edges) + [(2, 12)]), SPINE)


@pytest.mark.parametrize("seed", range(20))
def test_random_evolution(seed):
    rng = random.Random(seed)
    t = random_tree(rng, rng.randint(6, 16))
    cert = evolve(t)
    chain = [cert.initial_tmix] + [s.after_tmix for s in cert.steps]
    assert all(a < b for a, b in zip(chain, chain[1:]))
    assert is_balanced_broom(cert.final_tree)
    assert cert.final_tmix <= cert.target_tmix
