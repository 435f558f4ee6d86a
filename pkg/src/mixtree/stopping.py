"""Naive stopping rules: exact expected length, halting states, and a seeded
Monte Carlo simulator.

The naive rule from ``v`` to a target distribution ``tau`` draws a target
vertex ``w ~ tau`` up front and walks until it first hits ``w``.

A vertex ``w`` is a halting state of that rule exactly when reaching ``w``
forces a stop. On a tree the walk from ``v`` can reach ``w`` before a target
``t`` unless ``t`` sits on the v-w geodesic, so ``w`` is halting iff every
other support vertex of ``tau`` lies on that geodesic.

Simulation randomness: trials are grouped in fixed blocks of
``BLOCK_SIZE``; block ``b`` draws from ``SeedSequence(seed, spawn_key=(b,))``
so results do not depend on how blocks are scheduled.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import MixtreeInputError, StepLimitExceededError
from .mixing import as_distribution, hitting_column, stationary
from .tree import Tree, geodesic

BLOCK_SIZE = 4096
DEFAULT_MAX_STEPS = 10**7
SUMMARY_FORMAT = "mixtree/simulation-summary"
SUMMARY_VERSION = 1


@dataclass(frozen=True)
class NaiveRule:
    start: int
    target: tuple  # Fraction per vertex

    @classmethod
    def to_stationary(cls, tree: Tree, start: int) -> "NaiveRule":
        tree.check_vertex(start)
        return cls(start, stationary(tree))


def _validated(tree: Tree, rule: NaiveRule) -> tuple:
    tree.check_vertex(rule.start)
    return as_distribution(tree, rule.target)


def naive_expected_length(tree: Tree, rule: NaiveRule) -> Fraction:
    """sum_w tau_w H(start, w)."""
    tau = _validated(tree, rule)
    v = rule.start
    return sum((t * hitting_column(tree, w)[v] for w, t in enumerate(tau) if t),
               Fraction(0))


def naive_halting_states(tree: Tree, rule: NaiveRule) -> tuple[int, ...]:
    tau = _validated(tree, rule)
    support = [w for w, t in enumerate(tau) if t > 0]
    out = []
    for w in support:
        on = set(geodesic(tree, rule.start, w))
        if all(t in on for t in support):
            out.append(w)
    return tuple(out)


# -- simulation ----------------------------------------------------------------

def _block_rng(seed: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(block,))
    return np.random.Generator(np.random.Philox(ss))


def simulate_walk(tree: Tree, start: int, seed: int, max_steps: int,
                  until: Optional[int] = None) -> list[int]:
    """Trajectory of the simple random walk from ``start``.

    Without ``until`` the walk takes exactly ``max_steps`` steps. With
    ``until`` it stops on first reaching that vertex and raises
    ``StepLimitExceededError`` if that takes more than ``max_steps`` steps.
    """
    tree.check_vertex(start)
    if until is not None:
        tree.check_vertex(until)
    rng = _block_rng(seed, 0)
    adj = tree.adjacency
    cur = start
    walk = [cur]
    steps = 0
    while until is None or cur != until:
        if steps >= max_steps:
            if until is None:
                break
            raise StepLimitExceededError(f"did not reach {until} within {max_steps} steps")
        nb = adj[cur]
        if not nb:
            raise StepLimitExceededError("walk on a single vertex cannot move")
        cur = nb[int(rng.integers(len(nb)))]
        walk.append(cur)
        steps += 1
    return walk


@dataclass(frozen=True)
class SimulationSummary:
    trials: int
    mean_length: float
    std_error: float
    empirical_final: tuple
    tv_distance_to_target: float
    seed: int
    start: int
    analytic_length: Fraction

    @property
    def z_score(self) -> float:
        if self.std_error == 0:
            return 0.0 if self.mean_length == float(self.analytic_length) else math.inf
        return (self.mean_length - float(self.analytic_length)) / self.std_error

    def within(self, k: float = 3.0) -> bool:
        return abs(self.z_score) <= k

    def to_record(self) -> dict:
        q = self.analytic_length
        return {
            "format": SUMMARY_FORMAT,
            "version": SUMMARY_VERSION,
            "seed": self.seed,
            "trials": self.trials,
            "start": self.start,
            "mean_length": self.mean_length,
            "std_error": self.std_error,
            "analytic_length": {"num": q.numerator, "den": q.denominator},
            "z_score": self.z_score,
            "tv_distance_to_target": self.tv_distance_to_target,
            "empirical_final": list(self.empirical_final),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), indent=2) + "\n"


def _run_block(tree: Tree, rule: NaiveRule, tau_float, count: int, rng, max_steps: int):
    n = tree.n
    deg = np.array(tree.degrees, dtype=np.int64)
    width = int(deg.max())
    table = np.zeros((n, width), dtype=np.int64)
    for v, nb in enumerate(tree.adjacency):
        table[v, :len(nb)] = nb
    cdf = np.cumsum(tau_float)
    cdf[-1] = 1.0
    targets = np.searchsorted(cdf, rng.random(count), side="right")
    targets = np.minimum(targets, n - 1)
    pos = np.full(count, rule.start, dtype=np.int64)
    lengths = np.zeros(count, dtype=np.int64)
    active = np.flatnonzero(pos != targets)
    steps = 0
    while active.size:
        if steps >= max_steps:
            raise StepLimitExceededError(
                f"{active.size} walk(s) still running after {max_steps} steps")
        here = pos[active]
        pick = (rng.random(active.size) * deg[here]).astype(np.int64)
        pos[active] = table[here, pick]
        lengths[active] += 1
        steps += 1
        active = active[pos[active] != targets[active]]
    return lengths, pos


def simulate_naive_rule(tree: Tree, rule: NaiveRule, trials: int, seed: int,
                        max_steps: int = DEFAULT_MAX_STEPS) -> SimulationSummary:
    """Run the naive rule ``trials`` times and summarise lengths and final
    states. Reproducible for a given ``seed``."""
    tau = _validated(tree, rule)
    if trials < 1:
        raise MixtreeInputError("need at least one trial")
    tau_float = np.array([float(t) for t in tau])
    all_lengths, all_final = [], []
    done = 0
    block = 0
    while done < trials:
        count = min(BLOCK_SIZE, trials - done)
        lengths, final = _run_block(tree, rule, tau_float, count,
                                    _block_rng(seed, block), max_steps)
        all_lengths.append(lengths)
        all_final.append(final)
        done += count
        block += 1
    lengths = np.concatenate(all_lengths)
    final = np.concatenate(all_final)
    mean = float(lengths.mean())
    se = float(lengths.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    freq = np.bincount(final, minlength=tree.n) / trials
    tv = 0.5 * float(np.abs(freq - tau_float).sum())
    return SimulationSummary(
        trials=trials, mean_length=mean, std_error=se,
        empirical_final=tuple(float(f) for f in freq),
        tv_distance_to_target=tv, seed=seed, start=rule.start,
        analytic_length=naive_expected_length(tree, rule),
    )
