"""Acceptance criteria 1-11, each at its stated tolerance.

Every test records one ``PASS``/``FAIL`` line; the lines are printed in the
pytest terminal summary and also when this file is run as a script.
"""

import random
import sys
import time
from fractions import Fraction

from mixtree.brooms import (
    BroomParams,
    balanced_broom,
    balanced_mixing_closed_form,
    broom_hitting_closed_form,
    broom_mixing_closed_form,
    broom_pi_access_closed_form,
    build_double_broom,
    diameter_step_formulas,
    double_star_mixing,
)
from mixtree.enumeration import all_trees, extremal_table
from mixtree.mixing import (
    commute_time,
    hitting_matrix,
    hitting_vector_linear_oracle,
    mix_from_vertex,
    mixing_time,
    pessimal_vertices,
    pi_access,
)
from mixtree.stopping import NaiveRule, naive_expected_length, naive_halting_states, simulate_naive_rule
from mixtree.surgery import delta_hitting_table, evolve, is_balanced_broom, leaf_counts
from mixtree.tree import canonical_code, distance, path_tree, star_tree

from conftest import random_caterpillar, random_tree

RESULTS = []


def report(k, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_01_path_formula():
    t0 = time.perf_counter()
    bad = [n for n in range(2, 65)
           if mixing_time(path_tree(n)).t_mix != Fraction(2 * n * n - 4 * n + 3, 6)]
    dt = time.perf_counter() - t0
    report(1, not bad and dt < 1.0, f"T_mix(P_n) = (2n^2-4n+3)/6 for n=2..64, {dt:.3f}s, bad={bad}")


def test_02_star():
    bad = [n for n in range(3, 65) if mixing_time(star_tree(n)).t_mix != Fraction(3, 2)]
    not_unique = []
    for n in range(3, 11):
        star = canonical_code(star_tree(n))
        vals = [(mixing_time(t).t_mix, canonical_code(t)) for t in all_trees(n)]
        lo = min(v for v, _ in vals)
        if [c for v, c in vals if v == lo] != [star]:
            not_unique.append(n)
    report(2, not bad and not not_unique,
           f"T_mix(S_n) = 3/2 for n=3..64, unique minimiser n<=10; bad={bad} not_unique={not_unique}")


def test_03_worked_examples():
    p4, s4 = path_tree(4), star_tree(4)
    rp, rs = NaiveRule.to_stationary(p4, 0), NaiveRule.to_stationary(s4, 1)
    checks = {
        "P4 naive 19/6": naive_expected_length(p4, rp) == Fraction(19, 6),
        "P4 halting {v3}": naive_halting_states(p4, rp) == (3,),
        "S4 naive 5/2": naive_expected_length(s4, rs) == Fraction(5, 2),
        "S4 halting empty": naive_halting_states(s4, rs) == (),
        "S4 optimal 3/2": mix_from_vertex(s4, 1) == Fraction(3, 2),
    }
    report(3, all(checks.values()), ", ".join(f"{k}={v}" for k, v in checks.items()))


def test_04_closed_forms():
    t0 = time.perf_counter()
    count, bad = 0, []
    for n in range(3, 31):
        for d in range(2, n):
            for ell in range(1, n - d + 1):
                p = BroomParams.from_split(n, d, ell)
                b = build_double_broom(p)
                h, s = hitting_matrix(b.tree), b.spine
                ok = all(broom_hitting_closed_form(p, k) == h[s[0]][s[k]] for k in range(1, d + 1))
                ok &= all(broom_hitting_closed_form(p, k, to_end=True) == h[s[k]][s[d]]
                          for k in range(1, d))
                ok &= broom_pi_access_closed_form(p) == pi_access(b.tree, s[d])
                tm = mixing_time(b.tree).t_mix
                ok &= broom_mixing_closed_form(p) == tm
                if d == 3:
                    ok &= double_star_mixing(p.ell, p.r) == tm
                count += 1
                if not ok:
                    bad.append((n, d, ell))
    parity_bad = [(n, d) for n in range(4, 41) for d in range(3, n)
                  if balanced_mixing_closed_form(n, d) != mixing_time(balanced_broom(n, d).tree).t_mix]
    dt = time.perf_counter() - t0
    report(4, not bad and not parity_bad and dt < 60,
           f"{count} brooms n<=30 (3 hitting forms, pi-access, T_mix), parity n<=40; "
           f"{dt:.1f}s; bad={bad[:3]} parity_bad={parity_bad[:3]}")


def test_05_monotone_in_diameter():
    bad, nonpos = [], []
    for n in range(5, 201):
        if n <= 50:
            vals = [mixing_time(balanced_broom(n, d).tree).t_mix for d in range(3, n)]
        else:
            vals = [balanced_mixing_closed_form(n, d) for d in range(3, n)]
        if not all(a < b for a, b in zip(vals, vals[1:])):
            bad.append(n)
        for d in range(3, n - 1):
            if not all(v > 0 for v in diameter_step_formulas(n, d).values()):
                nonpos.append((n, d))
    report(5, not bad and not nonpos,
           "strictly increasing in d for n<=200 (engine n<=50, exact parity formula beyond); "
           f"both difference forms positive; bad={bad} nonpos={nonpos[:3]}")


def test_06_extremal_exhaustive():
    t0 = time.perf_counter()
    rows = [r for r in extremal_table(10) if r.n >= 5]
    failed = [(r.n, r.d) for r in rows if not r.passed]
    dt = time.perf_counter() - t0
    report(6, not failed and len(rows) == 27 and dt < 600,
           f"D_(n,d) unique argmax in T(n,d) for 5<=n<=10 ({len(rows)} pairs, {dt:.1f}s); failed={failed}")


def test_07_surgery_monotonicity():
    rng = random.Random(20240607)
    violations, steps = [], 0
    for k in range(200):
        t = random_tree(rng, rng.randint(6, 24))
        try:
            cert = evolve(t, check=True)
        except Exception as exc:  # any invariant failure counts
            violations.append((k, repr(exc)))
            continue
        chain = [cert.initial_tmix] + [s.after_tmix for s in cert.steps]
        if not all(a < b for a, b in zip(chain, chain[1:])) or not is_balanced_broom(cert.final_tree):
            violations.append((k, "chain"))
        steps += len(cert.steps)
    report(7, not violations, f"200 seeded trees, {steps} checked steps, violations={violations[:3]}")


def test_08_oracle_equivalence():
    rng = random.Random(8)
    bad = []
    for k in range(100):
        t = random_tree(rng, rng.randint(2, 16))
        h = hitting_matrix(t)
        for v in range(t.n):
            col = hitting_vector_linear_oracle(t, v)
            if any(h[u][v] != col[u] for u in range(t.n)):
                bad.append((k, "oracle"))
                break
        if any(commute_time(t, u, v) != 2 * (t.n - 1) * distance(t, u, v)
               for u in range(t.n) for v in range(t.n)):
            bad.append((k, "commute"))
    report(8, not bad, f"100 seeded trees n<=16, all entries exact, commute identity; bad={bad}")


def test_09_duality():
    bad, total = [], 0
    for n in range(2, 11):
        for t in all_trees(n):
            rep = mixing_time(t)
            total += 1
            ok = (mix_from_vertex(t, rep.z) == rep.t_mix == mix_from_vertex(t, rep.z_partner)
                  and rep.z_partner in pessimal_vertices(t, rep.z)
                  and rep.z in pessimal_vertices(t, rep.z_partner))
            if not ok:
                bad.append(canonical_code(t))
    report(9, not bad, f"{total} classes n<=10: H(z,pi)=H(z',pi)=T_mix and mutual pessimality; bad={len(bad)}")


def test_10_delta_table():
    rng = random.Random(4510)
    inner_bad, offsets, done = 0, set(), 0
    while done < 50:
        d = rng.randint(5, 10)
        t, spine = random_caterpillar(rng, d, rng.randint(3, 12))
        counts = leaf_counts(t, spine)
        pairs = [(i, j) for i in range(2, d - 1) for j in range(i, d - 1)
                 if counts[i] and counts[j] and (i != j or counts[i] >= 2)]
        if not pairs:
            continue
        i, j = rng.choice(pairs)
        tab = delta_hitting_table(t, spine, i, j)
        inner_bad += sum(tab.delta[v] != tab.predicted[v]
                         for v in range(t.n) if tab.case[v] in ("inner", "outer"))
        mm = tab.mismatches()
        offsets.add((mm.get(tab.x, 0), mm.get(tab.y, 0)))
        done += 1
    # pinned finding: printed x / y entries exceed the true change by exactly 2
    report(10, inner_bad == 0 and offsets == {(2, 2)},
           f"50 caterpillars: cases 0/-2 exact (bad={inner_bad}); x/y printed-minus-true offsets={offsets}")


def test_11_monte_carlo():
    lines, ok = [], True
    for name, tree, start in (("P4", path_tree(4), 0), ("D13,5", balanced_broom(13, 5).tree, 0)):
        rule = NaiveRule.to_stationary(tree, start)
        s = simulate_naive_rule(tree, rule, 10**5, seed=2024)
        again = simulate_naive_rule(tree, rule, 10**5, seed=2024)
        good = s.within(3) and s.tv_distance_to_target < 0.01 and s == again
        ok &= good
        lines.append(f"{name} mean={s.mean_length:.4f} exact={float(s.analytic_length):.4f} "
                     f"z={s.z_score:.2f} TV={s.tv_distance_to_target:.4f}")
    report(11, ok, "; ".join(lines))


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
