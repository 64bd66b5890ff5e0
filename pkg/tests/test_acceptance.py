"""Acceptance suite: one PASS/FAIL line per criterion, with its runtime limit.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines as they are
produced; they are also collected in the "acceptance criteria" section of the
terminal summary.
"""

import time
from fractions import Fraction as F
from math import asin, ceil, sin, sqrt

import numpy as np

from walkattack import attack, grover, markov, qwalk
from walkattack.attack import AttackScenario, key_range, plan_attack, run_attack
from walkattack.ciphers import make_cipher

XOR = make_cipher("xor16")
KP = AttackScenario("known-plaintext", pairs=((0x1234, 0xACDB),), secret_key=0xBEEF)
FULL = key_range(0, 0xFFFF)

# Printed distribution tables for the |0>|0> and |1>|0> starts.
COIN0_PRINTED = {
    1: {-1: F(1, 2), 1: F(1, 2)},
    2: {-2: F(1, 4), 0: F(1, 2), 2: F(1, 4)},
    3: {-3: F(1, 8), -1: F(5, 8), 1: F(1, 8), 3: F(1, 8)},
    4: {-4: F(1, 16), -2: F(2, 16), 0: F(2, 16), 2: F(10, 16), 4: F(1, 16)},
}
COIN1_PRINTED = {
    1: {-1: F(1, 2), 1: F(1, 2)},
    2: {-2: F(1, 4), 0: F(1, 2), 2: F(1, 4)},
    3: {-3: F(1, 8), -1: F(5, 8), 1: F(1, 8), 3: F(1, 8)},
    4: {-4: F(1, 16), -2: F(10, 16), 0: F(2, 16), 2: F(2, 16), 4: F(1, 16)},
}


def walk(kind, n, exact):
    return qwalk.distribution(qwalk.evolve(qwalk.initial_state(kind, max(n, 1), exact=exact), n))


def mirror(row):
    return {-i: p for i, p in row.items()}


def test_criterion_1_walk_tables(verdict):
    t0 = time.perf_counter()
    exact_ok, float_err, notes = True, 0.0, []
    for kind, table in (("coin0", COIN0_PRINTED), ("coin1", COIN1_PRINTED)):
        for n in range(1, 5):
            de = walk(kind, n, exact=True).as_dict()
            df = walk(kind, n, exact=False).as_dict()
            want = table[n]
            if kind == "coin0" and n == 3 and de != want and de == mirror(want):
                # the printed three-step coin0 row is the mirror image of the
                # one its own ket expansion (and the four-step row) implies
                notes.append("coin0 n=3 printed row is mirrored; matched to its mirror")
                want = mirror(want)
            exact_ok &= de == want
            float_err = max(float_err, max(abs(df.get(i, 0.0) - float(p)) for i, p in want.items()))
            float_err = max(float_err, max((abs(p) for i, p in df.items() if i not in want), default=0.0))
    coin1_mirror = all(walk("coin1", n, True).as_dict() == mirror(walk("coin0", n, True).as_dict()) for n in range(1, 5))
    ok = exact_ok and float_err < 1e-12 and coin1_mirror
    detail = f"exact={exact_ok} float_max_err={float_err:.1e} coin1_mirrors_coin0={coin1_mirror}"
    assert verdict(1, ok, time.perf_counter() - t0, 1, "; ".join([detail] + notes))


def test_criterion_2_edge_and_parity(verdict):
    t0 = time.perf_counter()
    ok = True
    for n in range(0, 21):
        d = walk("coin0", n, exact=True)
        ok &= d[n] == F(1, 2**n) and d[-n] == F(1, 2**n)
        ok &= all(d[i] == 0 for i in range(-n - 1, n + 2) if (n + i) % 2 == 1)
    assert verdict(2, ok, time.perf_counter() - t0, 1, "edge 1/2^n and odd-parity zeros exact for n <= 20")


def test_criterion_3_solvers_and_monte_carlo(verdict):
    t0 = time.perf_counter()
    solve_err, mc_time_rel, mc_prob_abs = 0.0, 0.0, 0.0
    for n in (10, 100, 1000):
        for m in (1, 5):
            w = markov.build_uniform_walk(n, range(m))
            t = markov.expected_absorption_time(w, method="dense")
            solve_err = max(solve_err, np.max(np.abs(t - (n - 1) / m)))
            for j in w.marked:
                f = markov.absorption_probabilities(w, j, method="dense")
                solve_err = max(solve_err, np.max(np.abs(f - 1 / m)))
            start = int(w.transient[0])
            times, final = markov.sample_absorption_times(w, start, 100_000, seed=n * 10 + m, return_states=True)
            mc_time_rel = max(mc_time_rel, abs(times.mean() / ((n - 1) / m) - 1))
            freq = np.bincount(final, minlength=n)[list(w.marked)] / len(final)
            mc_prob_abs = max(mc_prob_abs, np.max(np.abs(freq - 1 / m)))
    ok = solve_err < 1e-9 and mc_time_rel < 0.01 and mc_prob_abs < 0.01
    detail = f"dense_max_err={solve_err:.1e} mc_time_rel_err={mc_time_rel:.4f} mc_absorb_abs_err={mc_prob_abs:.4f}"
    assert verdict(3, ok, time.perf_counter() - t0, 30, detail)


def test_criterion_4_limit_distribution(verdict):
    t0 = time.perf_counter()
    n, steps = 50, 500
    w = markov.build_uniform_walk(n, [0])
    Pk = markov.n_step_matrix(w.P, steps)
    pi = np.zeros(n)
    pi[0] = 1.0
    dev = np.max(np.abs(Pk - pi), axis=1)
    worst = float(dev.max())
    # from an unmarked state the walk is still unabsorbed with probability (1 - 1/(n-1))^steps
    geometric = (1 - 1 / (n - 1)) ** steps
    needed = ceil(np.log(1e-8) / np.log(1 - 1 / (n - 1)))
    detail = (
        f"max_row_dev={worst:.3e} (geometric tail {geometric:.3e}); "
        f"marked row dev={dev[0]:.1e}; 1e-8 needs >= {needed} steps"
    )
    ok = verdict(4, worst < 1e-8, time.perf_counter() - t0, 5, detail)
    assert abs(worst - geometric) < 1e-12
    assert ok, detail


def test_criterion_4_companion_convergence_rate():
    """The deviation decays exactly geometrically, so the tolerance is met at the predicted power."""
    n = 50
    w = markov.build_uniform_walk(n, [0])
    needed = ceil(np.log(1e-8) / np.log(1 - 1 / (n - 1)))
    for k in (500, needed - 1, needed):
        dev = np.max(np.abs(markov.n_step_matrix(w.P, k)[:, 0] - 1))
        assert abs(dev - (48 / 49) ** k) < 1e-12
    assert np.max(np.abs(markov.n_step_matrix(w.P, needed)[:, 0] - 1)) < 1e-8
    pi = markov.stationary_distribution(w.P)
    np.testing.assert_allclose(pi, np.eye(1, n).ravel(), atol=1e-12)


def test_criterion_5_grover_closed_form(verdict):
    t0 = time.perf_counter()
    worst, cases = 0.0, 0
    sizes = [2**e for e in range(2, 13)] + [5, 7, 100, 1000, 3001]
    for N in sizes:
        for m in (1, 2, 4):
            if m >= N:
                continue
            o = grover.OracleSpec.from_marked(N, range(m))
            s = grover.init_uniform(N)
            theta = asin(sqrt(m / N))
            for k in range(0, 2 * grover.optimal_iterations(N, m) + 1):
                worst = max(worst, abs(grover.success_probability(s, o) - sin((2 * k + 1) * theta) ** 2))
                cases += 1
                s = grover.grover_iterate(s, o, 1)
    o = grover.OracleSpec.from_marked(4, [0])
    p41 = grover.success_probability(grover.grover_iterate(grover.init_uniform(4), o, 1), o)
    ok = worst < 1e-9 and abs(p41 - 1.0) < 1e-15
    detail = f"{cases} (N, m, k) cases, max_err={worst:.1e}; N=4 m=1 k=1 -> {p41!r}"
    assert verdict(5, ok, time.perf_counter() - t0, 10, detail)


def test_criterion_6_attack_reconciliation(verdict):
    t0 = time.perf_counter()
    s = attack.speedup_report(XOR, KP, FULL, seed=2024, trials=1000)
    classical_ok = abs(s.classical_mean_steps - 65535) < 3 * s.classical_stderr
    plan = plan_attack(XOR, KP, FULL, "grover", 0.9, seed=2024, trials=1000)
    r = run_attack(XOR, KP, plan)
    queries = set(r.steps_or_queries_per_trial)
    grover_ok = plan.step_budget == 201 and queries == {201} and r.empirical_success_rate >= 0.999
    # delta-method band for the empirical ratio
    ratio_se = s.classical_stderr / s.quantum_mean_queries
    ratio_ok = abs(s.predicted_ratio - 326.04) < 0.01 and abs(s.ratio - s.predicted_ratio) < 3 * ratio_se
    detail = (
        f"classical_mean={s.classical_mean_steps:.1f}+-{s.classical_stderr:.1f}; "
        f"grover queries={sorted(queries)} success={r.empirical_success_rate:.4f}; "
        f"ratio={s.ratio:.1f} (predicted {s.predicted_ratio:.2f})"
    )
    assert verdict(6, classical_ok and grover_ok and ratio_ok, time.perf_counter() - t0, 60, detail)


def test_criterion_7_iteration_law(verdict):
    t0 = time.perf_counter()
    plan = plan_attack(XOR, KP, FULL, "classical-uniform", 0.9, seed=77, step_budget=659, trials=1000)
    p = plan.per_attempt_success
    r = run_attack(XOR, KP, plan)
    target = 1 - (1 - p) ** plan.iterations
    sigma = sqrt(target * (1 - target) / r.trials_run)
    ok = abs(p - 0.01) < 0.001 and plan.iterations == ceil(1 / p) and abs(r.empirical_success_rate - target) < 3 * sigma
    detail = (
        f"p={p:.5f} iterations={plan.iterations} empirical={r.empirical_success_rate:.3f} "
        f"target={target:.3f} sigma={sigma:.3f}"
    )
    assert verdict(7, ok, time.perf_counter() - t0, 60, detail)


def test_criterion_8_symmetry_audit(verdict):
    t0 = time.perf_counter()
    s = qwalk.initial_state("balanced-imag", 100)
    asym = 0.0
    for n in range(1, 101):
        s = qwalk.step(s)
        pr = qwalk.distribution(s).probabilities
        asym = max(asym, float(np.max(np.abs(pr - pr[::-1]))))
    real2 = walk("balanced-real", 2, exact=True).as_dict()
    ok = asym < 1e-12 and real2 == {-2: F(1, 2), 0: F(1, 2)}
    detail = f"balanced-imag max asymmetry n<=100 {asym:.1e}; balanced-real n=2 {dict(sorted(real2.items()))}"
    assert verdict(8, ok, time.perf_counter() - t0, 5, detail)
