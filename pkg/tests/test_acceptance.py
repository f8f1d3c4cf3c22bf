"""Acceptance suite: eight end-to-end criteria, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""
import math
import random
import statistics
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from allknap.convolution import maxplus_convolve  # noqa: E402
from allknap.core import Instance, LexOrder, Mode  # noqa: E402
from allknap.oracle import dijkstra_residues, dp_lexmin_solutions, dp_values  # noqa: E402
from allknap.propagation import propagate_modular  # noqa: E402
from allknap.solvers import (boolean_kernels, lexmin_table, maxplus_via_knapsack, solve_coinchange,  # noqa: E402
                             solve_knapsack, solve_residue_table)
from allknap.witness import (WitnessProblem, adaptive_min_witness, greedy_hitting_set,  # noqa: E402
                             min_witness_random_order, sample_witnesses)

from conftest import ACCEPTANCE_LINES, random_instance, witness_sets  # noqa: E402


def report(number, title, ok, detail):
    line = f"criterion {number} {title}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_coinchange_oracle():
    rng = random.Random(101)
    start = time.perf_counter()
    bad = runs = 0
    for _ in range(500):
        inst = random_instance(rng, Mode.COINCHANGE, 8, 50, 2000)
        ref = [None if v is None else -v for v in dp_values(inst)[1:]]
        for seed in range(5):
            runs += 2
            bad += solve_coinchange(inst, "random", seed) != ref
            bad += solve_coinchange(inst, "adaptive", seed) != ref
    elapsed = time.perf_counter() - start
    report(1, "coinchange vs DP", bad == 0 and elapsed < 120,
           f"{runs} solves over 500 instances, {bad} mismatches, {elapsed:.1f} s, limit 120 s")


def test_criterion_2_knapsack_oracle():
    rng = random.Random(202)
    start = time.perf_counter()
    bad = 0
    for _ in range(200):
        inst = random_instance(rng, Mode.KNAPSACK, 6, 24, 600, p_max=20)
        bad += solve_knapsack(inst) != dp_values(inst)[1:]
    elapsed = time.perf_counter() - start
    report(2, "knapsack vs DP", bad == 0 and elapsed < 120,
           f"200 instances, {bad} mismatches, {elapsed:.1f} s, limit 120 s")


def test_criterion_3_residue_oracle():
    rng = random.Random(303)
    start = time.perf_counter()
    bad = 0
    for i in range(300):
        inst = random_instance(rng, Mode.RESIDUE, 8, 200, 0)
        strategy = ("random", "adaptive")[i % 2]
        bad += solve_residue_table(inst, strategy, seed=i) != dijkstra_residues(inst)
    elapsed = time.perf_counter() - start
    report(3, "residue table vs Dijkstra", bad == 0 and elapsed < 60,
           f"300 instances, {bad} mismatches, {elapsed:.1f} s, limit 60 s")


def _modular_lexmin(table, mod):
    best = [None] * mod
    for j in range(table.T + 1):
        if best[j % mod] is None and table[j] is not None:
            best[j % mod] = table[j]
    return best


def test_criterion_4_structure_of_oracle_solutions():
    rng = random.Random(404)
    violations = checked = 0
    modes = [Mode.SUBSETSUM, Mode.COINCHANGE, Mode.KNAPSACK, Mode.RESIDUE]
    for i in range(100):
        mode = modes[i % 4]
        inst = random_instance(rng, mode, 6, 30, 900)
        order = LexOrder(tuple(rng.sample(range(inst.n), inst.n)))
        if mode is Mode.RESIDUE:
            # minimum sum per residue is reached below modulus * u
            inst = inst.with_mode(Mode.COINCHANGE).with_t(min(4000, inst.modulus * inst.u))
        table = dp_lexmin_solutions(inst, order)
        first = order.perm[0]
        for j in range(table.T + 1):
            s = table[j]
            if s is None:
                continue
            checked += 1
            violations += math.prod(m + 1 for _, m in s.entries) > j + 1
            if mode is Mode.SUBSETSUM:
                violations += len(s) > math.log2(inst.u) + 1
                violations += math.prod(m + 1 for x, m in s.entries if x != first) > inst.weights[first]
            for x in s.support:
                violations += table[j - inst.weights[x]].entries != s.remove(x, inst).entries
        if mode is Mode.RESIDUE:
            mod = inst.modulus
            best = _modular_lexmin(table, mod)
            for s in best:
                if s is None:
                    continue
                for x in s.support:
                    violations += best[(s.total - inst.weights[x]) % mod].entries != s.remove(x, inst).entries
    report(4, "structural properties of lex-min optima", violations == 0,
           f"{checked} table entries, {violations} violations")


def test_criterion_5_whole_table_lexmin():
    rng = random.Random(505)
    bad = 0
    for i in range(100):
        mode = (Mode.KNAPSACK, Mode.COINCHANGE)[i % 2]
        inst = random_instance(rng, mode, 6, 30, 900)
        table = lexmin_table(inst, ("random", "adaptive")[i // 2 % 2], seed=i)
        bad += not table.equals(dp_lexmin_solutions(table.inst, table.order, table.T))
        if mode is Mode.COINCHANGE and len(set(inst.weights)) == inst.n:
            # modular tables must match the per-residue lex-min too
            res = propagate_modular(boolean_kernels(inst.with_mode(Mode.RESIDUE), "random", seed=i))
            full = dp_lexmin_solutions(table.inst.with_t(min(4000, inst.modulus * inst.u)), res.order)
            best = _modular_lexmin(full, inst.modulus)
            bad += [s.entries if s else None for s in res] != [s.entries if s else None for s in best]
    report(5, "propagated tables equal exact lex-min tables", bad == 0, f"100 instances, {bad} differing tables")


def test_criterion_6_witness_machinery():
    rng = np.random.default_rng(606)
    bad = hs_bad = 0
    for _ in range(200):
        n = int(rng.integers(1, 257))
        m = int(rng.integers(1, 257))
        a = (rng.random(n) < rng.uniform(0.05, 0.9)).astype(np.uint8)
        b = (rng.random(m) < rng.uniform(0.05, 0.9)).astype(np.uint8)
        p = WitnessProblem.build(a, b)
        brute = witness_sets(a, b, p.outputs)
        for res in (min_witness_random_order([p], rng), adaptive_min_witness([p])):
            rank = res.ranks(n)
            bad += any(got != min(ws, key=lambda k: rank[k]) for ws, got in zip(brute, res.witnesses[0]))
        R = int(rng.integers(1, 9))
        sets = [ws for ws in brute if len(ws) >= R]
        S = set(greedy_hitting_set(sets, R, n))
        bound = math.ceil(n / R * math.log(max(2, len(sets))))
        hs_bad += not all(S & set(s) for s in sets) or len(S) > bound
    p = WitnessProblem.build([0, 1, 1, 1, 1], [0, 1, 1, 1, 1], outputs=[5])
    draws = np.array([sample_witnesses(p, rng)[0] for _ in range(10_000)])
    freq = np.array([(draws == k).mean() for k in (1, 2, 3, 4)])
    sigma = math.sqrt(0.25 * 0.75 / 10_000)
    uniform = bool((np.abs(freq - 0.25) <= 5 * sigma).all())
    report(6, "witness machinery", bad == 0 and hs_bad == 0 and uniform,
           f"200 pairs, {bad} wrong minima, {hs_bad} hitting-set failures, "
           f"sample frequencies {np.round(freq, 4).tolist()}")


def test_criterion_7_reduction():
    rng = random.Random(707)
    bad = 0
    for _ in range(100):
        M = rng.choice([5, 100, 10**6])
        a = [rng.randint(-M, M) for _ in range(8)]
        b = [rng.randint(-M, M) for _ in range(8)]
        bad += maxplus_via_knapsack(a, b) != maxplus_convolve(a, b)
    report(7, "(max,+) through knapsack", bad == 0, f"100 pairs, {bad} mismatches")


def _median_time(fn, repeats=3):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times)


@pytest.mark.slow
def test_criterion_8_scaling():
    rng = np.random.default_rng(808)
    lines = []
    ok = True
    # one weight shape scaled with u, so every point has a comparable number of reachable sums
    fractions = rng.uniform(0.05, 1.0, 7)
    for strategy in ("random", "adaptive"):
        series = []
        for u in (2**14, 2**15, 2**16, 2**17):
            ws = (u,) + tuple(int(f * u) for f in fractions)
            inst = Instance(ws, 0, Mode.RESIDUE)
            series.append(_median_time(lambda: solve_residue_table(inst, strategy)))
        ratios = [b / a for a, b in zip(series, series[1:])]
        ok &= max(ratios) <= 2.6 and max(series) < 30
        lines.append(f"residue/{strategy} times {[round(s, 2) for s in series]} ratios {[round(r, 2) for r in ratios]}")
    ws = (1000,) + tuple(rng.integers(1, 1000, 7).tolist())
    for strategy in ("random", "adaptive"):
        series = []
        for t in (2**18, 2**19, 2**20):
            inst = Instance(ws, t, Mode.COINCHANGE)
            series.append(_median_time(lambda: solve_coinchange(inst, strategy)))
        ratios = [b / a for a, b in zip(series, series[1:])]
        ok &= max(ratios) <= 2.6 and max(series) < 30
        lines.append(f"coinchange/{strategy} times {[round(s, 2) for s in series]} ratios {[round(r, 2) for r in ratios]}")
    report(8, "scaling per doubling <= 2.6, each point < 30 s", ok, "; ".join(lines))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
