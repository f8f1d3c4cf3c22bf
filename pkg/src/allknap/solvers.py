"""End-to-end pipelines: kernels, then propagation, then the tail beyond u^2."""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .convolution import bool_convolve
from .core import Instance, LexOrder, Mode, SolutionTable, check, dedupe
from .kernel import (KernelTable, compute_kernels_boolean, compute_kernels_knapsack,
                     kernel_bound, layer_frontiers, _indicator)
from .propagation import ResidueTable, extend_tail, iter_tail, propagate_kernels, propagate_modular
from .witness import (WitnessProblem, adaptive_min_witness, min_witness_fixed_order,
                      min_witness_random_order)

STRATEGIES = ("random", "adaptive", "identity")


def _layer_problems(inst: Instance, k: int):
    layers, fresh, counts = layer_frontiers(inst, k)
    f = _indicator(inst.weights, inst.u + 1)
    problems = [WitnessProblem(f, layers[j - 1], counts[j - 1], fresh[j]) for j in range(1, k + 1)]
    return layers, problems


def boolean_kernels(inst: Instance, strategy: str = "random", seed: int = 0,
                    k: Optional[int] = None) -> KernelTable:
    """Kernels for an instance with distinct weights.

    The order over items is whatever order over weights the witness
    strategy settles on: a random one, the adaptive deterministic one, or
    the input order for ``identity``.
    """
    check(strategy in STRATEGIES, f"unknown order strategy {strategy!r}")
    check(len(set(inst.weights)) == inst.n, "weights must be distinct")
    k = kernel_bound(inst.mode, inst.u) if k is None else k
    layers, problems = _layer_problems(inst, k)
    if strategy == "random":
        res = min_witness_random_order(problems, np.random.default_rng(seed))
    elif strategy == "adaptive":
        res = adaptive_min_witness(problems)
    else:
        res = min_witness_fixed_order(problems, list(inst.weights))
    item_of_weight = {w: i for i, w in enumerate(inst.weights)}
    order = LexOrder(tuple(item_of_weight[int(w)] for w in res.order))
    witnesses = [(p.outputs, w) for p, w in zip(problems, res.witnesses)]
    return compute_kernels_boolean(inst, order, witnesses, layers, k)


def lexmin_table(inst: Instance, strategy: str = "random", seed: int = 0,
                 T: Optional[int] = None, backend: Optional[str] = None) -> SolutionTable:
    """Lexicographically smallest optimal solution for every target in [0, T].

    T defaults to min(t, u^2).  Coinchange instances are deduplicated first;
    the returned table carries the reduced instance and the order used.
    Knapsack always runs under the identity order.
    """
    if inst.mode is Mode.KNAPSACK:
        kernels = compute_kernels_knapsack(inst, LexOrder.identity(inst.n))
    else:
        check(inst.mode is Mode.COINCHANGE, "lexmin_table supports coinchange and knapsack")
        reduced, _, _ = dedupe(inst)
        kernels = boolean_kernels(reduced, strategy, seed)
    return propagate_kernels(kernels, T, backend)


def _all_targets(table: SolutionTable, t: int, sign: int = 1) -> list[Optional[int]]:
    inst, order = table.inst, table.order
    values, present = table.value, table.present
    head = [sign * int(v) if p else None for v, p in zip(values[1:t + 1].tolist(), present[1:t + 1].tolist())]
    if t <= table.T:
        return head
    if not inst.n:
        return head + [None] * (t - len(head))
    for _, v, p in iter_tail(values, present, inst, order, t):
        head.extend(sign * int(x) if q else None for x, q in zip(v.tolist(), p.tolist()))
    return head


def solve_coinchange(inst: Instance, order_strategy: str = "random", seed: int = 0,
                     backend: Optional[str] = None) -> list[Optional[int]]:
    """Minimum number of coins for every target 1..t (None when infeasible)."""
    check(inst.mode.unweighted, "coinchange needs an unweighted instance")
    inst = inst.with_mode(Mode.COINCHANGE)
    if inst.t == 0:
        return []
    table = lexmin_table(inst, order_strategy, seed, backend=backend)
    return _all_targets(table, inst.t, sign=-1)


def solve_knapsack(inst: Instance, backend: Optional[str] = None) -> list[Optional[int]]:
    """Maximum value for every target 1..t (None when infeasible)."""
    check(inst.mode is Mode.KNAPSACK, "knapsack needs profits")
    if inst.t == 0:
        return []
    return _all_targets(lexmin_table(inst, backend=backend), inst.t)


def residue_table(inst: Instance, order_strategy: str = "random", seed: int = 0,
                  backend: Optional[str] = None) -> ResidueTable:
    check(inst.n >= 1, "residue table needs at least one weight")
    reduced, _, _ = dedupe(inst.with_mode(Mode.RESIDUE))
    check(reduced.modulus == inst.modulus, "first weight must survive deduplication")
    kernels = boolean_kernels(reduced, order_strategy, seed)
    return propagate_modular(kernels, backend)


def solve_residue_table(inst: Instance, order_strategy: str = "random", seed: int = 0,
                        backend: Optional[str] = None) -> list[Optional[int]]:
    """Minimum feasible sum in each residue class modulo the first weight."""
    check(inst.n >= 1, "residue table needs at least one weight")
    if inst.modulus == 1:
        return [0]
    return residue_table(inst, order_strategy, seed, backend).sums()


def solve_subsetsum(inst: Instance) -> np.ndarray:
    """Feasibility of every target 0..t by repeated squaring of the reachable set."""
    check(inst.mode.unweighted, "subset sum needs an unweighted instance")
    t = inst.t
    s = np.zeros(t + 1, dtype=np.uint8)
    s[0] = 1
    for w in set(inst.weights):
        if w <= t:
            s[w] = 1
    for _ in range(max(1, t).bit_length() + 1):
        c, _ = bool_convolve(s, s)
        s = s | c[:t + 1]
    return s.astype(bool)


def maxplus_via_knapsack(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """(max,+) convolution of two equal-length arrays through one knapsack instance.

    Items (4n+i, a_i+x) and (2n+i, b_i) with capacity 8n: position 6n+s is
    reached by one a-item and one b-item with i+j = s, or by three b-items.
    With x = 5M+1 (M the largest magnitude) the first kind always wins.
    """
    n = len(a)
    check(n == len(b) and n >= 1, "arrays must be non-empty and of equal length")
    M = max(abs(int(v)) for v in list(a) + list(b))
    x = 5 * M + 1
    weights = [4 * n + i for i in range(n)] + [2 * n + i for i in range(n)]
    profits = [int(v) + x for v in a] + [int(v) for v in b]
    inst = Instance(tuple(weights), 8 * n, Mode.KNAPSACK, tuple(profits))
    values = solve_knapsack(inst)
    return [values[6 * n + s - 1] - x for s in range(2 * n - 1)]


def tail_values(table: SolutionTable, t: int):
    """Values and feasibility over (T, t] for a propagated head table."""
    return extend_tail(table.value, table.present, table.inst, table.order, t)
