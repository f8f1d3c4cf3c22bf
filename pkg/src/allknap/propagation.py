"""Phase two: extend kernel solutions to every target.

Each stored solution is extended by one more copy of an item already in
its support; a candidate replaces the stored entry when its value is
higher, or equal and lexicographically smaller.  The lex tie-break is what
makes the result exact: an equal-value entry whose support lacks the
needed item would stall the extension.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from . import _backend
from .core import Instance, LexOrder, Solution, SolutionTable, check
from .kernel import KernelTable

INT64_SAFE = 2**62


def _by_rank(inst: Instance, order: LexOrder):
    perm = list(order.perm)
    weight = np.asarray([inst.weights[i] for i in perm], dtype=np.int64)
    profits = inst.effective_profits()
    profit = [profits[i] for i in perm]
    return weight, profit


def needs_wide(inst: Instance, T: int) -> bool:
    """True when values over [0, T] might leave the int64 range."""
    if not inst.n:
        return False
    pmax = max(abs(p) for p in inst.effective_profits())
    return pmax * (T // min(inst.weights) + 1) >= INT64_SAFE


def _widen(table: SolutionTable) -> None:
    if not table.wide:
        table.value = table.value.astype(object)


def propagate(table: SolutionTable, backend: Optional[str] = None) -> SolutionTable:
    """Scan targets upward, pushing each solution to j + w_x for x in its support (in place)."""
    inst, order = table.inst, table.order
    weight, profit = _by_rank(inst, order)
    wide = table.wide or needs_wide(inst, table.T)
    if wide:
        _widen(table)
        kernels = _backend.get("python")
        profit = np.asarray(profit, dtype=object)
    else:
        kernels = _backend.get(backend)
        profit = np.asarray(profit, dtype=np.int64)
    kernels.propagate_rows(table.ranks, table.mults, table.nsupp, table.present,
                           table.value, table.size, weight, profit)
    return table


def propagate_kernels(kernels: KernelTable, T: Optional[int] = None, backend: Optional[str] = None) -> SolutionTable:
    inst = kernels.inst
    T = min(inst.t, inst.u**2) if T is None else T
    return propagate(kernels.seed(T, wide=needs_wide(inst, T)), backend)


class ResidueTable(SolutionTable):
    """Per-residue best solution; ``total`` holds each solution's sum."""

    def __init__(self, modulus: int, width: int, order: LexOrder, inst: Instance):
        super().__init__(modulus - 1, width, order, inst)
        self.modulus = modulus
        self.total = np.zeros(modulus, dtype=np.int64)

    def __getitem__(self, r: int) -> Optional[Solution]:
        if not self.present[r]:
            return None
        perm = self.order.perm
        k = int(self.nsupp[r])
        entries = tuple((perm[int(x)], int(m)) for x, m in zip(self.ranks[r, :k], self.mults[r, :k]))
        return Solution(entries, int(self.value[r]), int(self.size[r]), int(self.total[r]))

    def sums(self) -> list[Optional[int]]:
        return [int(s) if p else None for s, p in zip(self.total.tolist(), self.present.tolist())]


def propagate_modular(kernels: KernelTable, backend: Optional[str] = None) -> ResidueTable:
    """Dijkstra over residues mod w_1, seeded with the smallest kernel per residue.

    Residues are settled in order of their solution's sum; equal sums are
    ranked by value and then lexicographically.
    """
    inst, order = kernels.inst, kernels.order
    mod = inst.modulus
    table = ResidueTable(mod, kernels.width, order, inst)
    pos = np.flatnonzero(kernels.present)
    res, first = np.unique(pos % mod, return_index=True)
    seeds = pos[first]
    R, M, NS, size, value = kernels.rows_for(seeds)
    table.ranks[res], table.mults[res], table.nsupp[res] = R, M, NS
    table.size[res], table.value[res], table.total[res] = size, value, seeds
    table.present[res] = 1
    weight, profit = _by_rank(inst, order)
    _backend.get(backend).propagate_residues(
        table.ranks, table.mults, table.nsupp, table.present, table.value, table.size,
        table.total, weight, np.asarray(profit, dtype=np.int64))
    return table


def best_ratio_item(inst: Instance, order: LexOrder) -> int:
    """Item maximising profit/weight; ties to the smaller weight, then the smaller rank."""
    check(inst.n > 0, "no items")
    profits = inst.effective_profits()
    return min(range(inst.n),
               key=lambda i: (-Fraction(profits[i], inst.weights[i]), inst.weights[i], order.rank[i]))


def iter_tail(values: np.ndarray, present: np.ndarray, inst: Instance, order: LexOrder, t: int,
              block: int = 1 << 16) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """Yield (start, values, present) blocks covering (T, t], T = len(values) - 1.

    Beyond u^2 every feasible target j has j - w_s feasible for the best
    ratio item s, and value[j] = value[j - w_s] + p_s.  Only the last w_s
    values need to be kept, so memory stays bounded.
    """
    T = len(values) - 1
    check(T >= min(t, inst.u**2), "head must cover [0, min(t, u^2)]")
    if t <= T:
        return
    s = best_ratio_item(inst, order)
    ws, ps = inst.weights[s], inst.effective_profits()[s]
    window_v = values[T + 1 - ws:T + 1].copy() if T + 1 >= ws else None
    window_p = present[T + 1 - ws:T + 1].copy() if T + 1 >= ws else None
    check(window_v is not None, "head shorter than the ratio item's weight")
    j = T + 1
    step = max(ws, (block // ws) * ws)
    while j <= t:
        length = min(step, t + 1 - j)
        out_v = np.empty(length, dtype=values.dtype)
        out_p = np.empty(length, dtype=present.dtype)
        for off in range(0, length, ws):
            n = min(ws, length - off)
            out_v[off:off + n] = window_v[:n] + ps
            out_p[off:off + n] = window_p[:n]
            window_v = np.concatenate([window_v[n:], out_v[off:off + n]])
            window_p = np.concatenate([window_p[n:], out_p[off:off + n]])
        yield j, out_v, out_p
        j += length


def extend_tail(values: np.ndarray, present: np.ndarray, inst: Instance, order: LexOrder, t: int):
    """Values and feasibility over (T, t] as two arrays."""
    parts = list(iter_tail(values, present, inst, order, t))
    if not parts:
        return values[:0].copy(), present[:0].copy()
    return np.concatenate([p[1] for p in parts]), np.concatenate([p[2] for p in parts])
