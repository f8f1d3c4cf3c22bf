"""Phase one: lexicographically smallest optimal solutions for all kernels.

A kernel is a target whose lex-smallest optimal solution uses at most k
items.  Kernels live in [0, k*u].  Boolean modes derive them from
feasibility layers plus minimum witnesses; knapsack mode runs k rounds of
(max,+) convolution on values packed as value*(n+1) - rank, so the maximum
also carries the smallest-rank witness.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .convolution import convolve_at, maxplus_convolve
from .core import EMPTY, Instance, LexOrder, Mode, SolutionTable, check

ENCODING_LIMIT = 2**126
DENSE_ITEMS = 64  # below this, rows are built from a dense count matrix


def kernel_bound(mode: Mode, u: int) -> int:
    """floor(2*log2(u)) + 1 for knapsack/coinchange, ceil(log2(u+1)) for residue."""
    check(u >= 1, "u must be positive")
    if Mode(mode) is Mode.RESIDUE:
        return u.bit_length()
    return (u * u).bit_length()


def _indicator(weights: Sequence[int], length: int) -> np.ndarray:
    f = np.zeros(length, dtype=np.uint8)
    f[list(weights)] = 1
    return f


def layer_frontiers(inst: Instance, k: int):
    """Layers v_0..v_k over [0, k*u], the sums new at each layer, and their witness counts.

    A sum new at layer j is a sum new at layer j-1 plus one weight, so each
    layer only shifts the previous frontier.  ``counts[j-1]`` is the number
    of weights x with v_{j-1}[i - x] = 1, aligned with ``fresh[j]``.
    """
    check(inst.mode.unweighted, "layers are for unweighted modes")
    E = k * inst.u
    W = np.unique(np.asarray(inst.weights, dtype=np.int64))
    v = np.zeros(E + 1, dtype=np.uint8)
    v[0] = 1
    layers = [v]
    front = np.zeros(1, dtype=np.int64)
    fresh = [front]
    counts = []
    for _ in range(k):
        cand = (front[:, None] + W[None, :]).ravel()
        cand = cand[cand <= E]
        front = np.unique(cand[v[cand] == 0])
        counts.append(convolve_at(W, v, front))
        v = v.copy()
        v[front] = 1
        layers.append(v)
        fresh.append(front)
    return layers, fresh, counts


def compute_layers(inst: Instance, k: int) -> list[np.ndarray]:
    """Feasibility layers v_0..v_k over [0, k*u]: v_j marks sums of at most j weights."""
    return layer_frontiers(inst, k)[0]


def _insert(R: np.ndarray, M: np.ndarray, NS: np.ndarray, rank: np.ndarray) -> None:
    """Add one copy of item ``rank[i]`` to row i, keeping rows sorted by rank."""
    m, K = R.shape
    if m == 0:
        return
    rows = np.arange(m)
    pos = (R < rank[:, None]).sum(axis=1)
    at = np.minimum(pos, K - 1)
    hit = (pos < K) & (R[rows, at] == rank)
    M[rows[hit], at[hit]] += 1
    miss = np.flatnonzero(~hit)
    if not miss.size:
        return
    check(bool((NS[miss] < K).all()), "solution support exceeds the row width")
    Rs, Ms, pm = R[miss], M[miss], pos[miss][:, None]
    cols = np.arange(K)[None, :]
    shR = np.concatenate([Rs[:, :1], Rs[:, :-1]], axis=1)
    shM = np.concatenate([Ms[:, :1], Ms[:, :-1]], axis=1)
    R[miss] = np.where(cols < pm, Rs, np.where(cols == pm, rank[miss][:, None], shR))
    M[miss] = np.where(cols < pm, Ms, np.where(cols == pm, 1, shM))
    NS[miss] += 1


@dataclass
class KernelTable:
    inst: Instance
    order: LexOrder
    k: int
    extent: int
    present: np.ndarray
    layers: Optional[list] = field(default=None, repr=False)
    # boolean modes: item added last at each position (first-activation witness)
    witness_item: Optional[np.ndarray] = field(default=None, repr=False)
    # knapsack mode: rows kept directly, since positions may be rewritten per round
    rows: Optional[SolutionTable] = field(default=None, repr=False)

    @property
    def width(self) -> int:
        return max(1, min(self.inst.n, self.k))

    def rows_for(self, positions: np.ndarray):
        """(ranks, mults, nsupp, size, value) rows for kernel positions."""
        positions = np.asarray(positions, dtype=np.int64)
        check(bool(self.present[positions].all()), "position is not a kernel")
        if self.rows is not None:
            t = self.rows
            return (t.ranks[positions].copy(), t.mults[positions].copy(), t.nsupp[positions].copy(),
                    t.size[positions].copy(), t.value[positions].copy())
        n, K = self.inst.n, self.width
        m = len(positions)
        rank = np.asarray(self.order.rank, dtype=np.int32)
        weights = np.asarray(self.inst.weights, dtype=np.int64)
        dense = 0 < n <= DENSE_ITEMS
        if dense:
            C = np.zeros((m, n), dtype=np.int64)
        else:
            R = np.full((m, K), n, dtype=np.int32)
            M = np.zeros((m, K), dtype=np.int64)
            NS = np.zeros(m, dtype=np.int32)
        cur = positions.copy()
        for _ in range(self.k):
            act = np.flatnonzero(cur > 0)
            if not act.size:
                break
            item = self.witness_item[cur[act]]
            if dense:
                C[act, rank[item]] += 1
            else:
                r, mm, ns = R[act], M[act], NS[act]
                _insert(r, mm, ns, rank[item])
                R[act], M[act], NS[act] = r, mm, ns
            cur[act] -= weights[item]
        check(not (cur > 0).any(), "witness chain longer than k")
        if dense:
            # columns of C are ranks; move used ranks to the front, in order
            used = C > 0
            NS = used.sum(axis=1).astype(np.int32)
            check(bool((NS <= K).all()), "solution support exceeds the row width")
            cols = np.argsort(~used, axis=1, kind="stable")[:, :K]
            M = np.take_along_axis(C, cols, axis=1)
            R = np.where(M > 0, cols, n).astype(np.int32)
        size = M.sum(axis=1)
        profits = np.asarray(self.inst.effective_profits(), dtype=np.int64)
        value = size * profits[0] if self.inst.n else np.zeros(m, dtype=np.int64)
        return R, M, NS, size, value

    def seed(self, T: int, wide: bool = False) -> SolutionTable:
        """A SolutionTable over [0, T] holding every kernel position <= T."""
        table = SolutionTable(T, self.width, self.order, self.inst, wide=wide)
        pos = np.flatnonzero(self.present[:T + 1])
        R, M, NS, size, value = self.rows_for(pos)
        table.ranks[pos] = R
        table.mults[pos] = M
        table.nsupp[pos] = NS
        table.size[pos] = size
        table.value[pos] = value
        table.present[pos] = 1
        return table

    @property
    def table(self) -> SolutionTable:
        return self.seed(self.extent)

    def solution(self, i: int):
        return self.table[i] if self.rows is None else self.rows[i]


def compute_kernels_boolean(inst: Instance, order: LexOrder, witnesses: Sequence[tuple[np.ndarray, np.ndarray]],
                            layers: Sequence[np.ndarray], k: Optional[int] = None) -> KernelTable:
    """Kernel table from layers and, per layer j = 1..k, (newly feasible sums, min witness weight).

    Each sum is fixed at the layer where it first becomes feasible: its
    solution is the predecessor's plus one copy of the witness.
    """
    k = len(layers) - 1 if k is None else k
    E = k * inst.u
    check(len(witnesses) == k, "one witness array per layer expected")
    item_of_weight = np.full(inst.u + 1, -1, dtype=np.int64)
    for item, w in enumerate(inst.weights):
        check(item_of_weight[w] < 0, "duplicate weights must be removed first")
        item_of_weight[w] = item
    witness_item = np.full(E + 1, -1, dtype=np.int64)
    for j, (outs, wit) in enumerate(witnesses, start=1):
        outs = np.asarray(outs, dtype=np.int64)
        wit = np.asarray(wit, dtype=np.int64)
        added = np.count_nonzero(layers[j]) - np.count_nonzero(layers[j - 1])
        check(len(np.unique(outs)) == len(outs) == added and bool(layers[j][outs].all())
              and not layers[j - 1][outs].any(), f"layer {j}: witnesses must cover exactly the new sums")
        check(bool((wit >= 1).all()) and bool((item_of_weight[np.clip(wit, 0, inst.u)] >= 0).all()),
              f"layer {j}: witness is not a weight")
        check(bool(layers[j - 1][outs - wit].all()), f"layer {j}: witness predecessor infeasible")
        witness_item[outs] = item_of_weight[wit]
    present = layers[k].astype(bool)
    return KernelTable(inst, order, k, E, present, layers=list(layers), witness_item=witness_item)


def compute_kernels_knapsack(inst: Instance, order: LexOrder, k: Optional[int] = None,
                             backend: Optional[str] = None) -> KernelTable:
    """k rounds of (max,+) convolution on values encoded as value*(n+1) - rank."""
    n, u = inst.n, inst.u
    k = kernel_bound(Mode.KNAPSACK, u) if k is None else k
    E = k * u
    N1 = n + 1
    profits = inst.effective_profits()
    fw: list = [None] * (u + 1)
    for r, item in enumerate(order.perm, start=1):
        enc = N1 * profits[item] - r
        w = inst.weights[item]
        if fw[w] is None or enc > fw[w]:
            fw[w] = enc
    width = max(1, min(n, k))
    rows = SolutionTable(E, width, order, inst)
    rows[0] = EMPTY
    v: list = [None] * (E + 1)
    v[0] = 0
    perm = np.asarray(order.perm, dtype=np.int64)
    weights = np.asarray(inst.weights, dtype=np.int64)
    prof = np.asarray(profits, dtype=np.int64) if n else np.zeros(0, dtype=np.int64)
    for _ in range(k):
        vw = [None if x is None else N1 * x for x in v]
        vp = maxplus_convolve(vw, fw, backend)[:E + 1]
        idx = [i for i in range(1, E + 1) if vp[i] is not None]
        if not idx:
            break
        check(max(abs(vp[i]) for i in idx) < ENCODING_LIMIT, "encoded value overflows 127 bits")
        ranks = [(-vp[i]) % N1 for i in idx]
        vals = [(vp[i] + r) // N1 for i, r in zip(idx, ranks)]
        I = np.asarray(idx, dtype=np.int64)
        rk = np.asarray(ranks, dtype=np.int64) - 1
        item = perm[rk]
        pred = I - weights[item]
        check(bool(rows.present[pred].all()), "decoded witness points at an infeasible sum")
        check(bool((rows.value[pred] + prof[item] == np.asarray(vals, dtype=np.int64)).all()),
              "decoded value disagrees with predecessor plus witness profit")
        R, M, NS = rows.ranks[pred].copy(), rows.mults[pred].copy(), rows.nsupp[pred].copy()
        _insert(R, M, NS, rk.astype(np.int32))
        size = rows.size[pred] + 1
        rows.ranks[I], rows.mults[I], rows.nsupp[I] = R, M, NS
        rows.size[I] = size
        rows.value[I] = vals
        rows.present[I] = 1
        for i, x in zip(idx, vals):
            v[i] = x
    return KernelTable(inst, order, k, E, rows.present.astype(bool), rows=rows)
