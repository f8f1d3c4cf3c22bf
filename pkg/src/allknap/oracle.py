"""Brute-force references: classic DP, exact lex-min tables, residue Dijkstra."""
from __future__ import annotations

import heapq
from typing import Iterator, Optional

import numpy as np

from .core import EMPTY, Instance, LexOrder, Solution, SolutionTable, better, check

DESK_T = 4_000_000
DESK_LEXMIN_T = 4000
DESK_MODULUS = 1_000_000

_NEG = -(2**62)


def dp_values(inst: Instance, T: Optional[int] = None) -> list[Optional[int]]:
    """Optimal value for every target in [0, T] (T defaults to t); None when infeasible.

    value[j] = max_i value[j - w_i] + p_i, evaluated one block of min(w)
    targets at a time so each block only reads finished entries.
    """
    T = inst.t if T is None else T
    check(T <= DESK_T, f"target bound {T} too large for the oracle")
    out: list[Optional[int]] = [0] + [None] * T
    if not inst.n or T == 0:
        return out
    profits = inst.effective_profits()
    wmin = min(inst.weights)
    if max(abs(p) for p in profits) * (T // wmin + 1) >= 2**61:
        for j in range(1, T + 1):
            best = None
            for w, p in zip(inst.weights, profits):
                if w <= j and out[j - w] is not None and (best is None or out[j - w] + p > best):
                    best = out[j - w] + p
            out[j] = best
        return out
    w = np.asarray(inst.weights, dtype=np.int64)
    p = np.asarray(profits, dtype=np.int64)
    val = np.full(T + 1, _NEG, dtype=np.int64)
    val[0] = 0
    for lo in range(1, T + 1, wmin):
        j = np.arange(lo, min(lo + wmin, T + 1))
        src = j[None, :] - w[:, None]
        ok = src >= 0
        cand = np.where(ok, val[np.where(ok, src, 0)] + p[:, None], _NEG)
        cand[cand < _NEG // 2] = _NEG
        val[j] = cand.max(axis=0)
    return [int(v) if v > _NEG // 2 else None for v in val.tolist()]


def dp_lexmin_solutions(inst: Instance, order: LexOrder, T: Optional[int] = None) -> SolutionTable:
    """The exact lexicographically smallest optimal solution for every target in [0, T].

    sol(j) is the best of sol(j - w_i) + i over items i, ranked by value and
    then lexicographically.
    """
    T = inst.t if T is None else T
    check(T <= DESK_LEXMIN_T, f"target bound {T} too large for the lex-min oracle")
    sols: list[Optional[Solution]] = [EMPTY] + [None] * T
    for j in range(1, T + 1):
        best = None
        for i, w in enumerate(inst.weights):
            if w <= j and sols[j - w] is not None:
                cand = sols[j - w].add(i, order, inst)
                if better(cand, best, order):
                    best = cand
        sols[j] = best
    return SolutionTable.from_solutions(sols, order, inst)


def dijkstra_residues(inst: Instance) -> list[Optional[int]]:
    """Shortest paths from residue 0 with edges r -> (r + w_i) mod w_1 of length w_i."""
    check(inst.n >= 1, "need at least one weight")
    mod = inst.modulus
    check(mod <= DESK_MODULUS, f"modulus {mod} too large for the oracle")
    ws = sorted(set(inst.weights))
    dist: list[Optional[int]] = [None] * mod
    dist[0] = 0
    heap = [(0, 0)]
    while heap:
        d, r = heapq.heappop(heap)
        if d != dist[r]:
            continue
        for w in ws:
            r2, d2 = (r + w) % mod, d + w
            if dist[r2] is None or d2 < dist[r2]:
                dist[r2] = d2
                heapq.heappush(heap, (d2, r2))
    return dist


def enumerate_solutions(inst: Instance, j: int) -> Iterator[dict[int, int]]:
    """Every multiplicity vector (as {item: count}) whose weights sum to j."""
    n = inst.n

    def rec(i: int, rest: int, acc: dict[int, int]):
        if i == n:
            if rest == 0:
                yield dict(acc)
            return
        w = inst.weights[i]
        for m in range(rest // w + 1):
            if m:
                acc[i] = m
            yield from rec(i + 1, rest - m * w, acc)
            acc.pop(i, None)

    yield from rec(0, j, {})


def brute_lexmin(inst: Instance, order: LexOrder, j: int) -> Optional[Solution]:
    """sol(j) by exhaustive enumeration; only for tiny targets."""
    best = None
    for counts in enumerate_solutions(inst, j):
        cand = Solution.from_counts(counts, order, inst)
        if better(cand, best, order):
            best = cand
    return best
