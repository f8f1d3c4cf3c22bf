"""Witness finding for boolean convolutions.

A witness of output ``i`` of ``a (x) b`` is an index ``k`` with
``a[k] = b[i - k] = 1``.  The universe shared by a family of problems is
the set of positions where some ``a`` is nonzero; orders returned here are
permutations of that universe (positions outside it are never witnesses).
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .convolution import bool_convolve, convolve_at
from .core import check


@dataclass
class WitnessProblem:
    """Outputs of ``a (x) b`` awaiting witnesses; ``counts[i]`` is the witness count of ``outputs[i]``."""

    a: np.ndarray
    b: np.ndarray
    counts: np.ndarray
    outputs: np.ndarray

    @classmethod
    def build(cls, a, b, outputs=None, counts=None) -> "WitnessProblem":
        """Defaults to every output with a witness; counts are computed unless given (aligned with outputs)."""
        a = np.asarray(a, dtype=np.uint8)
        b = np.asarray(b, dtype=np.uint8)
        if counts is None:
            _, full = bool_convolve(a, b)
            outputs = np.flatnonzero(full) if outputs is None else np.asarray(outputs, dtype=np.int64)
            counts = full[outputs]
        outputs = np.asarray(outputs, dtype=np.int64)
        counts = np.asarray(counts, dtype=np.int64)
        check(len(counts) == len(outputs), "counts must align with outputs")
        check(bool((counts > 0).all()), "every output needs a positive witness count")
        return cls(a, b, counts, outputs)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.a)

    def is_witness(self, k: np.ndarray, i: np.ndarray) -> np.ndarray:
        k = np.asarray(k, dtype=np.int64)
        j = np.asarray(i, dtype=np.int64) - k
        ok = (k >= 0) & (k < len(self.a)) & (j >= 0) & (j < len(self.b))
        out = np.zeros(ok.shape, dtype=bool)
        out[ok] = (self.a[k[ok]] == 1) & (self.b[j[ok]] == 1)
        return out


@dataclass
class WitnessSets:
    """Per-output witness lists in CSR layout."""

    indptr: np.ndarray
    indices: np.ndarray

    def __len__(self) -> int:
        return len(self.indptr) - 1

    def __getitem__(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def sizes(self) -> np.ndarray:
        return np.diff(self.indptr)

    def tolist(self) -> list[list[int]]:
        return [self[i].tolist() for i in range(len(self))]


@dataclass
class MinWitnessResult:
    order: np.ndarray  # universe positions, smallest rank first
    witnesses: list[np.ndarray]  # per problem, aligned with problem.outputs
    activation_counts: Optional[list[np.ndarray]] = field(default=None, repr=False)

    def ranks(self, size: int) -> np.ndarray:
        r = np.full(size, np.iinfo(np.int64).max, dtype=np.int64)
        r[self.order] = np.arange(len(self.order))
        return r


def universe_of(problems: Sequence[WitnessProblem]) -> np.ndarray:
    check(len({len(p.a) for p in problems}) <= 1, "problems must share one universe length")
    if not problems:
        return np.zeros(0, dtype=np.int64)
    mask = np.zeros(len(problems[0].a), dtype=bool)
    for p in problems:
        mask |= p.a.astype(bool)
    return np.flatnonzero(mask)


def _next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def _restricted(problem: WitnessProblem, restriction) -> np.ndarray:
    if restriction is None:
        return problem.support
    r = np.asarray(restriction, dtype=np.int64)
    r = r[(r >= 0) & (r < len(problem.a))]
    return r[problem.a[r] == 1]


def sample_witnesses(problem: WitnessProblem, rng: np.random.Generator, outputs=None,
                     restriction=None) -> np.ndarray:
    """One uniformly random witness per output (-1 where none lies in the restriction).

    Geometric subsampling: keep each allowed position with probability
    2^-r for r = 0, 1, ...; wherever exactly one kept position is a witness
    the index-sum convolution names it.  Rounds repeat until every output
    with a witness has a sample.
    """
    outputs = problem.outputs if outputs is None else np.asarray(outputs, dtype=np.int64)
    pos = _restricted(problem, restriction)
    result = np.full(len(outputs), -1, dtype=np.int64)
    if len(outputs) == 0 or len(pos) == 0:
        return result
    pending = np.flatnonzero(convolve_at(pos, problem.b, outputs) > 0)
    levels = max(1, len(pos) - 1).bit_length()
    while pending.size:
        for r in range(levels + 1):
            keep = pos[rng.random(len(pos)) < 0.5**r]
            if keep.size == 0:
                continue
            outs = outputs[pending]
            cnt = convolve_at(keep, problem.b, outs)
            hit = cnt == 1
            if not hit.any():
                continue
            cand = convolve_at(keep, problem.b, outs[hit], coeffs=keep)
            check(bool(problem.is_witness(cand, outs[hit]).all()), "sampled index is not a witness")
            result[pending[hit]] = cand
            pending = pending[~hit]
            if not pending.size:
                break
    return result


_BLOCK = 16


def k_distinct_witnesses(problem: WitnessProblem, k: int, restriction=None, outputs=None) -> WitnessSets:
    """min(|x[i] & restriction|, k) distinct witnesses per output, deterministically.

    Recursive range splitting over the restriction (in the order given):
    a half is entered only when its witness count for some still-hungry
    output is positive.  Blocks of at most 16 positions are scanned
    directly.
    """
    check(k >= 1, "k must be positive")
    outputs = problem.outputs if outputs is None else np.asarray(outputs, dtype=np.int64)
    R = _restricted(problem, restriction)
    need = np.full(len(outputs), k, dtype=np.int64)
    found_out: list[np.ndarray] = []
    found_pos: list[np.ndarray] = []
    b = problem.b
    nb = len(b)

    def scan(lo: int, hi: int, idx: np.ndarray) -> None:
        block = R[lo:hi]
        j = outputs[idx][:, None] - block[None, :]
        ok = (j >= 0) & (j < nb)
        hits = np.zeros(j.shape, dtype=bool)
        hits[ok] = b[j[ok]] == 1
        take = hits & (np.cumsum(hits, axis=1) <= need[idx][:, None])
        rows, cols = np.nonzero(take)
        found_out.append(idx[rows])
        found_pos.append(block[cols])
        need[idx] -= take.sum(axis=1)

    def visit(lo: int, hi: int, idx: np.ndarray) -> None:
        if hi - lo <= _BLOCK:
            scan(lo, hi, idx)
            return
        mid = (lo + hi) // 2
        for l, h in ((lo, mid), (mid, hi)):
            live = idx[need[idx] > 0]
            if not live.size:
                return
            c = convolve_at(R[l:h], b, outputs[live])
            if (c > 0).any():
                visit(l, h, live[c > 0])

    if len(outputs) and len(R):
        top = convolve_at(R, b, outputs)
        live = np.flatnonzero(top > 0)
        if live.size:
            visit(0, len(R), live)

    out = np.concatenate(found_out) if found_out else np.zeros(0, dtype=np.int64)
    pos = np.concatenate(found_pos) if found_pos else np.zeros(0, dtype=np.int64)
    check(bool(problem.is_witness(pos, outputs[out]).all()), "emitted index is not a witness")
    order = np.argsort(out, kind="stable")
    indptr = np.zeros(len(outputs) + 1, dtype=np.int64)
    np.cumsum(np.bincount(out, minlength=len(outputs)), out=indptr[1:])
    return WitnessSets(indptr, pos[order].astype(np.int64))


def greedy_hitting_set(sets: Sequence[Sequence[int]], R: int, n: int, cap: Optional[int] = None) -> list[int]:
    """Greedy hitting set: repeatedly take the element in most unhit sets.

    Ties go to the smaller element.  Every set must have at least R
    elements drawn from a universe of size n; the result then has at most
    ceil((n / R) * ln(max(2, #sets))) elements.
    """
    sets = [list(dict.fromkeys(int(x) for x in s)) for s in sets]
    check(all(len(s) >= R for s in sets), f"every set needs at least {R} elements")
    if not sets:
        return []
    bound = math.ceil(n / R * math.log(max(2, len(sets))))
    if cap is not None:
        bound = min(bound, cap)

    members: dict[int, list[int]] = {}
    for sid, s in enumerate(sets):
        for x in s:
            members.setdefault(x, []).append(sid)
    count = {x: len(v) for x, v in members.items()}
    heap = [(-c, x) for x, c in count.items()]
    heapq.heapify(heap)
    hit = [False] * len(sets)
    left = len(sets)
    chosen: list[int] = []
    while left:
        c, x = heapq.heappop(heap)
        if -c != count[x]:
            heapq.heappush(heap, (-count[x], x))
            continue
        chosen.append(x)
        for sid in members[x]:
            if not hit[sid]:
                hit[sid] = True
                left -= 1
                for y in sets[sid]:
                    count[y] -= 1
    check(len(chosen) <= bound, f"hitting set of size {len(chosen)} exceeds bound {bound}")
    return chosen


def _first_bits(masks: np.ndarray) -> np.ndarray:
    """Index of the lowest set bit across the words of each row."""
    nz = masks != 0
    word = nz.argmax(axis=1)
    w = masks[np.arange(len(masks)), word]
    low = w & (~w + np.uint64(1))
    return word * 64 + np.log2(low.astype(np.float64)).astype(np.int64)


def min_witness_random_order(problems: Sequence[WitnessProblem], rng: np.random.Generator) -> MinWitnessResult:
    """Minimum witnesses under a uniformly random order (expected near-linear time).

    Prefixes of length 1, 2, 4, ... of the order are tried in turn.  An
    output is handled at the first prefix containing one of its witnesses:
    uniform samples are drawn until all of that prefix's witnesses for it
    have been seen, and the order-smallest is kept.
    """
    U = universe_of(problems)
    n = _next_pow2(max(1, len(U)))
    slots = rng.permutation(n)
    real = slots[slots < len(U)]
    order = U[real]
    size = len(problems[0].a) if problems else 0
    rank = np.full(size, -1, dtype=np.int64)
    rank[order] = np.arange(len(order))

    witnesses = [np.full(len(p.outputs), -1, dtype=np.int64) for p in problems]
    activation = [np.zeros(len(p.outputs), dtype=np.int64) for p in problems]
    pending = [np.arange(len(p.outputs)) for p in problems]
    l = 1
    while l <= n:
        prefix_slots = slots[:l]
        prefix = U[prefix_slots[prefix_slots < len(U)]]
        nprefix = len(prefix)
        for pi, p in enumerate(problems):
            pend = pending[pi]
            if not pend.size or not nprefix:
                continue
            pos = _restricted(p, prefix)
            cnt = convolve_at(pos, p.b, p.outputs[pend])
            act, need = pend[cnt > 0], cnt[cnt > 0]
            pending[pi] = pend[cnt == 0]
            activation[pi][act] = need
            words = (nprefix + 63) // 64
            masks = np.zeros((len(act), words), dtype=np.uint64)
            seen = np.zeros(len(act), dtype=np.int64)
            todo = np.arange(len(act))
            while todo.size:
                d = sample_witnesses(p, rng, p.outputs[act[todo]], restriction=pos)
                rk = rank[d]
                word, bit = rk // 64, (rk % 64).astype(np.uint64)
                flag = np.left_shift(np.uint64(1), bit)
                new = (masks[todo, word] & flag) == 0
                masks[todo, word] |= flag
                seen[todo] += new
                done = seen[todo] == need[todo]
                fin = todo[done]
                if fin.size:
                    witnesses[pi][act[fin]] = order[_first_bits(masks[fin])]
                todo = todo[~done]
        l *= 2
    for pi, p in enumerate(problems):
        check(not pending[pi].size, "output with positive count never activated")
        _check_emitted(p, witnesses[pi])
    return MinWitnessResult(order, witnesses, activation)


def _check_emitted(p: WitnessProblem, w: np.ndarray) -> None:
    check(bool(p.is_witness(w, p.outputs).all()), "reported minimum is not a witness")


def adaptive_min_witness(problems: Sequence[WitnessProblem], stats: Optional[dict] = None) -> MinWitnessResult:
    """Deterministically choose an order together with minimum witnesses under it.

    The candidate prefix P starts as the whole universe (padded to a power
    of two with dummy elements that are never witnesses) and halves each
    round.  Up to k witnesses inside P are listed per unresolved output;
    the outputs with k of them are hit by a greedy hitting set S, which
    (padded to |P|/2) becomes the next prefix.  P minus S takes the next
    block of ranks in ascending position order, and outputs whose listed
    witnesses all fall there are resolved on the spot.
    """
    U = universe_of(problems)
    n = _next_pow2(max(1, len(U)))
    size = len(problems[0].a) if problems else 0
    # dummies are encoded as size, size+1, ... so they sort after real positions
    P = np.concatenate([U, np.arange(size, size + n - len(U))]).astype(np.int64)
    ranks_order = np.empty(n, dtype=np.int64)
    witnesses = [np.full(len(p.outputs), -1, dtype=np.int64) for p in problems]
    unresolved = [np.arange(len(p.outputs)) for p in problems]
    hitting_sizes = []
    m = n
    while m >= 2:
        total = sum(len(u) for u in unresolved)
        if total == 0:
            ranks_order[:m] = np.sort(P)
            m = 0
            break
        k = 2 * math.ceil(math.log2(total)) + 5
        real = P[P < size]
        lists = []
        heavy_sets = []
        for pi, p in enumerate(problems):
            ws = k_distinct_witnesses(p, k, restriction=real, outputs=p.outputs[unresolved[pi]])
            sizes = ws.sizes()
            check(bool((sizes > 0).all()), "unresolved output has no witness in the current prefix")
            lists.append(ws)
            heavy_sets.extend(ws[i] for i in np.flatnonzero(sizes >= k))
        S = greedy_hitting_set(heavy_sets, R=k, n=m, cap=m // 2)
        hitting_sizes.append((m, k, len(heavy_sets), len(S)))
        check(len(S) <= m // 2, "hitting set larger than half the prefix")
        in_S = np.zeros(size + n, dtype=bool)
        in_S[np.asarray(S, dtype=np.int64)] = True
        rest = np.sort(P[~in_S[P]])
        pad = rest[: m // 2 - len(S)]
        in_S[pad] = True
        newP = np.sort(np.concatenate([np.asarray(S, dtype=np.int64), pad]))
        C = np.sort(P[~in_S[P]])
        ranks_order[m // 2:m] = C
        for pi, p in enumerate(problems):
            ws = lists[pi]
            sizes = ws.sizes()
            if not len(ws):
                continue
            starts = ws.indptr[:-1]
            hitS = np.zeros(len(ws), dtype=bool)
            nonempty = sizes > 0
            hitS[nonempty] = np.maximum.reduceat(in_S[ws.indices].astype(np.int8), starts[nonempty]) > 0
            resolve = (sizes < k) & ~hitS
            check(bool((hitS | resolve).all()), "prefix invariant broken")
            mins = np.minimum.reduceat(ws.indices, starts[nonempty]) if nonempty.any() else np.zeros(0, np.int64)
            full_min = np.full(len(ws), -1, dtype=np.int64)
            full_min[nonempty] = mins
            idx = unresolved[pi][resolve]
            witnesses[pi][idx] = full_min[resolve]
            unresolved[pi] = unresolved[pi][~resolve]
        P = newP
        m //= 2
    if m == 1:
        e = int(P[0])
        ranks_order[0] = e
        for pi, p in enumerate(problems):
            idx = unresolved[pi]
            if idx.size:
                check(e < size and bool(p.is_witness(np.full(len(idx), e), p.outputs[idx]).all()),
                      "last prefix element does not witness the remaining outputs")
                witnesses[pi][idx] = e
                unresolved[pi] = idx[:0]
    for pi, p in enumerate(problems):
        _check_emitted(p, witnesses[pi])
    if stats is not None:
        stats["hitting_sets"] = hitting_sizes
    order = ranks_order[ranks_order < size]
    return MinWitnessResult(order, witnesses)


def min_witness_fixed_order(problems: Sequence[WitnessProblem], order: Sequence[int]) -> MinWitnessResult:
    """Minimum witnesses under a caller-given order by scanning it front to back.

    Costs one pass over the outputs per universe element, so it is meant
    for small universes (few distinct weights).
    """
    U = universe_of(problems)
    order = np.asarray(order, dtype=np.int64)
    check(np.array_equal(np.sort(order), U), "order must be a permutation of the universe")
    witnesses = []
    for p in problems:
        w = np.full(len(p.outputs), -1, dtype=np.int64)
        todo = np.arange(len(p.outputs))
        for e in order.tolist():
            if not todo.size:
                break
            if not p.a[e]:
                continue
            hit = p.is_witness(np.full(len(todo), e), p.outputs[todo])
            w[todo[hit]] = e
            todo = todo[~hit]
        check(not todo.size, "output without a witness")
        witnesses.append(w)
    return MinWitnessResult(order, witnesses)
