"""Problem instances, lexical orders and sparse solutions.

Items are 0-indexed.  A lexical order ranks items; a solution is
lexicographically *smaller* when, at the first rank where multiplicities
differ, it holds *more* copies of that item.
"""
from __future__ import annotations

import enum
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

MAX_PROFIT = 2**40
MAX_ITEMS = 2**20
MAX_TARGET = 2**40


class ContractError(RuntimeError):
    """A checked pre/post-condition failed."""


def check(cond: bool, msg: str) -> None:
    if not cond:
        raise ContractError(msg)


class Mode(str, enum.Enum):
    SUBSETSUM = "subsetsum"
    COINCHANGE = "coinchange"
    KNAPSACK = "knapsack"
    RESIDUE = "residue"

    @property
    def unweighted(self) -> bool:
        return self is not Mode.KNAPSACK


@dataclass(frozen=True)
class Instance:
    weights: tuple[int, ...]
    t: int
    mode: Mode
    profits: Optional[tuple[int, ...]] = None
    u: Optional[int] = None

    def __post_init__(self):
        mode = Mode(self.mode)
        weights = tuple(int(w) for w in self.weights)
        profits = None if self.profits is None else tuple(int(p) for p in self.profits)
        u = self.u if self.u is not None else max(weights, default=1)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "profits", profits)
        object.__setattr__(self, "u", int(u))

        if self.u < 1:
            raise ValueError("u must be positive")
        if any(w < 1 or w > self.u for w in weights):
            raise ValueError(f"weights must lie in [1, {self.u}]")
        if len(weights) > MAX_ITEMS:
            raise ValueError("too many items")
        if not 0 <= self.t <= MAX_TARGET:
            raise ValueError(f"t must lie in [0, 2^40], got {self.t}")
        if mode is Mode.KNAPSACK:
            if profits is None or len(profits) != len(weights):
                raise ValueError("knapsack mode needs one profit per weight")
            if any(abs(p) > MAX_PROFIT for p in profits):
                raise ValueError("profits must satisfy |p| <= 2^40")
        elif profits is not None:
            raise ValueError(f"profits are only allowed in knapsack mode, not {mode.value}")
        if mode is Mode.RESIDUE and not weights:
            raise ValueError("residue mode needs at least one weight")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def modulus(self) -> int:
        """First input weight; defines residue classes."""
        return self.weights[0]

    def effective_profits(self) -> tuple[int, ...]:
        # Residue mode ranks equal-sum solutions by coin count, like coinchange.
        if self.mode is Mode.KNAPSACK:
            return self.profits
        if self.mode is Mode.SUBSETSUM:
            return (0,) * self.n
        return (-1,) * self.n

    def with_mode(self, mode: Mode, profits=None) -> "Instance":
        return Instance(self.weights, self.t, Mode(mode), profits, self.u)

    def with_t(self, t: int) -> "Instance":
        return Instance(self.weights, t, self.mode, self.profits, self.u)

    def to_dict(self) -> dict:
        d = {"weights": list(self.weights)}
        if self.profits is not None:
            d["profits"] = list(self.profits)
        d["t"] = self.t
        d["mode"] = self.mode.value
        return d

    @classmethod
    def from_dict(cls, d: dict, mode: Optional[str] = None) -> "Instance":
        profits = d.get("profits")
        return cls(
            weights=tuple(d["weights"]),
            t=int(d["t"]),
            mode=Mode(mode or d["mode"]),
            profits=None if profits is None else tuple(profits),
            u=d.get("u"),
        )


@dataclass(frozen=True)
class LexOrder:
    perm: tuple[int, ...]
    rank: tuple[int, ...] = field(repr=False, default=())

    def __post_init__(self):
        perm = tuple(int(x) for x in self.perm)
        rank = [0] * len(perm)
        for pos, item in enumerate(perm):
            rank[item] = pos
        if sorted(perm) != list(range(len(perm))):
            raise ValueError("perm is not a permutation of range(n)")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "rank", tuple(rank))

    @classmethod
    def identity(cls, n: int) -> "LexOrder":
        return cls(tuple(range(n)))

    @classmethod
    def shuffled(cls, n: int, rng: np.random.Generator) -> "LexOrder":
        return cls(tuple(rng.permutation(n).tolist()))

    def __len__(self) -> int:
        return len(self.perm)


@dataclass(frozen=True)
class Solution:
    """Sparse multiset of items, entries sorted by rank under one order."""

    entries: tuple[tuple[int, int], ...] = ()
    value: int = 0
    size: int = 0
    total: int = 0

    @classmethod
    def from_counts(cls, counts: dict[int, int], order: LexOrder, inst: Instance) -> "Solution":
        profits = inst.effective_profits()
        items = sorted((i for i, m in counts.items() if m > 0), key=order.rank.__getitem__)
        entries = tuple((i, counts[i]) for i in items)
        return cls(
            entries,
            value=sum(profits[i] * m for i, m in entries),
            size=sum(m for _, m in entries),
            total=sum(inst.weights[i] * m for i, m in entries),
        )

    def add(self, item: int, order: LexOrder, inst: Instance) -> "Solution":
        entries = list(self.entries)
        keys = [order.rank[i] for i, _ in entries]
        pos = bisect_left(keys, order.rank[item])
        if pos < len(entries) and entries[pos][0] == item:
            entries[pos] = (item, entries[pos][1] + 1)
        else:
            entries.insert(pos, (item, 1))
        return Solution(
            tuple(entries),
            self.value + inst.effective_profits()[item],
            self.size + 1,
            self.total + inst.weights[item],
        )

    def remove(self, item: int, inst: Instance) -> "Solution":
        counts = self.counts()
        check(item in counts, f"item {item} not in solution")
        entries = [(i, m - (i == item)) for i, m in self.entries]
        entries = [(i, m) for i, m in entries if m]
        return Solution(
            tuple(entries),
            self.value - inst.effective_profits()[item],
            self.size - 1,
            self.total - inst.weights[item],
        )

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    def counts(self) -> dict[int, int]:
        return dict(self.entries)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


EMPTY = Solution()


def lex_compare(a: Solution, b: Solution, order: LexOrder) -> int:
    """-1 if a < b, 0 if equal, 1 if b < a."""
    rank = order.rank
    ea, eb = a.entries, b.entries
    for (ia, ma), (ib, mb) in zip(ea, eb):
        if ia != ib:
            return -1 if rank[ia] < rank[ib] else 1
        if ma != mb:
            return -1 if ma > mb else 1
    if len(ea) == len(eb):
        return 0
    return -1 if len(ea) > len(eb) else 1


def solution_add(sol: Solution, item: int, order: LexOrder, inst: Instance) -> Solution:
    return sol.add(item, order, inst)


def solution_value(sol: Solution, mode: Mode, inst: Optional[Instance] = None) -> int:
    mode = Mode(mode)
    if mode is Mode.KNAPSACK:
        check(inst is not None and inst.profits is not None, "knapsack value needs profits")
        return sum(inst.profits[i] * m for i, m in sol.entries)
    if mode is Mode.SUBSETSUM:
        return 0
    return -sum(m for _, m in sol.entries)


def better(a: Solution, b: Optional[Solution], order: LexOrder) -> bool:
    """True when a should replace b: higher value, or equal value and lex-smaller."""
    if b is None:
        return True
    if a.value != b.value:
        return a.value > b.value
    return lex_compare(a, b, order) < 0


class SolutionTable:
    """Per-target optional solutions over [0, T], stored as fixed-width rows.

    Row ``j`` holds the support of the solution for target ``j`` as
    (rank, multiplicity) pairs sorted by rank; unused slots carry rank
    ``n`` (one past the last rank) and multiplicity 0.
    """

    def __init__(self, T: int, width: int, order: LexOrder, inst: Instance, wide: bool = False):
        n = len(order)
        self.T = T
        self.order = order
        self.inst = inst
        self.width = max(1, width)
        self.ranks = np.full((T + 1, self.width), n, dtype=np.int32)
        self.mults = np.zeros((T + 1, self.width), dtype=np.int64)
        self.nsupp = np.zeros(T + 1, dtype=np.int32)
        self.present = np.zeros(T + 1, dtype=np.uint8)
        self.size = np.zeros(T + 1, dtype=np.int64)
        self.value = np.zeros(T + 1, dtype=object if wide else np.int64)

    @property
    def wide(self) -> bool:
        return self.value.dtype == object

    def __len__(self) -> int:
        return self.T + 1

    def __getitem__(self, j: int) -> Optional[Solution]:
        if not self.present[j]:
            return None
        perm = self.order.perm
        k = int(self.nsupp[j])
        entries = tuple((perm[int(r)], int(m)) for r, m in zip(self.ranks[j, :k], self.mults[j, :k]))
        return Solution(entries, int(self.value[j]), int(self.size[j]), j)

    def __setitem__(self, j: int, sol: Optional[Solution]) -> None:
        if sol is None:
            self.present[j] = 0
            self.nsupp[j] = 0
            return
        check(sol.total == j, f"solution sums to {sol.total}, stored at {j}")
        if len(sol.entries) > self.width:
            self._grow(len(sol.entries))
        k = len(sol.entries)
        self.ranks[j] = len(self.order)
        self.mults[j] = 0
        self.ranks[j, :k] = [self.order.rank[i] for i, _ in sol.entries]
        self.mults[j, :k] = [m for _, m in sol.entries]
        self.nsupp[j] = k
        self.present[j] = 1
        self.size[j] = sol.size
        self.value[j] = sol.value

    def _grow(self, width: int) -> None:
        extra = width - self.width
        n = len(self.order)
        self.ranks = np.hstack([self.ranks, np.full((self.T + 1, extra), n, dtype=np.int32)])
        self.mults = np.hstack([self.mults, np.zeros((self.T + 1, extra), dtype=np.int64)])
        self.width = width

    def __iter__(self) -> Iterator[Optional[Solution]]:
        return (self[j] for j in range(self.T + 1))

    def values(self) -> list[Optional[int]]:
        return [int(v) if p else None for v, p in zip(self.value.tolist(), self.present.tolist())]

    def feasible(self) -> np.ndarray:
        return self.present.astype(bool)

    @classmethod
    def from_solutions(cls, sols: Sequence[Optional[Solution]], order: LexOrder, inst: Instance) -> "SolutionTable":
        width = max((len(s.entries) for s in sols if s is not None), default=1)
        wide = any(s is not None and abs(s.value) >= 2**62 for s in sols)
        table = cls(len(sols) - 1, width, order, inst, wide=wide)
        for j, s in enumerate(sols):
            if s is not None:
                table[j] = s
        return table

    def equals(self, other: "SolutionTable") -> bool:
        if self.T != other.T:
            return False
        return all(a == b for a, b in zip(self, other))

    def first_difference(self, other: "SolutionTable") -> Optional[int]:
        for j, (a, b) in enumerate(zip(self, other)):
            if a != b:
                return j
        return None if self.T == other.T else min(self.T, other.T) + 1


def dedupe(inst: Instance, order: Optional[LexOrder] = None) -> tuple[Instance, list[int], LexOrder]:
    """Keep the order-earliest item per distinct weight (unweighted modes only).

    Returns the reduced instance, the original index of each kept item and
    the induced order on kept items.
    """
    check(inst.mode.unweighted, "dedupe applies to unweighted modes")
    order = order or LexOrder.identity(inst.n)
    seen: dict[int, int] = {}
    for item in order.perm:
        seen.setdefault(inst.weights[item], item)
    kept = sorted(seen.values())
    reduced = Instance(tuple(inst.weights[i] for i in kept), inst.t, inst.mode, None, inst.u)
    new_index = {old: new for new, old in enumerate(kept)}
    perm = tuple(new_index[i] for i in order.perm if i in new_index)
    return reduced, kept, LexOrder(perm)
