import itertools

import numpy as np
import pytest

from allknap.core import (EMPTY, ContractError, Instance, LexOrder, Mode, Solution, SolutionTable,
                          dedupe, lex_compare, solution_add, solution_value)


def test_instance_defaults_and_profits():
    inst = Instance((3, 5), 11, Mode.COINCHANGE)
    assert inst.u == 5 and inst.n == 2 and inst.modulus == 3
    assert inst.effective_profits() == (-1, -1)
    assert Instance((3,), 0, "subsetsum").effective_profits() == (0,)
    assert Instance((2,), 4, Mode.KNAPSACK, (7,)).effective_profits() == (7,)


@pytest.mark.parametrize("kw", [
    dict(weights=(0,), t=1, mode="coinchange"),
    dict(weights=(6,), t=1, mode="coinchange", u=5),
    dict(weights=(2,), t=1, mode="knapsack"),
    dict(weights=(2,), t=1, mode="coinchange", profits=(1,)),
    dict(weights=(2,), t=-1, mode="coinchange"),
    dict(weights=(2,), t=1, mode="knapsack", profits=(2**41,)),
    dict(weights=(), t=1, mode="residue"),
])
def test_instance_rejects_bad_input(kw):
    with pytest.raises(ValueError):
        Instance(**kw)


def test_instance_roundtrip():
    inst = Instance((4, 2), 9, Mode.KNAPSACK, (1, -3), u=10)
    d = inst.to_dict()
    assert d == {"weights": [4, 2], "profits": [1, -3], "t": 9, "mode": "knapsack"}
    assert Instance.from_dict({**d, "u": 10}) == inst


def test_lexorder_inverse():
    o = LexOrder((2, 0, 1))
    assert o.rank == (1, 2, 0)
    assert all(o.perm[o.rank[i]] == i for i in range(3))
    with pytest.raises(ValueError):
        LexOrder((0, 0))
    s = LexOrder.shuffled(10, np.random.default_rng(1))
    assert sorted(s.perm) == list(range(10))


def test_lex_compare_examples():
    inst = Instance((2, 3), 6, Mode.SUBSETSUM)
    o12, o21 = LexOrder((0, 1)), LexOrder((1, 0))
    a = Solution.from_counts({0: 3}, o12, inst)
    b = Solution.from_counts({1: 2}, o12, inst)
    assert lex_compare(a, b, o12) == -1
    a2 = Solution.from_counts({0: 3}, o21, inst)
    b2 = Solution.from_counts({1: 2}, o21, inst)
    assert lex_compare(a2, b2, o21) == 1
    assert lex_compare(a, a, o12) == 0


def test_lex_compare_is_total_order(rng):
    inst = Instance((1, 2, 3, 4), 0, Mode.SUBSETSUM)
    for _ in range(200):
        order = LexOrder(tuple(rng.sample(range(4), 4)))
        sols = [Solution.from_counts({i: rng.randint(0, 2) for i in range(4)}, order, inst) for _ in range(3)]
        a, b, c = sols
        assert lex_compare(a, b, order) == -lex_compare(b, a, order)
        if lex_compare(a, b, order) <= 0 and lex_compare(b, c, order) <= 0:
            assert lex_compare(a, c, order) <= 0


def test_solution_add_and_remove(rng):
    inst = Instance((2, 3, 7), 0, Mode.COINCHANGE)
    order = LexOrder((2, 0, 1))
    s = solution_add(EMPTY, 0, order, inst)
    assert s.entries == ((0, 1),) and s.total == 2 and s.size == 1
    s = s.add(0, order, inst).add(0, order, inst)
    assert s.counts() == {0: 3} and s.size == 3
    for _ in range(100):
        counts = {i: rng.randint(0, 3) for i in range(3)}
        s = Solution.from_counts(counts, order, inst)
        x = rng.randrange(3)
        t = s.add(x, order, inst)
        counts[x] += 1
        assert t == Solution.from_counts(counts, order, inst)
        assert t.remove(x, inst) == s
    with pytest.raises(ContractError):
        EMPTY.remove(0, inst)


def test_solution_value():
    inst = Instance((2, 5), 0, Mode.KNAPSACK, (3, 1))
    o = LexOrder.identity(2)
    s = Solution.from_counts({0: 2}, o, inst)
    assert solution_value(s, Mode.KNAPSACK, inst) == 6
    three = Solution.from_counts({0: 1, 1: 2}, o, inst)
    assert solution_value(three, Mode.COINCHANGE) == -3
    assert solution_value(three, Mode.SUBSETSUM) == 0
    assert solution_value(EMPTY, Mode.KNAPSACK, inst) == 0


def test_solution_table_roundtrip():
    inst = Instance((2, 3), 8, Mode.COINCHANGE)
    o = LexOrder((1, 0))
    sols = [EMPTY, None, Solution.from_counts({0: 1}, o, inst), None,
            Solution.from_counts({0: 2}, o, inst), None, Solution.from_counts({1: 2}, o, inst), None,
            Solution.from_counts({0: 1, 1: 2}, o, inst)]
    table = SolutionTable.from_solutions(sols, o, inst)
    assert list(table) == sols
    assert table.values() == [None if s is None else s.value for s in sols]
    with pytest.raises(ContractError):
        table[5] = sols[4]
    other = SolutionTable.from_solutions(sols[:8] + [None], o, inst)
    assert table.first_difference(other) == 8 and not table.equals(other)


def test_dedupe_keeps_earliest():
    inst = Instance((5, 3, 5, 3, 4), 0, Mode.COINCHANGE)
    reduced, kept, order = dedupe(inst, LexOrder((3, 2, 4, 0, 1)))
    assert kept == [2, 3, 4]
    assert reduced.weights == (5, 3, 4)
    assert order.perm == (1, 0, 2)


def test_support_bound_on_exhaustive_optima():
    # small exhaustive check: lex-min subset-sum solutions have few distinct items
    from allknap.oracle import brute_lexmin
    for ws in itertools.combinations(range(1, 9), 3):
        inst = Instance(ws, 0, Mode.SUBSETSUM)
        order = LexOrder.identity(3)
        for j in range(1, 30):
            s = brute_lexmin(inst, order, j)
            if s is not None:
                assert len(s) <= np.log2(inst.u) + 1
