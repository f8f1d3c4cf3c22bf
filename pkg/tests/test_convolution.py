import numpy as np
import pytest

from allknap.convolution import (EXACT_LIMIT, bool_convolve, convolve_at, int_convolve, maxplus_convolve,
                                 minplus_convolve, register_maxplus_backend)
from allknap.core import ContractError

from conftest import schoolbook


@pytest.mark.parametrize("method", ["direct", "ntt", "auto"])
def test_int_convolve_small(method, backend):
    assert int_convolve([1, 0, 1], [1, 1], method, backend).tolist() == [1, 1, 1, 1]
    a = [4, 0, 7, 2]
    assert int_convolve(a, [1], method, backend).tolist() == a


def test_int_convolve_matches_schoolbook(nprng):
    for _ in range(2000):
        a = nprng.integers(0, 2, nprng.integers(1, 65)).tolist()
        b = nprng.integers(0, 2, nprng.integers(1, 65)).tolist()
        method = ("direct", "ntt")[_ % 2]
        assert int_convolve(a, b, method).tolist() == schoolbook(a, b)


def test_int_convolve_large_coefficients_exact(backend):
    rng = np.random.default_rng(3)
    a = rng.integers(0, 2**28, 300)
    b = rng.integers(0, 2**24, 300)
    ref = schoolbook(a.tolist(), b.tolist())
    assert int_convolve(a, b, "ntt", backend).tolist() == ref


def test_int_convolve_bound_checked():
    with pytest.raises(ContractError):
        int_convolve([2**40], [2**40])
    with pytest.raises(ContractError):
        int_convolve([-1], [1])
    assert 2**61 < EXACT_LIMIT < 2**62


def test_bool_convolve():
    c, n = bool_convolve([0, 1, 1], [0, 1, 1])
    assert c.tolist() == [0, 0, 1, 1, 1] and n.tolist() == [0, 0, 1, 2, 1]
    c, n = bool_convolve([0, 0, 0], [1, 1])
    assert not c.any() and not n.any()
    a = [1, 0, 1, 1]
    c, n = bool_convolve(a, [1, 0, 0])
    assert n[:4].tolist() == a
    with pytest.raises(ContractError):
        bool_convolve([2], [1])


def test_bool_counts_equal_int_convolve(nprng):
    for _ in range(200):
        a = nprng.integers(0, 2, 40)
        b = nprng.integers(0, 2, 30)
        assert bool_convolve(a, b)[1].tolist() == int_convolve(a, b).tolist()


def test_convolve_at(nprng):
    b = nprng.integers(0, 2, 50)
    pos = np.flatnonzero(nprng.integers(0, 2, 50))
    a = np.zeros(50, dtype=np.int64)
    a[pos] = 1
    outs = np.array([0, 3, 17, 49, 60, 98, 150])
    full = schoolbook(a.tolist(), b.tolist()) + [0] * 100
    assert convolve_at(pos, b, outs).tolist() == [full[i] for i in outs]
    idx = schoolbook((a * np.arange(50)).tolist(), b.tolist()) + [0] * 100
    assert convolve_at(pos, b, outs, coeffs=pos).tolist() == [idx[i] for i in outs]


def test_maxplus_examples():
    assert maxplus_convolve([0, None], [None, 5]) == [None, 5, None]
    assert maxplus_convolve([0, 1, 2], [0, 0, 0]) == [0, 1, 2, 2, 2]
    assert maxplus_convolve([2**70], [1]) == [2**70 + 1]


def _brute_maxplus(a, b):
    out = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if x is not None and y is not None and (out[i + j] is None or x + y > out[i + j]):
                out[i + j] = x + y
    return out


def test_maxplus_matches_brute_and_duality(rng):
    for _ in range(300):
        a = [rng.choice([None, rng.randint(-50, 50)]) for _ in range(rng.randint(1, 10))]
        b = [rng.choice([None, rng.randint(-50, 50)]) for _ in range(rng.randint(1, 10))]
        assert maxplus_convolve(a, b) == _brute_maxplus(a, b)
        neg = [None if x is None else -x for x in maxplus_convolve(a, b)]
        assert minplus_convolve([None if x is None else -x for x in a],
                                [None if x is None else -x for x in b]) == neg


def test_register_backend():
    register_maxplus_backend("brute", _brute_maxplus)
    assert maxplus_convolve([1, 2], [3], backend="brute") == [4, 5]
