"""Exact integer, boolean and (max,+)/(min,+) convolutions.

Integer convolution is exact: sparse operands go through a direct
shift-and-add, dense ones through number-theoretic transforms modulo two
31-bit primes recombined by CRT.
"""
from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np

from . import _backend
from .core import check

P1, G1 = 2013265921, 31  # 15 * 2^27 + 1
P2, G2 = 2113929217, 5  # 63 * 2^25 + 1
EXACT_LIMIT = P1 * P2  # every output coefficient must stay below this
MAX_NTT = 1 << 25

_P1_INV_MOD_P2 = pow(P1, -1, P2)


def _next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def _direct(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Shift-and-add over the nonzeros of the sparser operand."""
    if np.count_nonzero(a) > np.count_nonzero(b):
        a, b = b, a
    nz = np.flatnonzero(a)
    # narrow accumulators halve memory traffic when the sums allow it
    narrow = int(a.max(initial=0)) * int(b.max(initial=0)) * len(nz) < 2**31
    acc = np.int32 if narrow else np.int64
    bb = b.astype(acc)
    out = np.zeros(len(a) + len(b) - 1, dtype=acc)
    for i in nz:
        out[i:i + len(b)] += acc(a[i]) * bb
    return out.astype(np.int64)


def _ntt_convolve(a: np.ndarray, b: np.ndarray, backend=None) -> np.ndarray:
    kernels = _backend.get(backend)
    m = len(a) + len(b) - 1
    n = _next_pow2(m)
    check(n <= MAX_NTT, f"transform length {n} exceeds 2^25")
    fa = np.zeros(n, dtype=np.int64)
    fb = np.zeros(n, dtype=np.int64)
    fa[:len(a)] = a
    fb[:len(b)] = b
    r1 = kernels.cyclic_convolve_mod(fa, fb, P1, G1)[:m]
    r2 = kernels.cyclic_convolve_mod(fa, fb, P2, G2)[:m]
    # x = r1 + P1 * ((r2 - r1) * P1^-1 mod P2); all products stay below 2^62
    t = (r2 - r1) % P2 * _P1_INV_MOD_P2 % P2
    return r1 + P1 * t


def int_convolve(a: Sequence[int], b: Sequence[int], method: str = "auto", backend: Optional[str] = None) -> np.ndarray:
    """Exact c[i] = sum_{j+k=i} a[j] * b[k] for non-negative integer arrays.

    The coefficient bound max(a) * max(b) * min(len) must stay below
    ``EXACT_LIMIT`` (about 2^61.9); violating it raises ContractError.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    check(a.min() >= 0 and b.min() >= 0, "int_convolve needs non-negative inputs")
    bound = int(a.max()) * int(b.max()) * min(len(a), len(b))
    check(bound < EXACT_LIMIT, f"coefficient bound {bound} exceeds the exact range")
    if method == "auto":
        nnz = min(np.count_nonzero(a), np.count_nonzero(b))
        n = _next_pow2(len(a) + len(b) - 1)
        method = "direct" if nnz * max(len(a), len(b)) <= 8 * n * max(1, n.bit_length()) else "ntt"
    if method == "direct":
        return _direct(a, b)
    if method == "ntt":
        return _ntt_convolve(a, b, backend)
    raise ValueError(f"unknown method {method!r}")


def bool_convolve(a: Sequence[int], b: Sequence[int], **kw) -> tuple[np.ndarray, np.ndarray]:
    """Boolean convolution of 0/1 arrays plus the exact witness count per index."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    check(all(x.size == 0 or (x.min() >= 0 and x.max() <= 1) for x in (a, b)), "bool_convolve needs 0/1 arrays")
    counts = int_convolve(a, b, **kw)
    return (counts > 0).astype(np.uint8), counts


def convolve_at(positions: np.ndarray, b: np.ndarray, outputs: np.ndarray,
                coeffs: Optional[np.ndarray] = None) -> np.ndarray:
    """Evaluate sum_{p in positions} coeff(p) * b[i - p] only at the given outputs.

    ``coeffs`` defaults to all ones (a witness count); passing the positions
    themselves yields the index-sum.  Gathers directly when the work is
    small, otherwise runs one full convolution.
    """
    positions = np.asarray(positions, dtype=np.int64)
    outputs = np.asarray(outputs, dtype=np.int64)
    coeffs = np.ones(len(positions), dtype=np.int64) if coeffs is None else np.asarray(coeffs, dtype=np.int64)
    out = np.zeros(len(outputs), dtype=np.int64)
    if len(positions) == 0 or len(outputs) == 0:
        return out
    nb = len(b)
    full = int(positions.max()) + nb
    if len(positions) * len(outputs) <= 16 * full * max(1, full.bit_length()):
        b = np.asarray(b)
        for p, c in zip(positions.tolist(), coeffs):
            idx = outputs - p
            ok = (idx >= 0) & (idx < nb)
            out[ok] += c * b[idx[ok]]
        return out
    a = np.zeros(int(positions.max()) + 1, dtype=np.int64)
    np.add.at(a, positions, coeffs)
    conv = int_convolve(a, b)
    ok = outputs < len(conv)
    out[ok] = conv[outputs[ok]]
    return out


# ---------------------------------------------------------------- (max,+)

NEG = -(2**62)  # sentinel below every legal value in the int64 path
_FINITE = 2**60


def _maxplus_schoolbook(a: list, b: list) -> list:
    if not a or not b:
        return []
    finite = [x for x in a + b if x is not None]
    m = len(a) + len(b) - 1
    if not finite:
        return [None] * m
    if len(a) < len(b):
        a, b = b, a
    if max(abs(x) for x in finite) < _FINITE:
        av = np.array([NEG if x is None else x for x in a], dtype=np.int64)
        out = np.full(m, NEG, dtype=np.int64)
        for k, y in enumerate(b):
            if y is not None:
                seg = out[k:k + len(av)]
                np.maximum(seg, av + y, out=seg)
        return [None if x < -(2**61) else int(x) for x in out.tolist()]
    ninf = float("-inf")
    av = np.array([ninf if x is None else x for x in a], dtype=object)
    out = np.full(m, ninf, dtype=object)
    for k, y in enumerate(b):
        if y is not None:
            out[k:k + len(av)] = np.maximum(out[k:k + len(av)], av + y)
    return [None if x == ninf else int(x) for x in out.tolist()]


MaxPlusBackend = Callable[[list, list], list]
_BACKENDS: dict[str, MaxPlusBackend] = {"schoolbook": _maxplus_schoolbook}
_default_backend = "schoolbook"


def register_maxplus_backend(name: str, fn: MaxPlusBackend, default: bool = False) -> None:
    """Plug in an alternative (max,+) routine; ``fn(a, b)`` takes lists with None for -inf."""
    global _default_backend
    _BACKENDS[name] = fn
    if default:
        _default_backend = name


def maxplus_convolve(a: Sequence[Optional[int]], b: Sequence[Optional[int]], backend: Optional[str] = None) -> list:
    """c[i] = max_{j+k=i} (a[j] + b[k]); None stands for -inf and absorbs."""
    return _BACKENDS[backend or _default_backend](list(a), list(b))


def minplus_convolve(a, b, backend=None) -> list:
    neg = lambda xs: [None if x is None else -x for x in xs]  # noqa: E731
    return neg(maxplus_convolve(neg(a), neg(b), backend))
