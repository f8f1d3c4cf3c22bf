# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Signatures mirror allknap._pure."""
import numpy as np

from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t

NAME = "cython"


def ntt(int64_t[::1] x, int64_t p, int64_t g, bint invert):
    """In-place NTT; p < 2^31. Twiddles are laid out stage by stage (stage
    with half-width h occupies [h, 2h)) and multiplied with Shoup's trick."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j, bit, length, half, start, k
    cdef int64_t tmp
    cdef uint64_t a, b, w, ws, q, P = <uint64_t>p
    if n == 1:
        return
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j ^= bit
        if i < j:
            tmp = x[i]
            x[i] = x[j]
            x[j] = tmp
    root = pow(int(g), (int(p) - 1) // n, int(p))
    if invert:
        root = pow(root, int(p) - 2, int(p))
    cdef uint64_t[::1] base = np.empty(max(1, n // 2), dtype=np.uint64)
    cdef uint64_t[::1] tw = np.empty(n, dtype=np.uint64)
    cdef uint64_t[::1] tws = np.empty(n, dtype=np.uint64)
    cdef uint64_t rr = <uint64_t>root
    cdef Py_ssize_t stride
    with nogil:
        base[0] = 1
        for i in range(1, n // 2):
            base[i] = base[i - 1] * rr % P
        half = 1
        while half < n:
            stride = n // (2 * half)
            for k in range(half):
                w = base[k * stride]
                tw[half + k] = w
                tws[half + k] = (w << 32) // P
            half <<= 1
        length = 2
        while length <= n:
            half = length >> 1
            start = 0
            while start < n:
                for k in range(half):
                    w = tw[half + k]
                    ws = tws[half + k]
                    b = <uint64_t>x[start + k + half]
                    q = (b * ws) >> 32
                    b = b * w - q * P
                    if b >= P:
                        b -= P
                    a = <uint64_t>x[start + k]
                    x[start + k] = <int64_t>(a + b - P if a + b >= P else a + b)
                    x[start + k + half] = <int64_t>(a - b if a >= b else a + P - b)
                start += length
            length <<= 1
    if invert:
        ninv = pow(int(n), int(p) - 2, int(p))
        w = <uint64_t>ninv
        ws = (w << 32) // P
        with nogil:
            for i in range(n):
                b = <uint64_t>x[i]
                q = (b * ws) >> 32
                b = b * w - q * P
                x[i] = <int64_t>(b - P if b >= P else b)


def cyclic_convolve_mod(a, b, int64_t p, int64_t g):
    cdef int64_t[::1] fa = np.array(a, dtype=np.int64) % p
    cdef int64_t[::1] fb = np.array(b, dtype=np.int64) % p
    cdef Py_ssize_t i, n = fa.shape[0]
    ntt(fa, p, g, False)
    ntt(fb, p, g, False)
    with nogil:
        for i in range(n):
            fa[i] = fa[i] * fb[i] % p
    ntt(fa, p, g, True)
    return np.asarray(fa)


cdef inline bint _row_lex_less(int32_t[:, ::1] R, int64_t[:, ::1] M, Py_ssize_t j, Py_ssize_t e,
                               Py_ssize_t ns_j, Py_ssize_t tgt, Py_ssize_t ns_t) noexcept nogil:
    cdef Py_ssize_t s, lim = ns_j if ns_j < ns_t else ns_t
    cdef int64_t mc
    for s in range(lim):
        if R[j, s] != R[tgt, s]:
            return R[j, s] < R[tgt, s]
        mc = M[j, s] + (1 if s == e else 0)
        if mc != M[tgt, s]:
            return mc > M[tgt, s]
    return ns_j > ns_t


cdef inline void _copy_row(int32_t[:, ::1] R, int64_t[:, ::1] M, Py_ssize_t src, Py_ssize_t dst,
                           Py_ssize_t e) noexcept nogil:
    cdef Py_ssize_t s
    for s in range(R.shape[1]):
        R[dst, s] = R[src, s]
        M[dst, s] = M[src, s]
    M[dst, e] += 1


def propagate_rows(int32_t[:, ::1] ranks, int64_t[:, ::1] mults, int32_t[::1] nsupp,
                   uint8_t[::1] present, int64_t[::1] value, int64_t[::1] size,
                   int64_t[::1] weight, int64_t[::1] profit):
    cdef Py_ssize_t T = present.shape[0] - 1
    cdef Py_ssize_t j, e, tgt, ns
    cdef int32_t r
    cdef int64_t cv
    with nogil:
        for j in range(T + 1):
            if not present[j]:
                continue
            ns = nsupp[j]
            for e in range(ns):
                r = ranks[j, e]
                tgt = j + weight[r]
                if tgt > T:
                    continue
                cv = value[j] + profit[r]
                if present[tgt]:
                    if cv < value[tgt]:
                        continue
                    if cv == value[tgt] and not _row_lex_less(ranks, mults, j, e, ns, tgt, nsupp[tgt]):
                        continue
                _copy_row(ranks, mults, j, tgt, e)
                nsupp[tgt] = <int32_t>ns
                present[tgt] = 1
                value[tgt] = cv
                size[tgt] = size[j] + 1


cdef inline void _heap_push(int64_t[::1] keys, int64_t[::1] vals, Py_ssize_t* n,
                            int64_t key, int64_t val) noexcept nogil:
    cdef Py_ssize_t i = n[0], parent
    n[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if keys[parent] <= key:
            break
        keys[i] = keys[parent]
        vals[i] = vals[parent]
        i = parent
    keys[i] = key
    vals[i] = val


cdef inline void _heap_pop(int64_t[::1] keys, int64_t[::1] vals, Py_ssize_t* n,
                           int64_t* key, int64_t* val) noexcept nogil:
    cdef Py_ssize_t i = 0, child, m
    cdef int64_t lk, lv
    key[0] = keys[0]
    val[0] = vals[0]
    n[0] -= 1
    m = n[0]
    lk = keys[m]
    lv = vals[m]
    while True:
        child = 2 * i + 1
        if child >= m:
            break
        if child + 1 < m and keys[child + 1] < keys[child]:
            child += 1
        if keys[child] >= lk:
            break
        keys[i] = keys[child]
        vals[i] = vals[child]
        i = child
    keys[i] = lk
    vals[i] = lv


def propagate_residues(int32_t[:, ::1] ranks, int64_t[:, ::1] mults, int32_t[::1] nsupp,
                       uint8_t[::1] present, int64_t[::1] value, int64_t[::1] size,
                       int64_t[::1] total, int64_t[::1] weight, int64_t[::1] profit):
    cdef Py_ssize_t mod = present.shape[0]
    cdef Py_ssize_t cap = mod * (ranks.shape[1] + 1) + 1
    cdef int64_t[::1] keys = np.empty(cap, dtype=np.int64)
    cdef int64_t[::1] vals = np.empty(cap, dtype=np.int64)
    cdef uint8_t[::1] done = np.zeros(mod, dtype=np.uint8)
    cdef Py_ssize_t hn = 0, r, r2, e, ns
    cdef int64_t s, s2, cv, key, val
    cdef int32_t x
    cdef bint pushed
    with nogil:
        for r in range(mod):
            if present[r]:
                _heap_push(keys, vals, &hn, total[r], r)
        while hn > 0:
            _heap_pop(keys, vals, &hn, &key, &val)
            r = val
            s = key
            if done[r] or s != total[r]:
                continue
            done[r] = 1
            ns = nsupp[r]
            for e in range(ns):
                x = ranks[r, e]
                r2 = (r + weight[x]) % mod
                if done[r2]:
                    continue
                s2 = s + weight[x]
                cv = value[r] + profit[x]
                if present[r2]:
                    if s2 > total[r2]:
                        continue
                    if s2 == total[r2]:
                        if cv < value[r2]:
                            continue
                        if cv == value[r2] and not _row_lex_less(ranks, mults, r, e, ns, r2, nsupp[r2]):
                            continue
                pushed = (not present[r2]) or s2 < total[r2]
                _copy_row(ranks, mults, r, r2, e)
                nsupp[r2] = <int32_t>ns
                present[r2] = 1
                value[r2] = cv
                size[r2] = size[r] + 1
                total[r2] = s2
                if pushed:
                    _heap_push(keys, vals, &hn, s2, r2)
