"""Pure-Python versions of the hot kernels.

Signatures match the compiled ``_ext`` module exactly; arrays are mutated
in place where the compiled version does so.
"""
import heapq

import numpy as np

NAME = "python"


def _bit_reverse(n):
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def _powers(w, count, p):
    out = np.ones(1, dtype=np.int64)
    while len(out) < count:
        step = pow(w, len(out), p)
        out = np.concatenate([out, out * step % p])
    return out[:count]


def ntt(x, p, g, invert):
    """In-place iterative NTT of an int64 array whose length is a power of two."""
    n = len(x)
    if n == 1:
        return
    x[:] = x[_bit_reverse(n)]
    root = pow(g, (p - 1) // n, p)
    if invert:
        root = pow(root, p - 2, p)
    table = _powers(root, n // 2, p)
    length = 2
    while length <= n:
        half = length // 2
        tw = table[:: n // length][:half]
        blocks = x.reshape(-1, length)
        lo = blocks[:, :half].copy()
        hi = blocks[:, half:] * tw % p
        blocks[:, :half] = (lo + hi) % p
        blocks[:, half:] = (lo - hi) % p
        length *= 2
    if invert:
        x[:] = x * pow(n, p - 2, p) % p


def cyclic_convolve_mod(a, b, p, g):
    """Cyclic convolution mod p of two equal power-of-two-length int64 arrays."""
    fa = np.array(a, dtype=np.int64) % p
    fb = np.array(b, dtype=np.int64) % p
    ntt(fa, p, g, False)
    ntt(fb, p, g, False)
    fa = fa * fb % p
    ntt(fa, p, g, True)
    return fa


def _row_lex_less(R, M, j, e, ns_j, tgt, ns_t):
    """Is row j (with slot e incremented) lex-smaller than row tgt?"""
    rj, rt = R[j], R[tgt]
    mj, mt = M[j], M[tgt]
    for s in range(min(ns_j, ns_t)):
        if rj[s] != rt[s]:
            return rj[s] < rt[s]
        mc = mj[s] + (1 if s == e else 0)
        if mc != mt[s]:
            return mc > mt[s]
    return ns_j > ns_t


def propagate_rows(ranks, mults, nsupp, present, value, size, weight, profit):
    T = len(present) - 1
    R = ranks.tolist()
    M = mults.tolist()
    NS = nsupp.tolist()
    P = present.tolist()
    V = value.tolist()
    S = size.tolist()
    W = [int(w) for w in weight]
    F = [int(f) for f in profit]
    for j in range(T + 1):
        if not P[j]:
            continue
        ns = NS[j]
        row = R[j]
        for e in range(ns):
            r = row[e]
            tgt = j + W[r]
            if tgt > T:
                continue
            cv = V[j] + F[r]
            if P[tgt]:
                if cv < V[tgt]:
                    continue
                if cv == V[tgt] and not _row_lex_less(R, M, j, e, ns, tgt, NS[tgt]):
                    continue
            R[tgt] = list(row)
            m = list(M[j])
            m[e] += 1
            M[tgt] = m
            NS[tgt] = ns
            P[tgt] = 1
            V[tgt] = cv
            S[tgt] = S[j] + 1
    ranks[:] = R
    mults[:] = M
    nsupp[:] = NS
    present[:] = P
    value[:] = V
    size[:] = S


def propagate_residues(ranks, mults, nsupp, present, value, size, total, weight, profit):
    """Dijkstra over residues mod len(present); keys are total sums."""
    mod = len(present)
    R = ranks.tolist()
    M = mults.tolist()
    NS = nsupp.tolist()
    P = present.tolist()
    V = value.tolist()
    S = size.tolist()
    TOT = total.tolist()
    W = [int(w) for w in weight]
    F = [int(f) for f in profit]
    done = [False] * mod
    heap = [(TOT[r], r) for r in range(mod) if P[r]]
    heapq.heapify(heap)
    while heap:
        s, r = heapq.heappop(heap)
        if done[r] or s != TOT[r]:
            continue
        done[r] = True
        ns = NS[r]
        row = R[r]
        for e in range(ns):
            x = row[e]
            r2 = (r + W[x]) % mod
            if done[r2]:
                continue
            s2 = s + W[x]
            cv = V[r] + F[x]
            if P[r2]:
                if s2 > TOT[r2]:
                    continue
                if s2 == TOT[r2]:
                    if cv < V[r2]:
                        continue
                    if cv == V[r2] and not _row_lex_less(R, M, r, e, ns, r2, NS[r2]):
                        continue
            pushed = not P[r2] or s2 < TOT[r2]
            R[r2] = list(row)
            m = list(M[r])
            m[e] += 1
            M[r2] = m
            NS[r2] = ns
            P[r2] = 1
            V[r2] = cv
            S[r2] = S[r] + 1
            TOT[r2] = s2
            if pushed:
                heapq.heappush(heap, (s2, r2))
    ranks[:] = R
    mults[:] = M
    nsupp[:] = NS
    present[:] = P
    value[:] = V
    size[:] = S
    total[:] = TOT
