# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bitmask kernels; same contract as :mod:`lpadecomp._pykernels`."""

from libc.stdlib cimport malloc, realloc, free
from libc.stdint cimport uint64_t, int64_t, int8_t

import itertools

import numpy as np

cdef extern from *:
    """
    static inline int lpa_popcount(unsigned long long x) { return __builtin_popcountll(x); }
    static inline int lpa_ctz(unsigned long long x) { return __builtin_ctzll(x); }
    static inline int lpa_mul_ovf(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int lpa_add_ovf(long long a, long long b, long long *r) { return __builtin_add_overflow(a, b, r); }
    """
    int lpa_popcount(unsigned long long x) nogil
    int lpa_ctz(unsigned long long x) nogil
    int lpa_mul_ovf(long long a, long long b, long long *r) nogil
    int lpa_add_ovf(long long a, long long b, long long *r) nogil

OMEGA_CODE = -1
MAX_VERTICES = 63

DEF MAXN = 63


cdef struct Masks:
    int n
    uint64_t succ[MAXN]
    uint64_t omega[MAXN]
    uint64_t reg
    uint64_t inf


cdef struct U64Buf:
    uint64_t *data
    Py_ssize_t size
    Py_ssize_t cap


cdef int buf_push(U64Buf *b, uint64_t value) except -1:
    cdef uint64_t *grown
    if b.size == b.cap:
        b.cap = b.cap * 2 if b.cap else 64
        grown = <uint64_t *> realloc(b.data, b.cap * sizeof(uint64_t))
        if grown == NULL:
            raise MemoryError()
        b.data = grown
    b.data[b.size] = value
    b.size += 1
    return 0


cdef inline uint64_t full_mask(int n) nogil:
    return (<uint64_t> 1 << n) - 1 if n < 64 else <uint64_t> -1


cdef int load_masks(Masks *g, int n, object mult) except -1:
    cdef int i, j
    cdef long long m
    if n > MAXN:
        raise ValueError(f"kernels support at most {MAXN} vertices")
    g.n = n
    g.reg = 0
    g.inf = 0
    for i in range(n):
        g.succ[i] = 0
        g.omega[i] = 0
        for j in range(n):
            m = mult[i * n + j]
            if m:
                g.succ[i] |= <uint64_t> 1 << j
                if m < 0:
                    g.omega[i] |= <uint64_t> 1 << j
        if g.omega[i]:
            g.inf |= <uint64_t> 1 << i
        elif g.succ[i]:
            g.reg |= <uint64_t> 1 << i
    return 0


cdef void load_masks_i8(Masks *g, int n, const int8_t *flat) nogil:
    cdef int i, j
    cdef int8_t m
    g.n = n
    g.reg = 0
    g.inf = 0
    for i in range(n):
        g.succ[i] = 0
        g.omega[i] = 0
        for j in range(n):
            m = flat[i * n + j]
            if m:
                g.succ[i] |= <uint64_t> 1 << j
                if m < 0:
                    g.omega[i] |= <uint64_t> 1 << j
        if g.omega[i]:
            g.inf |= <uint64_t> 1 << i
        elif g.succ[i]:
            g.reg |= <uint64_t> 1 << i


cdef inline bint is_hsat(const Masks *g, uint64_t h) nogil:
    cdef uint64_t rest = h
    cdef int i
    while rest:
        i = lpa_ctz(rest)
        rest &= rest - 1
        if g.succ[i] & ~h:
            return False
    rest = g.reg & ~h
    while rest:
        i = lpa_ctz(rest)
        rest &= rest - 1
        if not (g.succ[i] & ~h):
            return False
    return True


cdef inline bint set_less(uint64_t a, uint64_t b) nogil:
    # size first; equal sizes: the set holding the least element of a^b is smaller
    cdef int pa = lpa_popcount(a), pb = lpa_popcount(b)
    cdef uint64_t d
    if pa != pb:
        return pa < pb
    d = a ^ b
    if not d:
        return False
    return (a & (d & (~d + 1))) != 0


cdef int collect_hsat(const Masks *g, U64Buf *out) except -1:
    cdef uint64_t h, top = full_mask(g.n)
    cdef uint64_t key
    cdef Py_ssize_t i, j
    if g.n > 40:
        raise ValueError("exhaustive hsat enumeration beyond 40 vertices is not supported")
    h = 0
    while True:
        if is_hsat(g, h):
            buf_push(out, h)
        if h == top:
            break
        h += 1
    # insertion sort by set order
    for i in range(1, out.size):
        key = out.data[i]
        j = i - 1
        while j >= 0 and set_less(key, out.data[j]):
            out.data[j + 1] = out.data[j]
            j -= 1
        out.data[j + 1] = key
    return 0


cdef inline uint64_t breaking(const Masks *g, uint64_t h) nogil:
    cdef uint64_t out = 0, rest = g.inf & ~h
    cdef int w
    while rest:
        w = lpa_ctz(rest)
        rest &= rest - 1
        if (g.succ[w] & ~h) and not (g.omega[w] & ~h):
            out |= <uint64_t> 1 << w
    return out


cdef inline bint acyclic(const uint64_t *adj, uint64_t within) nogil:
    cdef uint64_t rem = within, peel, it
    cdef int u
    while rem:
        peel = 0
        it = rem
        while it:
            u = lpa_ctz(it)
            it &= it - 1
            if not (adj[u] & rem):
                peel |= <uint64_t> 1 << u
        if not peel:
            return False
        rem &= ~peel
    return True


cdef inline bint coreach_all(const uint64_t *adj, uint64_t outside, uint64_t target) nogil:
    cdef uint64_t good = 0, grown, it
    cdef int u
    while True:
        grown = good
        it = outside & ~good
        while it:
            u = lpa_ctz(it)
            it &= it - 1
            if adj[u] & (target | good):
                grown |= <uint64_t> 1 << u
        if grown == good:
            return good == outside
        good = grown


cdef bint condition(const Masks *g, uint64_t x, uint64_t y) nogil:
    cdef uint64_t bx = breaking(g, x), by = breaking(g, y)
    cdef uint64_t xy = x | y
    cdef uint64_t outside = full_mask(g.n) & ~xy
    cdef uint64_t adj[MAXN]
    cdef uint64_t s, o, it
    cdef int u
    it = outside
    while it:
        u = lpa_ctz(it)
        it &= it - 1
        s = g.succ[u]
        o = g.omega[u]
        if (bx >> u) & 1:
            s &= ~x
            o &= ~x
        if (by >> u) & 1:
            s &= ~y
            o &= ~y
        if o:
            return False
        adj[u] = s
    return coreach_all(adj, outside, xy) and acyclic(adj, outside)


cdef bint row_finite(const Masks *g, uint64_t x, uint64_t y) nogil:
    cdef uint64_t xy = x | y
    cdef uint64_t outside = full_mask(g.n) & ~xy
    return coreach_all(g.succ, outside, xy) and acyclic(g.succ, outside)


cdef inline bint nontrivial(uint64_t h, uint64_t top) nogil:
    return h != 0 and h != top


cdef int scan_pairs(const Masks *g, const U64Buf *hs, bint first_only, bint rf,
                    U64Buf *out) except -1:
    """Walk disjoint nontrivial pairs in (|X|+|Y|, i, j) order, pushing passing pairs to ``out``."""
    cdef uint64_t top = full_mask(g.n)
    cdef Py_ssize_t i, j, lo, hi
    cdef int total, si, other, maxsize = g.n
    cdef int start[MAXN + 2]
    cdef int stop[MAXN + 2]
    cdef uint64_t hx, hy
    cdef bint ok
    for total in range(MAXN + 2):
        start[total] = -1
        stop[total] = -1
    for i in range(hs.size):
        si = lpa_popcount(hs.data[i])
        if start[si] < 0:
            start[si] = i
        stop[si] = i + 1
    for total in range(2, 2 * maxsize + 1):
        for i in range(hs.size):
            hx = hs.data[i]
            if not nontrivial(hx, top):
                continue
            other = total - lpa_popcount(hx)
            if other < 1 or other > maxsize or start[other] < 0:
                continue
            lo = start[other]
            if lo < i + 1:
                lo = i + 1
            hi = stop[other]
            for j in range(lo, hi):
                hy = hs.data[j]
                if (hx & hy) or not nontrivial(hy, top):
                    continue
                ok = row_finite(g, hx, hy) if rf else condition(g, hx, hy)
                if ok:
                    buf_push(out, hx)
                    buf_push(out, hy)
                    if first_only:
                        return 0
    return 0


# -- Python-facing functions ------------------------------------------------

def hsat_sets(int n, mult):
    cdef Masks g
    cdef U64Buf hs = U64Buf(NULL, 0, 0)
    load_masks(&g, n, mult)
    try:
        collect_hsat(&g, &hs)
        return [int(hs.data[i]) for i in range(hs.size)]
    finally:
        free(hs.data)


def breaking_mask(int n, mult, h):
    cdef Masks g
    load_masks(&g, n, mult)
    return int(breaking(&g, <uint64_t> h))


def condition_holds(int n, mult, x, y):
    cdef Masks g
    load_masks(&g, n, mult)
    return bool(condition(&g, <uint64_t> x, <uint64_t> y))


def row_finite_holds(int n, mult, x, y):
    cdef Masks g
    load_masks(&g, n, mult)
    return bool(row_finite(&g, <uint64_t> x, <uint64_t> y))


def witness_pairs(int n, mult, first_only=False, row_finite=False):
    cdef Masks g
    cdef U64Buf hs = U64Buf(NULL, 0, 0)
    cdef U64Buf out = U64Buf(NULL, 0, 0)
    cdef Py_ssize_t k
    load_masks(&g, n, mult)
    try:
        collect_hsat(&g, &hs)
        scan_pairs(&g, &hs, first_only, row_finite, &out)
        return [(int(out.data[k]), int(out.data[k + 1])) for k in range(0, out.size, 2)]
    finally:
        free(hs.data)
        free(out.data)


cdef long long count_c(const Masks *g, const long long *mult, uint64_t x, uint64_t y,
                       int v) except -2:
    cdef int n = g.n
    cdef uint64_t xy = x | y
    cdef uint64_t bx = breaking(g, x), by = breaking(g, y)
    cdef uint64_t outside = full_mask(n) & ~xy
    cdef uint64_t adj[MAXN]
    cdef long long count[MAXN]
    cdef uint64_t reach, frontier, nxt, co, grown, useful, rem, it, it2
    cdef int u, t
    cdef long long total, m, term
    it = outside
    while it:
        u = lpa_ctz(it)
        it &= it - 1
        adj[u] = g.succ[u]
        if (bx >> u) & 1:
            adj[u] &= ~x
        if (by >> u) & 1:
            adj[u] &= ~y
    reach = <uint64_t> 1 << v
    frontier = reach
    while frontier:
        nxt = 0
        it = frontier
        while it:
            u = lpa_ctz(it)
            it &= it - 1
            nxt |= adj[u] & outside
        frontier = nxt & ~reach
        reach |= frontier
    co = 0
    while True:
        grown = co
        it = reach & ~co
        while it:
            u = lpa_ctz(it)
            it &= it - 1
            if adj[u] & (xy | co):
                grown |= <uint64_t> 1 << u
        if grown == co:
            break
        co = grown
    useful = reach & co
    if not ((useful >> v) & 1):
        return 0
    it = useful
    while it:
        u = lpa_ctz(it)
        it &= it - 1
        if g.omega[u] & adj[u] & (useful | xy):
            return -1
    if not acyclic(adj, useful):
        return -1
    rem = useful
    while rem:
        it = rem
        while it:
            u = lpa_ctz(it)
            it &= it - 1
            if adj[u] & rem:
                continue
            total = 0
            it2 = adj[u] & (useful | xy)
            while it2:
                t = lpa_ctz(it2)
                it2 &= it2 - 1
                m = mult[u * n + t]
                if (xy >> t) & 1:
                    term = m
                elif lpa_mul_ovf(m, count[t], &term):
                    raise OverflowError("path count exceeds 64 bits")
                if lpa_add_ovf(total, term, &total):
                    raise OverflowError("path count exceeds 64 bits")
            count[u] = total
            rem &= ~(<uint64_t> 1 << u)
    return count[v]


def count_paths(int n, mult, x, y, int v):
    cdef Masks g
    cdef long long flat[MAXN * MAXN]
    cdef int k
    if ((x | y) >> v) & 1:
        raise ValueError("start vertex lies inside X or Y")
    load_masks(&g, n, mult)
    for k in range(n * n):
        flat[k] = mult[k]
    return count_c(&g, flat, <uint64_t> x, <uint64_t> y, v)


# -- batch sweeps -----------------------------------------------------------

cdef bint orbit_min(int n, const int8_t *flat, const int *perms, int nperm) nogil:
    cdef int k, i, j, d
    cdef const int *p
    for k in range(nperm):
        p = perms + k * n
        d = 0
        for i in range(n):
            for j in range(n):
                d = flat[p[i] * n + p[j]] - flat[i * n + j]
                if d:
                    break
            if d:
                break
        if d < 0:
            return False
    return True


def graph_classes(int n, int max_mult, acyclic_only=False):
    """One representative per isomorphism class; see the pure-Python twin."""
    cdef int nn = n * n
    cdef bint acyc = acyclic_only
    perm_list = [p for p in itertools.permutations(range(n)) if list(p) != list(range(n))]
    cdef int nperm = len(perm_list)
    cdef int *perms = <int *> malloc(max(1, nperm * n) * sizeof(int))
    cdef int8_t flat[64]
    cdef int free_pos[64]
    cdef int nfree = 0, k, i
    cdef Masks g
    cdef Py_ssize_t count = 0, cap = 1024
    cdef int8_t *out = <int8_t *> malloc(cap * max(1, nn))
    cdef int8_t *grown
    if perms == NULL or out == NULL:
        free(perms)
        free(out)
        raise MemoryError()
    if n > 8:
        free(perms)
        free(out)
        raise ValueError("graph_classes supports at most 8 vertices")
    try:
        for k in range(nperm):
            for i in range(n):
                perms[k * n + i] = perm_list[k][i]
        for k in range(nn):
            flat[k] = 0
            if not (acyc and k // n == k % n):
                free_pos[nfree] = k
                nfree += 1
        with nogil:
            while True:
                if orbit_min(n, flat, perms, nperm):
                    load_masks_i8(&g, n, flat)
                    if not acyc or acyclic(g.succ, full_mask(n)):
                        if count == cap:
                            cap *= 2
                            grown = <int8_t *> realloc(out, cap * max(1, nn))
                            if grown == NULL:
                                break
                            out = grown
                        for k in range(nn):
                            out[count * nn + k] = flat[k]
                        count += 1
                # odometer step, last free position fastest
                k = nfree - 1
                while k >= 0:
                    if flat[free_pos[k]] < max_mult:
                        flat[free_pos[k]] += 1
                        break
                    flat[free_pos[k]] = 0
                    k -= 1
                if k < 0:
                    break
        result = np.empty((count, n, n), dtype=np.int8)
        if count and nn:
            result.reshape(-1)[:] = np.frombuffer((<char *> out)[:count * nn], dtype=np.int8)
        return result
    finally:
        free(perms)
        free(out)


def decide_kinds(mats, row_finite=False):
    cdef int8_t[:, :, ::1] view
    cdef Py_ssize_t N, k
    cdef int n
    cdef Masks g
    cdef U64Buf hs = U64Buf(NULL, 0, 0)
    cdef U64Buf found = U64Buf(NULL, 0, 0)
    cdef bint rf = row_finite
    arr = np.ascontiguousarray(mats, dtype=np.int8)
    if arr.ndim != 3:
        raise ValueError("expected an array of shape (N, n, n)")
    N = arr.shape[0]
    n = arr.shape[1]
    out = np.zeros(N, dtype=bool)
    if N == 0:
        return out
    if n == 0:
        return out
    view = arr
    try:
        for k in range(N):
            load_masks_i8(&g, n, &view[k, 0, 0])
            hs.size = 0
            found.size = 0
            collect_hsat(&g, &hs)
            scan_pairs(&g, &hs, True, rf, &found)
            out[k] = found.size > 0
        return out
    finally:
        free(hs.data)
        free(found.data)


def compatible_counts(mats):
    cdef int8_t[:, :, ::1] view
    cdef Py_ssize_t N, k, i, j
    cdef int n, v, si, sj
    cdef Masks g
    cdef U64Buf hs = U64Buf(NULL, 0, 0)
    cdef U64Buf rows = U64Buf(NULL, 0, 0)
    cdef long long flat[MAXN * MAXN]
    cdef uint64_t top, hx, hy, it
    cdef long long c
    arr = np.ascontiguousarray(mats, dtype=np.int8)
    if arr.ndim != 3:
        raise ValueError("expected an array of shape (N, n, n)")
    N = arr.shape[0]
    n = arr.shape[1]
    if N == 0 or n == 0:
        return np.zeros((0, 5), dtype=np.int64)
    view = arr
    top = full_mask(n)
    try:
        for k in range(N):
            load_masks_i8(&g, n, &view[k, 0, 0])
            for i in range(n * n):
                flat[i] = (&view[k, 0, 0])[i]
            hs.size = 0
            collect_hsat(&g, &hs)
            # same pair order as scan_pairs
            for si in range(2, 2 * n + 1):
                for i in range(hs.size):
                    hx = hs.data[i]
                    if not nontrivial(hx, top):
                        continue
                    for j in range(i + 1, hs.size):
                        hy = hs.data[j]
                        if lpa_popcount(hx) + lpa_popcount(hy) != si:
                            continue
                        if (hx & hy) or not nontrivial(hy, top):
                            continue
                        it = top & ~(hx | hy)
                        while it:
                            v = lpa_ctz(it)
                            it &= it - 1
                            c = count_c(&g, flat, hx, hy, v)
                            buf_push(&rows, <uint64_t> k)
                            buf_push(&rows, hx)
                            buf_push(&rows, hy)
                            buf_push(&rows, <uint64_t> v)
                            buf_push(&rows, <uint64_t> c)
        out = np.empty((rows.size // 5, 5), dtype=np.int64)
        if rows.size:
            out.reshape(-1)[:] = np.frombuffer((<char *> rows.data)[:rows.size * 8],
                                               dtype=np.uint64).view(np.int64)
        return out
    finally:
        free(hs.data)
        free(rows.data)
