"""Pure-Python bitmask kernels.

Every function takes a graph as ``(n, mult)`` where ``mult`` is a flat
row-major ``n*n`` sequence of ints: 0 = no bundle, -1 = omega bundle,
k > 0 = k parallel edges. Vertex sets are int bitmasks. The compiled module
``_ckernels`` exposes the same functions with the same results.
"""

from __future__ import annotations

import itertools

import numpy as np

OMEGA_CODE = -1
MAX_VERTICES = 63


def _bits(mask):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def set_key(mask):
    """Order of vertex sets: size first, then lexicographic on sorted member indices."""
    return (mask.bit_count(), tuple(_bits(mask)))


def _masks(n, mult):
    if n > MAX_VERTICES:
        raise ValueError(f"kernels support at most {MAX_VERTICES} vertices")
    succ = [0] * n
    omega = [0] * n
    reg = inf = 0
    for i in range(n):
        s = o = 0
        row = i * n
        for j in range(n):
            m = mult[row + j]
            if m:
                s |= 1 << j
                if m < 0:
                    o |= 1 << j
        succ[i] = s
        omega[i] = o
        if o:
            inf |= 1 << i
        elif s:
            reg |= 1 << i
    return succ, omega, reg, inf


def _is_hsat(succ, reg, h):
    for i in _bits(h):
        if succ[i] & ~h:
            return False
    for i in _bits(reg & ~h):
        if not succ[i] & ~h:
            return False
    return True


def _hsat_sets(n, succ, reg):
    found = [h for h in range(1 << n) if _is_hsat(succ, reg, h)]
    found.sort(key=set_key)
    return found


def hsat_sets(n, mult):
    succ, _, reg, _ = _masks(n, mult)
    return _hsat_sets(n, succ, reg)


def _breaking(n, succ, omega, inf, h):
    out = 0
    for w in _bits(inf & ~h):
        if succ[w] & ~h and not omega[w] & ~h:
            out |= 1 << w
    return out


def breaking_mask(n, mult, h):
    succ, omega, _, inf = _masks(n, mult)
    return _breaking(n, succ, omega, inf, h)


def _acyclic(adj, within):
    rem = within
    while rem:
        peel = 0
        for u in _bits(rem):
            if not adj[u] & rem:
                peel |= 1 << u
        if not peel:
            return False
        rem &= ~peel
    return True


def _coreach_all(adj, outside, target):
    """True iff every vertex of ``outside`` has a path (through ``outside``) into ``target``."""
    good = 0
    while True:
        grown = good
        for u in _bits(outside & ~good):
            if adj[u] & (target | good):
                grown |= 1 << u
        if grown == good:
            return good == outside
        good = grown


def _condition(n, succ, omega, inf, x, y):
    full = (1 << n) - 1
    bx = _breaking(n, succ, omega, inf, x)
    by = _breaking(n, succ, omega, inf, y)
    xy = x | y
    outside = full & ~xy
    adj = [0] * n
    for u in _bits(outside):
        s, o = succ[u], omega[u]
        if bx >> u & 1:
            s &= ~x
            o &= ~x
        if by >> u & 1:
            s &= ~y
            o &= ~y
        if o:
            return False
        adj[u] = s
    return _coreach_all(adj, outside, xy) and _acyclic(adj, outside)


def condition_holds(n, mult, x, y):
    succ, omega, _, inf = _masks(n, mult)
    return _condition(n, succ, omega, inf, x, y)


def _row_finite(n, succ, x, y):
    full = (1 << n) - 1
    xy = x | y
    outside = full & ~xy
    return _coreach_all(succ, outside, xy) and _acyclic(succ, outside)


def row_finite_holds(n, mult, x, y):
    succ, _, _, _ = _masks(n, mult)
    return _row_finite(n, succ, x, y)


def _pairs_in_order(hs):
    """Disjoint pairs (i < j) of ``hs`` ordered by (|X|+|Y|, i, j); ``hs`` sorted by set_key."""
    if not hs:
        return
    sizes = [h.bit_count() for h in hs]
    start = {}
    stop = {}
    for i, s in enumerate(sizes):
        start.setdefault(s, i)
        stop[s] = i + 1
    for total in range(2, 2 * sizes[-1] + 1):
        for i, h in enumerate(hs):
            other = total - sizes[i]
            if other not in start:
                continue
            for j in range(max(start[other], i + 1), stop[other]):
                if not h & hs[j]:
                    yield h, hs[j]


def _nontrivial(hs, n):
    full = (1 << n) - 1
    return [h for h in hs if h and h != full]


def witness_pairs(n, mult, first_only=False, row_finite=False):
    succ, omega, reg, inf = _masks(n, mult)
    hs = _nontrivial(_hsat_sets(n, succ, reg), n)
    out = []
    for x, y in _pairs_in_order(hs):
        ok = _row_finite(n, succ, x, y) if row_finite else _condition(n, succ, omega, inf, x, y)
        if ok:
            out.append((x, y))
            if first_only:
                break
    return out


def count_paths(n, mult, x, y, v):
    """Number of XY-compatible paths from v (-1 for infinitely many)."""
    succ, omega, _, inf = _masks(n, mult)
    return _count(n, mult, succ, omega, inf, x, y, v)


def _count(n, mult, succ, omega, inf, x, y, v):
    full = (1 << n) - 1
    xy = x | y
    if xy >> v & 1:
        raise ValueError("start vertex lies inside X or Y")
    bx = _breaking(n, succ, omega, inf, x)
    by = _breaking(n, succ, omega, inf, y)
    outside = full & ~xy
    adj = [0] * n
    for u in _bits(outside):
        s = succ[u]
        if bx >> u & 1:
            s &= ~x
        if by >> u & 1:
            s &= ~y
        adj[u] = s
    reach = 1 << v
    frontier = reach
    while frontier:
        nxt = 0
        for u in _bits(frontier):
            nxt |= adj[u] & outside
        frontier = nxt & ~reach
        reach |= frontier
    co = 0
    while True:
        grown = co
        for u in _bits(reach & ~co):
            if adj[u] & (xy | co):
                grown |= 1 << u
        if grown == co:
            break
        co = grown
    useful = reach & co
    if not useful >> v & 1:
        return 0
    for u in _bits(useful):
        if omega[u] & adj[u] & (useful | xy):
            return -1
    if not _acyclic(adj, useful):
        return -1
    count = {}
    rem = useful
    while rem:
        for u in _bits(rem):
            if adj[u] & rem:
                continue
            total = 0
            row = u * n
            for t in _bits(adj[u] & (useful | xy)):
                m = mult[row + t]
                total += m if xy >> t & 1 else m * count[t]
            count[u] = total
            rem &= ~(1 << u)
    return count[v]


# -- batch sweeps -----------------------------------------------------------

def _perm_images(n):
    return [p for p in itertools.permutations(range(n)) if list(p) != list(range(n))]


def _is_orbit_min(n, flat, perms):
    for p in perms:
        for i in range(n):
            pi = p[i] * n
            row = i * n
            diff = 0
            for j in range(n):
                d = flat[pi + p[j]] - flat[row + j]
                if d:
                    diff = d
                    break
            if diff:
                break
        if diff < 0:
            return False
    return True


def graph_classes(n, max_mult, acyclic_only=False):
    """One representative per isomorphism class of n-vertex graphs with multiplicities 0..max_mult.

    The representative is the row-major lexicographically smallest matrix of its orbit.
    """
    perms = _perm_images(n)
    free = [k for k in range(n * n) if not (acyclic_only and k // n == k % n)]
    reps = []
    flat = [0] * (n * n)
    for values in itertools.product(range(max_mult + 1), repeat=len(free)):
        for k, val in zip(free, values):
            flat[k] = val
        if not _is_orbit_min(n, flat, perms):
            continue
        if acyclic_only:
            succ = _masks(n, flat)[0]
            if not _acyclic(succ, (1 << n) - 1):
                continue
        reps.append(list(flat))
    return np.array(reps, dtype=np.int8).reshape(len(reps), n, n)


def decide_kinds(mats, row_finite=False):
    mats = np.asarray(mats)
    n = mats.shape[1] if mats.ndim == 3 else 0
    out = np.zeros(len(mats), dtype=bool)
    for k, mat in enumerate(mats):
        flat = tuple(int(v) for v in mat.ravel())
        out[k] = bool(witness_pairs(n, flat, True, row_finite))
    return out


def compatible_counts(mats):
    """Rows (graph index, x, y, v, count) over every disjoint nontrivial hsat pair and vertex outside it."""
    mats = np.asarray(mats)
    n = mats.shape[1] if mats.ndim == 3 else 0
    full = (1 << n) - 1
    rows = []
    for k, mat in enumerate(mats):
        flat = tuple(int(v) for v in mat.ravel())
        succ, omega, reg, inf = _masks(n, flat)
        hs = _nontrivial(_hsat_sets(n, succ, reg), n)
        for x, y in _pairs_in_order(hs):
            for v in _bits(full & ~(x | y)):
                rows.append((k, x, y, v, _count(n, flat, succ, omega, inf, x, y, v)))
    return np.array(rows, dtype=np.int64).reshape(len(rows), 5)
