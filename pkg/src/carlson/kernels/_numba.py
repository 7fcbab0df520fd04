"""Scalar search kernels compiled with numba.

Each function mirrors one in ``_numpy`` with the same signature and result.
All indices are canonical table indices; a variable word is described by the
pair ``(fixed, star)`` so that its instantiation by letter rank ``a`` sits at
``fixed + (a + 1) * star``.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def hj_first(table, fixed, star, k, allowed):
    """Position of the first candidate whose instantiations share an allowed color, else -1."""
    for j in range(fixed.shape[0]):
        c0 = table[fixed[j] + star[j]]
        if not allowed[c0]:
            continue
        ok = True
        for a in range(1, k):
            if table[fixed[j] + (a + 1) * star[j]] != c0:
                ok = False
                break
        if ok:
            return j
    return -1


@njit(cache=True, nogil=True)
def hj_scan(lo, hi, c, size, k, fixed, star):
    """First coloring index in ``[lo, hi)`` admitting no witness, else -1.

    Coloring ``ci`` gives the word of table index ``t >= 1`` the color
    ``(ci // c**(t-1)) % c``; the empty word (index 0) gets color 0.
    """
    table = np.zeros(size, dtype=np.int64)
    for ci in range(lo, hi):
        rest = ci
        for t in range(1, size):
            table[t] = rest % c
            rest //= c
        found = False
        for j in range(fixed.shape[0]):
            c0 = table[fixed[j] + star[j]]
            ok = True
            for a in range(1, k):
                if table[fixed[j] + (a + 1) * star[j]] != c0:
                    ok = False
                    break
            if ok:
                found = True
                break
        if not found:
            return ci
    return -1


@njit(cache=True, nogil=True)
def carlson_dfs(table, k, m, arity, fixed, star, cmin, cmax, last_pos, first_lo, first_hi):
    """Lexicographically least choice of ``m`` increasing candidates with a monochromatic span.

    ``arity < 0`` means unbounded unions.  Candidates must end at or before
    ``last_pos - (blocks still to place)``.  Returns the chosen candidate
    positions, or an array of -1 when the range holds no solution.
    """
    n_cand = fixed.shape[0]
    cap = 1
    for _ in range(m):
        cap *= k + 1
    elems = np.empty(cap, dtype=np.int64)
    ars = np.empty(cap, dtype=np.int64)
    counts = np.zeros(m + 1, dtype=np.int64)
    choice = np.full(m, -1, dtype=np.int64)
    fail = np.full(m, -1, dtype=np.int64)
    if m == 0:
        return choice
    target = -1
    d = 0
    choice[0] = first_lo - 1
    while True:
        c = choice[d] + 1
        hi = first_hi if d == 0 else n_cand
        limit = last_pos - (m - 1 - d)
        found = -1
        while c < hi:
            if cmax[c] > limit or (d > 0 and cmin[c] <= cmax[choice[d - 1]]):
                c += 1
                continue
            t = table[fixed[c] + star[c]] if d == 0 else target
            ok = True
            for a in range(k):
                idx = fixed[c] + (a + 1) * star[c]
                if table[idx] != t:
                    ok = False
                    break
                for e in range(counts[d]):
                    if arity >= 0 and ars[e] >= arity:
                        continue
                    if table[elems[e] + idx] != t:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                found = c
                target = t
                break
            c += 1
        if found < 0:
            if d == 0:
                return fail
            d -= 1
            continue
        choice[d] = found
        n = counts[d]
        w = n
        for a in range(k):
            idx = fixed[found] + (a + 1) * star[found]
            elems[w] = idx
            ars[w] = 1
            w += 1
            for e in range(n):
                if arity >= 0 and ars[e] >= arity:
                    continue
                elems[w] = elems[e] + idx
                ars[w] = ars[e] + 1
                w += 1
        counts[d + 1] = w
        if d == m - 1:
            return choice
        d += 1
        choice[d] = -1


@njit(cache=True, nogil=True)
def lambda_counter(xs, k, pend_sum, pend_root, parent, base):
    """Feed ``xs`` to the binary counter of pending blocks.

    Element ``i`` becomes node ``base + i``; merging hangs the incoming root
    under the pending root.  Returns ``(i, root)`` for the element that
    completes a block with lambda at least ``k``, else ``(-1, -1)``.
    """
    for i in range(xs.shape[0]):
        node = base + i
        parent[node] = node
        root = node
        s = xs[i]
        low = 0
        while (s >> low) & 1 == 0:
            low += 1
        while low < k and pend_root[low] >= 0:
            r = pend_root[low]
            pend_root[low] = -1
            parent[root] = r
            root = r
            s += pend_sum[low]
            low = 0
            while (s >> low) & 1 == 0:
                low += 1
        if low >= k:
            return i, root
        pend_root[low] = root
        pend_sum[low] = s
    return -1, -1


@njit(cache=True, nogil=True)
def members_of(parent, n, root):
    """Mask of the nodes below ``n`` whose tree root is ``root``."""
    out = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        j = i
        while parent[j] != j:
            j = parent[j]
        out[i] = j == root
    return out
