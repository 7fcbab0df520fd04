"""Vectorized numpy versions of the search kernels (no compiler needed)."""

import numpy as np


def _inst(fixed, star, k):
    return fixed[:, None] + (np.arange(1, k + 1, dtype=np.int64)[None, :] * star[:, None])


def hj_first(table, fixed, star, k, allowed):
    cols = table[_inst(fixed, star, k)]
    ok = (cols == cols[:, :1]).all(axis=1) & allowed[cols[:, 0]]
    hits = np.flatnonzero(ok)
    return int(hits[0]) if hits.size else -1


def hj_scan(lo, hi, c, size, k, fixed, star, chunk=4096):
    idx = _inst(fixed, star, k)
    powers = c ** np.arange(size - 1, dtype=np.int64)
    for start in range(lo, hi, chunk):
        ci = np.arange(start, min(hi, start + chunk), dtype=np.int64)
        tables = np.zeros((ci.size, size), dtype=np.int64)
        tables[:, 1:] = (ci[:, None] // powers[None, :]) % c
        cols = tables[:, idx]                      # (colorings, candidates, k)
        has = (cols == cols[:, :, :1]).all(axis=2).any(axis=1)
        bad = np.flatnonzero(~has)
        if bad.size:
            return int(ci[bad[0]])
    return -1


def carlson_dfs(table, k, m, arity, fixed, star, cmin, cmax, last_pos, first_lo, first_hi):
    fail = np.full(m, -1, dtype=np.int64)
    if m == 0:
        return fail
    inst = _inst(fixed, star, k)
    n_cand = fixed.shape[0]
    positions = np.arange(n_cand)

    def rec(d, elems, ars, prev_max, target, chosen):
        lo, hi = (first_lo, first_hi) if d == 0 else (0, n_cand)
        sel = positions[lo:hi]
        sel = sel[(cmax[sel] <= last_pos - (m - 1 - d)) & (cmin[sel] > prev_max)]
        if sel.size == 0:
            return None
        own = table[inst[sel]]                     # (cand, k)
        t = own[:, 0] if target < 0 else np.full(sel.size, target)
        ok = (own == t[:, None]).all(axis=1)
        live = elems if arity < 0 else elems[ars < arity]
        if live.size:
            cross = table[live[None, :, None] + inst[sel][:, None, :]]
            ok &= (cross == t[:, None, None]).all(axis=(1, 2))
        for j in np.flatnonzero(ok):
            c = sel[j]
            tc = int(t[j])
            if d == m - 1:
                return chosen + [int(c)]
            keep = ars < arity if arity >= 0 else np.ones(ars.size, dtype=bool)
            new = [inst[c]]
            new_ars = [np.ones(k, dtype=np.int64)]
            if keep.any():
                new.append((elems[keep][:, None] + inst[c][None, :]).ravel())
                new_ars.append(np.repeat(ars[keep] + 1, k))
            got = rec(d + 1, np.concatenate([elems] + new), np.concatenate([ars] + new_ars),
                      cmax[c], tc, chosen + [int(c)])
            if got is not None:
                return got
        return None

    got = rec(0, np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64), -1, -1, [])
    return fail if got is None else np.asarray(got, dtype=np.int64)


def lambda_counter(xs, k, pend_sum, pend_root, parent, base):
    # Sequential by nature; plain integers keep the loop tolerable.
    sums = pend_sum.tolist()
    roots = pend_root.tolist()
    par = {}
    hit = (-1, -1)
    for i, x in enumerate(xs.tolist()):
        root = base + i
        par[root] = root
        s = x
        low = (s & -s).bit_length() - 1
        while low < k and roots[low] >= 0:
            r = roots[low]
            roots[low] = -1
            par[root] = r
            root = r
            s += sums[low]
            low = (s & -s).bit_length() - 1
        if low >= k:
            hit = (i, root)
            break
        roots[low] = root
        sums[low] = s
    pend_sum[:] = sums
    pend_root[:] = roots
    if par:
        idx = np.fromiter(par.keys(), dtype=np.int64, count=len(par))
        parent[idx] = np.fromiter(par.values(), dtype=np.int64, count=len(par))
    return hit


def members_of(parent, n, root):
    # Pointer jumping: every node reaches its root in O(log depth) rounds.
    up = parent[:n].copy()
    while True:
        nxt = up[up]
        if np.array_equal(nxt, up):
            return up == root
        up = nxt
