"""Exact maximum (weight) clique over bitset adjacency, compiled with numba.

Branch and bound in the Tomita style: at every node the candidate set is
greedily colored, vertices are scanned in reverse color order, and a branch
is cut as soon as the accumulated weight plus the color-class bound cannot
beat the incumbent.  Vertices are renumbered into smallest-last (degeneracy)
order before solving, which is what keeps the sparse instances tractable.

The recursion is unrolled into an explicit stack so the whole search runs
inside one compiled function.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64


@njit(cache=True, inline="always")
def _ctz(x):
    tz = 0
    if x & uint64(0xFFFFFFFF) == uint64(0):
        tz += 32
        x >>= uint64(32)
    if x & uint64(0xFFFF) == uint64(0):
        tz += 16
        x >>= uint64(16)
    if x & uint64(0xFF) == uint64(0):
        tz += 8
        x >>= uint64(8)
    if x & uint64(0xF) == uint64(0):
        tz += 4
        x >>= uint64(4)
    if x & uint64(0x3) == uint64(0):
        tz += 2
        x >>= uint64(2)
    if x & uint64(0x1) == uint64(0):
        tz += 1
    return tz


@njit(cache=True)
def _color_sort(adj, weights, p, order, bounds, scratch):
    """Greedy-color the vertex bitset p; fill `order` with vertices grouped
    by color class and `bounds` with the cumulative per-class max weight.
    Returns the number of vertices written."""
    n_words = p.shape[0]
    rest = scratch[0]
    avail = scratch[1]
    for w in range(n_words):
        rest[w] = p[w]
    cnt = 0
    cum = 0
    while True:
        empty = True
        for w in range(n_words):
            if rest[w] != uint64(0):
                empty = False
                break
        if empty:
            break
        for w in range(n_words):
            avail[w] = rest[w]
        class_max = 0
        start = cnt
        while True:
            word = -1
            for w in range(n_words):
                if avail[w] != uint64(0):
                    word = w
                    break
            if word < 0:
                break
            v = word * 64 + _ctz(avail[word])
            order[cnt] = v
            cnt += 1
            if weights[v] > class_max:
                class_max = weights[v]
            rest[word] &= ~(uint64(1) << uint64(v & 63))
            for w in range(n_words):
                avail[w] &= ~adj[v, w]
            avail[word] &= ~(uint64(1) << uint64(v & 63))
        cum += class_max
        for k in range(start, cnt):
            bounds[k] = cum
    return cnt


@njit(cache=True)
def _solve(adj, weights, p0, best0, max_depth, best_out):
    """Best clique inside candidate bitset p0 with weight strictly above
    best0.  Returns (weight, length); length 0 means nothing beat best0."""
    n = adj.shape[0]
    n_words = adj.shape[1]
    p_stack = np.zeros((max_depth + 2, n_words), dtype=np.uint64)
    order_stack = np.zeros((max_depth + 2, n), dtype=np.int32)
    bounds_stack = np.zeros((max_depth + 2, n), dtype=np.int64)
    i_stack = np.zeros(max_depth + 2, dtype=np.int64)
    rw_stack = np.zeros(max_depth + 2, dtype=np.int64)
    cur = np.zeros(max_depth + 2, dtype=np.int32)
    scratch = np.zeros((2, n_words), dtype=np.uint64)

    best = best0
    best_len = 0
    depth = 0
    for w in range(n_words):
        p_stack[0, w] = p0[w]
    cnt = _color_sort(adj, weights, p_stack[0], order_stack[0], bounds_stack[0], scratch)
    i_stack[0] = cnt - 1
    rw_stack[0] = 0

    while depth >= 0:
        i = i_stack[depth]
        if i < 0:
            depth -= 1
            continue
        rw = rw_stack[depth]
        if rw + bounds_stack[depth, i] <= best:
            depth -= 1
            continue
        v = order_stack[depth, i]
        i_stack[depth] = i - 1
        cur[depth] = v
        nd = depth + 1
        nonempty = False
        for w in range(n_words):
            p_stack[nd, w] = p_stack[depth, w] & adj[v, w]
            if p_stack[nd, w] != uint64(0):
                nonempty = True
        p_stack[depth, v >> 6] &= ~(uint64(1) << uint64(v & 63))
        nrw = rw + weights[v]
        if not nonempty:
            if nrw > best:
                best = nrw
                best_len = depth + 1
                for k in range(depth + 1):
                    best_out[k] = cur[k]
            continue
        cnt = _color_sort(adj, weights, p_stack[nd], order_stack[nd], bounds_stack[nd], scratch)
        i_stack[nd] = cnt - 1
        rw_stack[nd] = nrw
        depth = nd
    return best, best_len


def degeneracy_permutation(bool_adj: np.ndarray) -> np.ndarray:
    """Smallest-last vertex order; position k holds the old index placed at
    new index k."""
    n = bool_adj.shape[0]
    deg = bool_adj.sum(axis=1).astype(np.int64)
    alive = np.ones(n, dtype=bool)
    out = np.empty(n, dtype=np.int64)
    sentinel = np.iinfo(np.int64).max
    for k in range(n - 1, -1, -1):
        v = int(np.argmin(np.where(alive, deg, sentinel)))
        out[k] = v
        alive[v] = False
        deg[bool_adj[v] & alive] -= 1
    return out


def _pack_rows(rows: np.ndarray) -> np.ndarray:
    n = rows.shape[0]
    n_words = max(1, (n + 63) // 64)
    padded = np.zeros((n, n_words * 64), dtype=bool)
    padded[:, :n] = rows
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view(np.uint64).reshape(n, n_words).copy()


def solve_max_clique(
    bool_adj: np.ndarray,
    weights: np.ndarray | None = None,
    warm: list[int] | None = None,
    fix_vertex: int | None = None,
) -> tuple[int, list[int]]:
    """Maximum (weight) clique of the graph given as a boolean adjacency
    matrix.  `warm` is a known clique used as the incumbent; `fix_vertex`
    restricts the search to cliques through that vertex, which is lossless
    exactly when the caller knows some maximum clique contains it (true for
    any vertex of a vertex-transitive graph with uniform weights).

    Returns (total weight, vertex indices).
    """
    n = bool_adj.shape[0]
    if n == 0:
        return 0, []
    perm = degeneracy_permutation(bool_adj)
    inv = np.empty(n, dtype=np.int64)
    inv[perm] = np.arange(n)
    rows = bool_adj[np.ix_(perm, perm)]
    adj = _pack_rows(rows)
    if weights is None:
        w_new = np.ones(n, dtype=np.int64)
    else:
        w_new = np.asarray(weights, dtype=np.int64)[perm]

    n_words = adj.shape[1]
    p0 = np.zeros(n_words, dtype=np.uint64)
    base: list[int] = []
    base_w = 0
    if fix_vertex is None:
        idxs = np.arange(n)
    else:
        fv = int(inv[fix_vertex])
        idxs = np.nonzero(rows[fv])[0]
        base = [fv]
        base_w = int(w_new[fv])
    for v in idxs:
        p0[v >> 6] |= np.uint64(1) << np.uint64(v & 63)

    warm_new = [int(inv[v]) for v in (warm or [])]
    warm_w = int(sum(w_new[v] for v in warm_new))

    scratch = np.zeros((2, n_words), dtype=np.uint64)
    order = np.zeros(n, dtype=np.int32)
    bounds = np.zeros(n, dtype=np.int64)
    cnt = _color_sort(adj, w_new, p0.copy(), order, bounds, scratch)
    root_bound = int(bounds[cnt - 1]) if cnt else 0
    if base_w + root_bound <= warm_w:
        return warm_w, sorted(int(perm[v]) for v in warm_new)

    # any clique inside p0 takes at most one vertex per root color class, so
    # the class count bounds the stack depth; this keeps allocations small
    if cnt and int(w_new.min()) >= 1:
        n_classes = 1 + int(np.sum(bounds[1:cnt] > bounds[: cnt - 1]))
    else:
        n_classes = cnt
    best_out = np.zeros(n, dtype=np.int32)
    got, ln = _solve(adj, w_new, p0, warm_w - base_w, n_classes + 1, best_out)
    if ln == 0:
        return warm_w, sorted(int(perm[v]) for v in warm_new)
    found = base + [int(v) for v in best_out[:ln]]
    return base_w + got, sorted(int(perm[v]) for v in found)
