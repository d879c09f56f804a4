"""Random forest of bagged CART regression trees.

Rows are put in a canonical (lexicographic) order before training, so a
forest depends only on the multiset of rows and the seed, never on the order
the rows arrive in. Every tree draws its bootstrap sample and its per-split
feature subsets from a stream seeded by ``(seed, tree index)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

MIN_SPLIT = 5


@njit(cache=True)
def _grow(X, y, w, order0, mtry, min_split, seed):
    """Grow one tree on rows with positive weight; returns node arrays."""
    np.random.seed(seed)
    n, p = X.shape
    m = 0
    for i in range(n):
        if w[i] > 0:
            m += 1
    order = np.empty((p, m), dtype=np.int64)
    for f in range(p):
        k = 0
        for idx in range(n):
            r = order0[f, idx]
            if w[r] > 0:
                order[f, k] = r
                k += 1
    max_nodes = 2 * m + 1
    feat = np.full(max_nodes, -1, dtype=np.int64)
    thr = np.zeros(max_nodes)
    left = np.full(max_nodes, -1, dtype=np.int64)
    right = np.full(max_nodes, -1, dtype=np.int64)
    value = np.zeros(max_nodes)
    st_node = np.empty(max_nodes, dtype=np.int64)
    st_start = np.empty(max_nodes, dtype=np.int64)
    st_end = np.empty(max_nodes, dtype=np.int64)
    top = 0
    st_node[0] = 0
    st_start[0] = 0
    st_end[0] = m
    top = 1
    count = 1
    goes_left = np.zeros(n, dtype=np.int64)
    buf = np.empty(m, dtype=np.int64)
    perm = np.arange(p)
    while top > 0:
        top -= 1
        node = st_node[top]
        s = st_start[top]
        e = st_end[top]
        W = 0.0
        S = 0.0
        SS = 0.0
        for idx in range(s, e):
            r = order[0, idx]
            W += w[r]
            S += w[r] * y[r]
            SS += w[r] * y[r] * y[r]
        value[node] = S / W
        if W < min_split or SS - S * S / W <= 1e-12 * max(SS, 1e-300):
            continue
        # partial Fisher-Yates for the candidate features
        for i in range(mtry):
            j = i + np.random.randint(p - i)
            tmp = perm[i]
            perm[i] = perm[j]
            perm[j] = tmp
        base = S * S / W
        best_gain = 1e-12 * max(abs(base), 1e-300)
        best_f = -1
        best_t = 0.0
        for ci in range(mtry):
            f = perm[ci]
            WL = 0.0
            SL = 0.0
            for idx in range(s, e - 1):
                r = order[f, idx]
                WL += w[r]
                SL += w[r] * y[r]
                xv = X[r, f]
                xn = X[order[f, idx + 1], f]
                if xn <= xv:
                    continue
                WR = W - WL
                SR = S - SL
                gain = SL * SL / WL + SR * SR / WR - base
                if gain > best_gain:
                    best_gain = gain
                    best_f = f
                    best_t = 0.5 * (xv + xn)
                    if best_t >= xn:
                        best_t = xv
        if best_f < 0:
            continue
        for idx in range(s, e):
            r = order[best_f, idx]
            goes_left[r] = 1 if X[r, best_f] <= best_t else 0
        nl = 0
        for f in range(p):
            a = s
            b = 0
            for idx in range(s, e):
                # branchless: the left/right outcome is unpredictable
                r = order[f, idx]
                g = goes_left[r]
                order[f, a] = r
                buf[b] = r
                a += g
                b += 1 - g
            for idx in range(b):
                order[f, a + idx] = buf[idx]
            nl = a - s
        feat[node] = best_f
        thr[node] = best_t
        lc = count
        rc = count + 1
        count += 2
        left[node] = lc
        right[node] = rc
        st_node[top] = lc
        st_start[top] = s
        st_end[top] = s + nl
        top += 1
        st_node[top] = rc
        st_start[top] = s + nl
        st_end[top] = e
        top += 1
    return feat[:count], thr[:count], left[:count], right[:count], value[:count]


@njit(cache=True)
def _bootstrap_counts(n, seed):
    np.random.seed(seed)
    w = np.zeros(n)
    for _ in range(n):
        w[np.random.randint(n)] += 1.0
    return w


@njit(cache=True)
def _predict(X, roots, feat, thr, left, right, value):
    out = np.empty(X.shape[0])
    nt = roots.shape[0]
    for i in range(X.shape[0]):
        total = 0.0
        for t in range(nt):
            node = roots[t]
            while feat[node] >= 0:
                if X[i, feat[node]] <= thr[node]:
                    node = left[node]
                else:
                    node = right[node]
            total += value[node]
        out[i] = total / nt
    return out


@dataclass(frozen=True)
class ForestModel:
    """Trees stored as concatenated node arrays; child indices are absolute."""

    roots: np.ndarray
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    n_trees: int

    def predict_many(self, X) -> np.ndarray:
        X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=float)))
        return _predict(X, self.roots, self.feature, self.threshold, self.left,
                        self.right, self.value)

    def predict(self, row) -> float:
        return float(self.predict_many(np.asarray(row, dtype=float)[None, :])[0])


def tree_seeds(seed: int, n_trees: int) -> np.ndarray:
    """Independent 32-bit seeds, one per tree index."""
    return np.random.SeedSequence(int(seed) & (2**63 - 1)).generate_state(n_trees)


def rf_train(features, targets, n_trees: int, seed: int, bootstrap: bool = True,
             min_split: int = MIN_SPLIT) -> ForestModel:
    """Bagged regression trees with ``ceil(p / 3)`` candidate features per split.

    Nodes holding fewer than ``min_split`` (bootstrap-weighted) rows become
    leaves. ``bootstrap=False`` trains every tree on the full data.
    """
    X = np.asarray(features, dtype=float)
    y = np.asarray(targets, dtype=float)
    if X.ndim != 2 or len(y) != len(X):
        raise ValueError("features must be (n, p) and targets (n,)")
    n, p = X.shape
    if n < 2:
        raise ValueError("random forest needs at least 2 rows")
    if n_trees < 1:
        raise ValueError("n_trees must be positive")
    canon = np.lexsort(np.column_stack([X, y]).T[::-1])
    X = np.ascontiguousarray(X[canon])
    y = np.ascontiguousarray(y[canon])
    order0 = np.ascontiguousarray(
        np.stack([np.argsort(X[:, f], kind="stable") for f in range(p)]).astype(np.int64)
    )
    mtry = max(1, math.ceil(p / 3))
    seeds = tree_seeds(seed, n_trees)
    parts = []
    offset = 0
    roots = np.empty(n_trees, dtype=np.int64)
    full = np.ones(n)
    for t in range(n_trees):
        s = int(seeds[t])
        w = _bootstrap_counts(n, s) if bootstrap else full
        feat, thr, lft, rgt, val = _grow(X, y, w, order0, mtry, min_split, s ^ 0x5BD1E995)
        lft = np.where(lft >= 0, lft + offset, -1)
        rgt = np.where(rgt >= 0, rgt + offset, -1)
        roots[t] = offset
        offset += len(feat)
        parts.append((feat, thr, lft, rgt, val))
    cat = [np.concatenate([part[i] for part in parts]) for i in range(5)]
    return ForestModel(roots, *cat, n_trees=n_trees)
