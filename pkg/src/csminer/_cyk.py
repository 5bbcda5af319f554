"""Compiled CYK fill for the simplified covariance model.

Spans are half-open ``[a, e)`` over the target window. For each node ``v`` the
fill stores ``L[v, a, e]``: the best score of deriving ``x[a:e]`` from the
subtree rooted at ``v`` including insertion runs on both flanks. Inside a node
the recursion is::

    M     node content (match or delete; bifurcation split)
    Rins  M followed by a right insertion run   (affine: open, then extend)
    R     max(M, Rins)
    Lins  left insertion run followed by R
    L     max(R, Lins)
"""

from __future__ import annotations

import numpy as np
from numba import njit

END, PAIR, LEFT, BIF, RIGHT = 0, 1, 2, 3, 4
NEG = -np.inf


@njit(cache=True, nogil=True)
def cyk_fill(ntype, child1, child2, pair_e, single_e, x, dpen, iopen, iext, L, R, I):
    n = x.shape[0]
    V = ntype.shape[0]
    for v in range(V - 1, -1, -1):
        t = ntype[v]
        c = child1[v]
        r = child2[v]
        for a in range(n, -1, -1):
            m_prev = NEG
            rins = NEG
            for e in range(a, n + 1):
                if t == END:
                    m = 0.0 if e == a else NEG
                elif t == PAIR:
                    m = L[c, a, e] - dpen
                    if e - a >= 2:
                        s = pair_e[v, x[a], x[e - 1]] + L[c, a + 1, e - 1]
                        if s > m:
                            m = s
                elif t == LEFT:
                    m = L[c, a, e] - dpen
                    if e - a >= 1:
                        s = single_e[v, x[a]] + L[c, a + 1, e]
                        if s > m:
                            m = s
                elif t == RIGHT:
                    m = L[c, a, e] - dpen
                    if e - a >= 1:
                        s = single_e[v, x[e - 1]] + L[c, a, e - 1]
                        if s > m:
                            m = s
                else:
                    m = NEG
                    for k in range(a, e + 1):
                        s = L[c, a, k] + L[r, k, e]
                        if s > m:
                            m = s
                if e > a:
                    s1 = m_prev - iopen
                    s2 = rins - iext
                    rins = s1 if s1 > s2 else s2
                best = m if m > rins else rins
                R[a, e] = best
                if e > a:
                    s1 = R[a + 1, e] - iopen
                    s2 = I[a + 1, e] - iext
                    li = s1 if s1 > s2 else s2
                else:
                    li = NEG
                I[a, e] = li
                L[v, a, e] = best if best > li else li
                m_prev = m
    return L


@njit(cache=True, nogil=True)
def best_local(L):
    """Highest root score over all spans; ties keep the leftmost, then shortest."""
    n = L.shape[1] - 1
    best = NEG
    ba = 0
    be = 0
    for a in range(n + 1):
        for e in range(a, n + 1):
            s = L[0, a, e]
            if s > best:
                best = s
                ba = a
                be = e
    return best, ba, be


@njit(cache=True, nogil=True)
def scan_banded(ntype, child1, child2, pair_e, single_e, x, width, dpen, iopen, iext):
    """Best root score over spans ``[a, e)`` with ``e - a <= width``, for every start ``a``.

    Same recursion as :func:`cyk_fill`, run once over the whole sequence with a
    band of ``width``. Rows are kept in a ring of ``width + 1`` starts, which is
    all a bifurcation needs. Returns ``(score[a], end[a])``; ties keep the
    shortest span.
    """
    n = x.shape[0]
    V = ntype.shape[0]
    W = width
    ring = W + 1
    L = np.full((V, ring, W + 1), NEG)
    R = np.full((V, 2, W + 1), NEG)
    I = np.full((V, 2, W + 1), NEG)
    best = np.full(n + 1, NEG)
    best_end = np.zeros(n + 1, dtype=np.int64)
    for a in range(n, -1, -1):
        sa = a % ring
        s1 = (a + 1) % ring
        cur = a % 2
        prv = 1 - cur
        dmax = min(W, n - a)
        for v in range(V - 1, -1, -1):
            t = ntype[v]
            c = child1[v]
            r = child2[v]
            m_prev = NEG
            rins = NEG
            for d in range(dmax + 1):
                if t == END:
                    m = 0.0 if d == 0 else NEG
                elif t == PAIR:
                    m = L[c, sa, d] - dpen
                    if d >= 2:
                        s = pair_e[v, x[a], x[a + d - 1]] + L[c, s1, d - 2]
                        if s > m:
                            m = s
                elif t == LEFT:
                    m = L[c, sa, d] - dpen
                    if d >= 1:
                        s = single_e[v, x[a]] + L[c, s1, d - 1]
                        if s > m:
                            m = s
                elif t == RIGHT:
                    m = L[c, sa, d] - dpen
                    if d >= 1:
                        s = single_e[v, x[a + d - 1]] + L[c, sa, d - 1]
                        if s > m:
                            m = s
                else:
                    m = NEG
                    row = sa  # ring row of start a + k
                    for k in range(d + 1):
                        s = L[c, sa, k] + L[r, row, d - k]
                        if s > m:
                            m = s
                        row += 1
                        if row == ring:
                            row = 0
                if d > 0:
                    q1 = m_prev - iopen
                    q2 = rins - iext
                    rins = q1 if q1 > q2 else q2
                bst = m if m > rins else rins
                R[v, cur, d] = bst
                if d > 0:
                    q1 = R[v, prv, d - 1] - iopen
                    q2 = I[v, prv, d - 1] - iext
                    li = q1 if q1 > q2 else q2
                else:
                    li = NEG
                I[v, cur, d] = li
                L[v, sa, d] = bst if bst > li else li
                m_prev = m
            for d in range(dmax + 1, W + 1):
                L[v, sa, d] = NEG
                R[v, cur, d] = NEG
                I[v, cur, d] = NEG
        for d in range(dmax + 1):
            if L[0, sa, d] > best[a]:
                best[a] = L[0, sa, d]
                best_end[a] = a + d
    return best, best_end
