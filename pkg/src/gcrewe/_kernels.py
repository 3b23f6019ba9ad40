"""
Hot loops of the pipeline, each with a compiled path and a numpy/scipy path.

The public wrappers at the bottom pick the path from ``_accel.use_numba()`` at
call time, so both stay reachable inside one process.
"""
import numpy as np
import scipy.sparse as sp

from . import _accel
from ._accel import njit


# ----------------------------------------------------------------------------
# k-hop ring degree histograms
# ----------------------------------------------------------------------------

@njit
def _ring_features_jit(indptr, indices, bins, K, gamma, m):
    n = indptr.shape[0] - 1
    X = np.zeros((n, m), dtype=np.float64)
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    counts = np.zeros(m, dtype=np.int64)
    for v in range(n):
        dist[v] = 0
        queue[0] = v
        head = 0
        tail = 1
        weight = 1.0
        for k in range(1, K + 1):
            level_end = tail
            if head == level_end:
                break
            counts[:] = 0
            while head < level_end:
                u = queue[head]
                head += 1
                for jj in range(indptr[u], indptr[u + 1]):
                    w = indices[jj]
                    if dist[w] < 0:
                        dist[w] = k
                        queue[tail] = w
                        tail += 1
                        counts[bins[w]] += 1
            for b in range(m):
                X[v, b] += weight * counts[b]
            weight *= gamma
        for t in range(tail):
            dist[queue[t]] = -1
    return X


def _ring_features_np(indptr, indices, bins, K, gamma, m):
    n = indptr.shape[0] - 1
    X = np.zeros((n, m), dtype=np.float64)
    if n == 0:
        return X
    A = sp.csr_matrix((np.ones(len(indices), dtype=np.int64), indices, indptr), shape=(n, n))
    onehot = sp.csr_matrix(
        (np.ones(n, dtype=np.int64), (np.arange(n), bins)), shape=(n, m)
    )
    reached = sp.identity(n, dtype=np.int64, format="csr")
    frontier = reached
    weight = 1.0
    for _ in range(K):
        nxt = (frontier @ A).astype(bool).astype(np.int64)
        ring = (nxt - nxt.multiply(reached)).tocsr()
        ring.eliminate_zeros()
        if ring.nnz == 0:
            break
        X += weight * (ring @ onehot).toarray()
        reached = (reached + ring).tocsr()
        frontier = ring
        weight *= gamma
    return X


# ----------------------------------------------------------------------------
# CSR sparse @ dense
# ----------------------------------------------------------------------------

@njit
def _csr_spmm_jit(indptr, indices, data, H):
    n = indptr.shape[0] - 1
    c = H.shape[1]
    out = np.zeros((n, c), dtype=np.float64)
    for i in range(n):
        for jj in range(indptr[i], indptr[i + 1]):
            j = indices[jj]
            a = data[jj]
            for col in range(c):
                out[i, col] += a * H[j, col]
    return out


def _csr_spmm_np(indptr, indices, data, H):
    n = indptr.shape[0] - 1
    A = sp.csr_matrix((data, indices, indptr), shape=(n, H.shape[0]))
    return np.asarray(A @ H, dtype=np.float64)


# ----------------------------------------------------------------------------
# exhaustive top-k by (weighted) squared Euclidean distance
# ----------------------------------------------------------------------------

@njit
def _topk_jit(src_e, dst_e, src_y, dst_y, g1, g2, k):
    ns = src_e.shape[0]
    nd = dst_e.shape[0]
    pe = src_e.shape[1]
    py = src_y.shape[1]
    out_j = np.full((ns, k), -1, dtype=np.int64)
    out_d = np.full((ns, k), np.inf, dtype=np.float64)
    for i in range(ns):
        bd = out_d[i]
        bj = out_j[i]
        for j in range(nd):
            d1 = 0.0
            for c in range(pe):
                t = src_e[i, c] - dst_e[j, c]
                d1 += t * t
            if py > 0:
                d2 = 0.0
                for c in range(py):
                    t = src_y[i, c] - dst_y[j, c]
                    d2 += t * t
                d = g1 * d1 + g2 * d2
            else:
                d = d1
            if d < bd[k - 1]:
                pos = k - 1
                while pos > 0 and bd[pos - 1] > d:
                    bd[pos] = bd[pos - 1]
                    bj[pos] = bj[pos - 1]
                    pos -= 1
                bd[pos] = d
                bj[pos] = j
    return out_j, out_d


def _topk_np(src_e, dst_e, src_y, dst_y, g1, g2, k):
    ns, nd = src_e.shape[0], dst_e.shape[0]
    width = max(1, src_e.shape[1] + src_y.shape[1])
    chunk = max(1, (1 << 22) // max(1, nd * width))
    out_j = np.empty((ns, k), dtype=np.int64)
    out_d = np.empty((ns, k), dtype=np.float64)
    for s in range(0, ns, chunk):
        e = min(ns, s + chunk)
        diff = src_e[s:e, None, :] - dst_e[None, :, :]
        d = np.einsum("ijk,ijk->ij", diff, diff)
        if src_y.shape[1] > 0:
            diff = src_y[s:e, None, :] - dst_y[None, :, :]
            d = g1 * d + g2 * np.einsum("ijk,ijk->ij", diff, diff)
        order = np.argsort(d, axis=1, kind="stable")[:, :k]
        out_j[s:e] = order
        out_d[s:e] = np.take_along_axis(d, order, axis=1)
    return out_j, out_d


# ----------------------------------------------------------------------------
# dispatch
# ----------------------------------------------------------------------------

def ring_features(indptr, indices, bins, K, gamma, m):
    """Discounted per-hop log-degree histograms for every node (n x m)."""
    args = (np.asarray(indptr, dtype=np.int64), np.asarray(indices, dtype=np.int64),
            np.asarray(bins, dtype=np.int64), int(K), float(gamma), int(m))
    if _accel.use_numba():
        return _ring_features_jit(*args)
    return _ring_features_np(*args)


def csr_spmm(indptr, indices, data, H):
    H = np.ascontiguousarray(H, dtype=np.float64)
    args = (np.asarray(indptr, dtype=np.int64), np.asarray(indices, dtype=np.int64),
            np.asarray(data, dtype=np.float64), H)
    if _accel.use_numba():
        return _csr_spmm_jit(*args)
    return _csr_spmm_np(*args)


def topk_sqdist(src_e, dst_e, k, src_y=None, dst_y=None, g1=1.0, g2=1.0):
    """Indices and distances of the ``k`` closest dst rows for every src row.

    With attribute rows the distance is ``g1*|de|^2 + g2*|dy|^2``; without, the
    plain squared distance. Ties keep the lower dst index first.
    """
    src_e = np.ascontiguousarray(src_e, dtype=np.float64)
    dst_e = np.ascontiguousarray(dst_e, dtype=np.float64)
    if src_y is None or dst_y is None:
        src_y = np.zeros((src_e.shape[0], 0))
        dst_y = np.zeros((dst_e.shape[0], 0))
    src_y = np.ascontiguousarray(src_y, dtype=np.float64)
    dst_y = np.ascontiguousarray(dst_y, dtype=np.float64)
    k = int(min(k, dst_e.shape[0]))
    if k < 1 or src_e.shape[0] == 0:
        return np.empty((src_e.shape[0], 0), dtype=np.int64), np.empty((src_e.shape[0], 0))
    if _accel.use_numba():
        return _topk_jit(src_e, dst_e, src_y, dst_y, float(g1), float(g2), k)
    return _topk_np(src_e, dst_e, src_y, dst_y, float(g1), float(g2), k)
