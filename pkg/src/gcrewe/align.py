"""
Similarity scoring and node alignment between two compressed graphs.

Uncompressed nodes are matched against uncompressed nodes, supernodes against
supernodes, and the sub-nodes of each supernode against the pooled sub-nodes
of its best-matching supernodes on the other side.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from . import _kernels
from .compress import CompressedGraph
from .embed import supernode_embedding

STAGES = ("none", "uncompressed", "sub-node")
MODES = ("exhaustive", "kdtree")


def similarity(v_emb, u_emb) -> float:
    """``exp(-|v - u|^2)``."""
    v = np.asarray(v_emb, dtype=np.float64)
    u = np.asarray(u_emb, dtype=np.float64)
    if v.shape != u.shape:
        raise ValueError(f"dimension mismatch: {v.shape} vs {u.shape}")
    d = v - u
    return float(np.exp(-np.dot(d, d)))


def similarity_attributed(v_emb, u_emb, v_attr, u_attr, gamma1: float = 1.0, gamma2: float = 1.0) -> float:
    """``exp(-gamma1 |dv|^2 - gamma2 |da|^2)`` over embedding and attribute rows."""
    v, u = np.asarray(v_emb, dtype=np.float64), np.asarray(u_emb, dtype=np.float64)
    a, b = np.asarray(v_attr, dtype=np.float64), np.asarray(u_attr, dtype=np.float64)
    if v.shape != u.shape or a.shape != b.shape:
        raise ValueError("dimension mismatch")
    de, da = v - u, a - b
    return float(np.exp(-gamma1 * np.dot(de, de) - gamma2 * np.dot(da, da)))


def _kdtree_topk(src_e, dst_e, k, src_y, dst_y, g1, g2):
    if src_y is not None:
        src = np.hstack([np.sqrt(g1) * src_e, np.sqrt(g2) * src_y])
        dst = np.hstack([np.sqrt(g1) * dst_e, np.sqrt(g2) * dst_y])
    else:
        src, dst = src_e, dst_e
    _, idx = cKDTree(dst).query(src, k=k)
    idx = np.asarray(idx, dtype=np.int64).reshape(len(src), k)
    # exact distances for the returned candidates, then (distance, index) order
    diff = src_e[:, None, :] - dst_e[idx]
    d = np.einsum("ijk,ijk->ij", diff, diff)
    if src_y is not None:
        diff = src_y[:, None, :] - dst_y[idx]
        d = g1 * d + g2 * np.einsum("ijk,ijk->ij", diff, diff)
    order = np.lexsort((idx, d), axis=1)
    return np.take_along_axis(idx, order, axis=1), np.take_along_axis(d, order, axis=1)


def align_sets(src_e, dst_e, alpha: int = 1, mode: str = "exhaustive", src_y=None, dst_y=None,
               gamma1: float = 1.0, gamma2: float = 1.0) -> tuple:
    """Top-``alpha`` dst rows for every src row, by descending similarity.

    Attribute rows switch the score to the attributed form. ``alpha`` is
    truncated to the number of dst rows. Returns ``(indices, scores)`` with
    indices local to ``dst_e``.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    src_e = np.asarray(src_e, dtype=np.float64)
    dst_e = np.asarray(dst_e, dtype=np.float64)
    if src_e.shape[0] == 0 or dst_e.shape[0] == 0:
        raise ValueError("both node sets must be non-empty")
    if src_e.shape[1] != dst_e.shape[1]:
        raise ValueError("embedding dimension mismatch")
    attributed = src_y is not None and dst_y is not None
    if attributed:
        src_y = np.asarray(src_y, dtype=np.float64)
        dst_y = np.asarray(dst_y, dtype=np.float64)
    k = min(alpha, dst_e.shape[0])
    if mode == "kdtree":
        idx, d = _kdtree_topk(src_e, dst_e, k, src_y if attributed else None,
                              dst_y if attributed else None, gamma1, gamma2)
    else:
        idx, d = _kernels.topk_sqdist(src_e, dst_e, k, src_y if attributed else None,
                                      dst_y if attributed else None, gamma1, gamma2)
    return idx, np.exp(-d)


@dataclass
class AlignmentResult:
    """Ranked G2 candidates for every G1 node.

    ``candidates[v]`` holds G2 indices (``-1`` pads short lists) and
    ``scores[v]`` the matching similarities (0 on padding). ``stage[v]`` is an
    index into :data:`STAGES`.
    """

    candidates: np.ndarray
    scores: np.ndarray
    stage: np.ndarray
    supernode_matches: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)

    @property
    def alpha(self) -> int:
        return self.candidates.shape[1]

    def top1(self) -> np.ndarray:
        return self.candidates[:, 0]


def _empty_result(n1, alpha):
    return AlignmentResult(np.full((n1, alpha), -1, dtype=np.int64), np.zeros((n1, alpha)),
                           np.zeros(n1, dtype=np.int8))


def _place(res, rows, dst_ids, idx, sc, stage):
    k = idx.shape[1]
    res.candidates[rows, :k] = np.asarray(dst_ids)[idx]
    res.scores[rows, :k] = sc
    res.stage[rows] = STAGES.index(stage)


def align_compressed(cg1: CompressedGraph, cg2: CompressedGraph, z1: np.ndarray, z2: np.ndarray,
                     y1: Optional[np.ndarray] = None, y2: Optional[np.ndarray] = None,
                     gamma1: float = 1.0, gamma2: float = 1.0, alpha: int = 10, beta: int = 1,
                     mode: str = "kdtree") -> AlignmentResult:
    """Align every original G1 node to ranked G2 candidates.

    ``z1``/``z2`` are original-node embeddings; supernode rows are averaged
    from them here. Sub-node groups are small, so they are always scored
    exhaustively.
    """
    res = _empty_result(cg1.n, alpha)
    attributed = y1 is not None and y2 is not None
    ya = (lambda rows: y1[rows]) if attributed else (lambda rows: None)
    yb = (lambda rows: y2[rows]) if attributed else (lambda rows: None)
    all2 = np.arange(cg2.n)

    t0 = time.perf_counter()
    C1, C2 = np.asarray(cg1.uncompressed(), dtype=np.int64), np.asarray(cg2.uncompressed(), dtype=np.int64)
    if len(C1):
        dst = C2
        if not len(C2):
            dst = all2
            res.notes.append("uncompressed: G2 has no uncompressed nodes; matched against all G2 nodes")
        idx, sc = align_sets(z1[C1], z2[dst], alpha, mode, ya(C1), yb(dst), gamma1, gamma2)
        _place(res, C1, dst, idx, sc, "uncompressed")
    else:
        res.notes.append("uncompressed: skipped (G1 fully compressed)")
    t1 = time.perf_counter()

    U1, U2 = cg1.supernodes(), cg2.supernodes()
    if U1 and U2:
        S1 = np.vstack([supernode_embedding(cg1.table[s], z1) for s in U1])
        S2 = np.vstack([supernode_embedding(cg2.table[s], z2) for s in U2])
        sidx, _ = align_sets(S1, S2, beta, mode)
        t2 = time.perf_counter()
        for i, s in enumerate(U1):
            partners = [U2[j] for j in sidx[i]]
            res.supernode_matches[s] = partners
            subs = np.asarray(cg1.table[s], dtype=np.int64)
            pool = np.asarray(sorted(u for p in partners for u in cg2.table[p]), dtype=np.int64)
            idx, sc = align_sets(z1[subs], z2[pool], alpha, "exhaustive", ya(subs), yb(pool), gamma1, gamma2)
            _place(res, subs, pool, idx, sc, "sub-node")
    else:
        t2 = time.perf_counter()
        if U1:
            res.notes.append("supernode: skipped (G2 has no supernodes); G1 sub-nodes matched against all G2 nodes")
            subs = np.asarray(sorted(u for s in U1 for u in cg1.table[s]), dtype=np.int64)
            idx, sc = align_sets(z1[subs], z2, alpha, mode, ya(subs), yb(all2), gamma1, gamma2)
            _place(res, subs, all2, idx, sc, "sub-node")
        else:
            res.notes.append("supernode: skipped (no supernodes)")
    t3 = time.perf_counter()
    res.timings = {"align_uncompressed": t1 - t0, "align_supernode": t2 - t1, "align_subnode": t3 - t2}
    return res


def score(result: AlignmentResult, truth, alphas: Sequence[int] = (1, 5, 10)) -> dict:
    """Accuracy and top-alpha accuracy over the ground-truth domain."""
    dom = truth.domain
    if len(dom) == 0:
        raise ValueError("ground truth is empty")
    want = truth.target[dom]
    hits = result.candidates[dom] == want[:, None]
    out = {"accuracy": float(hits[:, :1].any(axis=1).mean()) if hits.shape[1] else 0.0,
           "evaluated": int(len(dom))}
    for a in alphas:
        out[f"top_{a}"] = float(hits[:, :a].any(axis=1).mean()) if hits.shape[1] else 0.0
    return out
