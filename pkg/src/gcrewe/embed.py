"""
Untrained graph-convolution forward pass over the disjoint union of both
graphs, and supernode embeddings by averaging sub-node rows.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .graph import Graph

ACTIVATIONS = {
    "tanh": np.tanh,
    "relu": lambda x: np.maximum(x, 0.0),
}


def normalized_joint_adjacency(*graphs: Graph) -> sp.csr_matrix:
    """``D^-1/2 (A + I) D^-1/2`` for the block-diagonal join of ``graphs``.

    Rows of the first graph come first. ``D`` holds degrees after the
    self-loops are added, so every diagonal degree is at least one.
    """
    if not graphs or any(g.node_count == 0 for g in graphs):
        raise ValueError("graphs must be non-empty")
    blocks = [sp.csr_matrix((np.ones(len(g.indices)), g.indices, g.indptr),
                            shape=(g.node_count, g.node_count)) for g in graphs]
    A = sp.block_diag(blocks, format="csr") + sp.identity(sum(g.node_count for g in graphs), format="csr")
    A = sp.csr_matrix(A)
    A.sum_duplicates()
    A.sort_indices()
    dinv = 1.0 / np.sqrt(np.asarray(A.sum(axis=1)).ravel())
    rows = np.repeat(np.arange(A.shape[0]), np.diff(A.indptr))
    A.data = dinv[rows] * dinv[A.indices]
    return A


def glorot_init(d_in: int, d_out: int, seed=0) -> np.ndarray:
    """Uniform Glorot/Xavier matrix on ``[-sqrt(6/(d_in+d_out)), +sqrt(6/(d_in+d_out))]``."""
    if d_in < 1 or d_out < 1:
        raise ValueError("matrix dimensions must be positive")
    bound = np.sqrt(6.0 / (d_in + d_out))
    rng = np.random.default_rng(seed)
    return rng.uniform(-bound, bound, size=(d_in, d_out))


@dataclass
class GcnWeights:
    matrices: list
    seed: int

    @property
    def layers(self) -> int:
        return len(self.matrices)

    @classmethod
    def create(cls, m: int, hidden: int, p: int, layers: int = 2, seed: int = 0) -> "GcnWeights":
        """Input width ``m``; every hidden width is ``hidden``; output width ``p``."""
        if layers < 1:
            raise ValueError("need at least one layer")
        widths = [m] + [hidden] * (layers - 1) + [p]
        mats = [glorot_init(widths[l], widths[l + 1], seed=[seed, l]) for l in range(layers)]
        return cls(mats, seed)


def gcn_forward(A_hat, X: np.ndarray, weights: GcnWeights, activation: str = "tanh") -> np.ndarray:
    """Apply ``H <- act(A_hat @ H @ W)`` once per weight matrix, starting from ``X``."""
    act = ACTIVATIONS[activation]
    A_hat = sp.csr_matrix(A_hat)
    H = np.asarray(X, dtype=np.float64)
    if H.shape[0] != A_hat.shape[0]:
        raise ValueError(f"feature rows {H.shape[0]} != adjacency size {A_hat.shape[0]}")
    for W in weights.matrices:
        if H.shape[1] != W.shape[0]:
            raise ValueError(f"feature width {H.shape[1]} does not match weight rows {W.shape[0]}")
        H = act(_kernels.csr_spmm(A_hat.indptr, A_hat.indices, A_hat.data, H @ W))
    return H


@dataclass
class Embedding:
    """Joint embedding rows: G1's nodes then G2's nodes."""

    values: np.ndarray
    n1: int

    @property
    def p(self) -> int:
        return self.values.shape[1]

    @property
    def z1(self) -> np.ndarray:
        return self.values[: self.n1]

    @property
    def z2(self) -> np.ndarray:
        return self.values[self.n1:]


def default_dim(m: int) -> int:
    return 2 * m


def embed_graphs(g1: Graph, g2: Graph, X: np.ndarray, hidden: int = 16, dim: Optional[int] = None,
                 layers: int = 2, seed: int = 0, activation: str = "tanh") -> tuple:
    """Embed both graphs in one space; returns ``(Embedding, GcnWeights)``."""
    m = X.shape[1]
    p = default_dim(m) if dim is None else dim
    weights = GcnWeights.create(m, hidden, p, layers, seed)
    Z = gcn_forward(normalized_joint_adjacency(g1, g2), X, weights, activation)
    return Embedding(Z, g1.node_count), weights


def supernode_embedding(sub_nodes: Sequence[int], Z: np.ndarray) -> np.ndarray:
    """Mean of the embedding rows of ``sub_nodes``."""
    idx = np.asarray(list(sub_nodes), dtype=np.int64)
    if idx.size == 0:
        raise ValueError("a supernode needs at least one sub-node")
    return Z[idx].sum(axis=0) / idx.size


def write_embedding_csv(emb: Embedding, g1: Graph, g2: Graph, path) -> None:
    with open(path, "w") as fh:
        for tag, g, Z in ((1, g1, emb.z1), (2, g2, emb.z2)):
            for lab, row in zip(g.labels, Z):
                fh.write(f"{tag},{lab}," + ",".join(repr(float(x)) for x in row) + "\n")
