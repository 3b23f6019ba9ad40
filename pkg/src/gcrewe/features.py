"""
Node features: discounted log-binned k-hop degree histograms (structural) and
one-hot / min-max encoded attributes.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .graph import Graph, khop_neighbors


def log_bin(deg: int) -> int:
    """Histogram bin ``ceil(log2(deg))`` of a positive degree."""
    deg = int(deg)
    if deg < 1:
        raise ValueError("degree-zero nodes have no log bin")
    return (deg - 1).bit_length()


def log_bins(degrees) -> np.ndarray:
    """Vectorised :func:`log_bin`; zero degrees map to bin 0 (they are never counted)."""
    d = np.asarray(degrees, dtype=np.int64)
    out = np.zeros(d.shape, dtype=np.int64)
    big = d > 1
    out[big] = np.frexp((d[big] - 1).astype(np.float64))[1]
    return out


def bin_count(max_degree: int) -> int:
    """Smallest bin count that holds ``log_bin`` of every degree up to ``max_degree``."""
    return 1 if max_degree <= 1 else log_bin(max_degree) + 1


def hop_degree_vector(graph: Graph, v: int, k: int, m: int) -> np.ndarray:
    """Log-degree histogram of the nodes exactly ``k`` hops from ``v``."""
    out = np.zeros(m)
    for u in khop_neighbors(graph, v, k):
        out[log_bin(graph.degree(u))] += 1
    return out


def structural_feature(graph: Graph, v: int, K: int = 2, gamma: float = 0.01, m: Optional[int] = None) -> np.ndarray:
    """Reference single-node version of :func:`structural_features`."""
    _check_hops(K, gamma)
    if m is None:
        m = bin_count(graph.max_degree)
    d = np.zeros(m)
    for k in range(1, K + 1):
        d += gamma ** (k - 1) * hop_degree_vector(graph, v, k, m)
    return d


def structural_features(graph: Graph, K: int = 2, gamma: float = 0.01, m: Optional[int] = None) -> np.ndarray:
    """Structural feature rows ``sum_k gamma^(k-1) d_v^k`` for every node."""
    _check_hops(K, gamma)
    if m is None:
        m = bin_count(graph.max_degree)
    bins = log_bins(graph.degrees)
    if graph.node_count and bins.max() >= m:
        raise ValueError(f"bin count {m} too small for max degree {graph.max_degree}")
    return _kernels.ring_features(graph.indptr, graph.indices, bins, K, gamma, m)


def _check_hops(K, gamma):
    if K < 1:
        raise ValueError("K must be >= 1")
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")


def attribute_features(*graphs: Graph, numeric: Iterable[int] = ()) -> np.ndarray:
    """Encode attributes of all ``graphs`` into one matrix, rows stacked in order.

    Categorical columns are one-hot over the categories seen in any of the
    graphs (sorted); columns listed in ``numeric`` are parsed as floats and
    min-max scaled to [0, 1] jointly.
    """
    if not graphs or any(g.attributes is None for g in graphs):
        raise ValueError("every graph needs attributes")
    arity = {g.attribute_arity for g in graphs}
    if len(arity) != 1:
        raise ValueError("graphs disagree on attribute arity")
    F = arity.pop()
    numeric = set(numeric)
    rows = [row for g in graphs for row in g.attributes]
    blocks = []
    for f in range(F):
        col = [row[f] for row in rows]
        if f in numeric:
            x = np.asarray(col, dtype=np.float64)
            lo, hi = x.min(), x.max()
            blocks.append(((x - lo) / (hi - lo) if hi > lo else np.zeros_like(x))[:, None])
        else:
            cats = sorted(set(col))
            pos = {c: i for i, c in enumerate(cats)}
            block = np.zeros((len(col), len(cats)))
            block[np.arange(len(col)), [pos[c] for c in col]] = 1.0
            blocks.append(block)
    if not blocks:
        return np.zeros((len(rows), 0))
    return np.hstack(blocks)


@dataclass
class FeatureMatrix:
    """Feature rows for G1's nodes followed by G2's nodes."""

    structural: np.ndarray
    attribute: Optional[np.ndarray]
    n1: int
    n2: int

    @property
    def m(self) -> int:
        return self.structural.shape[1]

    def split(self, mat):
        return mat[: self.n1], mat[self.n1:]


def extract_features(g1: Graph, g2: Graph, K: int = 2, gamma: float = 0.01,
                     use_attributes: bool = True, numeric_attributes: Iterable[int] = ()) -> FeatureMatrix:
    """Joint feature extraction; the bin count comes from the max degree over both graphs."""
    m = bin_count(max(g1.max_degree, g2.max_degree))
    X = np.vstack([structural_features(g1, K, gamma, m), structural_features(g2, K, gamma, m)])
    Y = None
    if use_attributes and g1.attributes is not None and g2.attributes is not None:
        Y = attribute_features(g1, g2, numeric=numeric_attributes)
    return FeatureMatrix(X, Y, g1.node_count, g2.node_count)


def write_features_csv(fm: FeatureMatrix, g1: Graph, g2: Graph, path) -> None:
    """One row per node: graph tag, label, structural columns, attribute columns."""
    ny = 0 if fm.attribute is None else fm.attribute.shape[1]
    header = ["graph", "label"] + [f"x{i}" for i in range(fm.m)] + [f"y{i}" for i in range(ny)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r, (tag, lab) in enumerate([(1, l) for l in g1.labels] + [(2, l) for l in g2.labels]):
            row = [tag, lab] + [repr(float(x)) for x in fm.structural[r]]
            if ny:
                row += [repr(float(y)) for y in fm.attribute[r]]
            w.writerow(row)
