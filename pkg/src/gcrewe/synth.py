"""
Alignment problems with known ground truth: random permutations, edge-removal
noise and attribute-replacement noise.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graph import Graph, GraphFormatError, _data_lines


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """Injective map from G1 indices to G2 indices; ``target[v] == -1`` when v has no counterpart."""

    target: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.target, dtype=np.int64)
        hit = t[t >= 0]
        if len(np.unique(hit)) != len(hit):
            raise ValueError("ground truth is not injective")
        object.__setattr__(self, "target", t)

    @classmethod
    def identity(cls, n: int) -> "GroundTruth":
        return cls(np.arange(n, dtype=np.int64))

    @property
    def domain(self) -> np.ndarray:
        return np.flatnonzero(self.target >= 0)

    def __len__(self):
        return int((self.target >= 0).sum())

    def __getitem__(self, v):
        return int(self.target[v])

    def pairs(self):
        d = self.domain
        return list(zip(d.tolist(), self.target[d].tolist()))


def _rng(seed):
    return np.random.default_rng(seed)


def preferential_attachment(n: int, m: int, seed: int = 0) -> Graph:
    """Barabasi-Albert style graph: each new node links to ``m`` distinct
    existing nodes picked with probability proportional to degree."""
    if n <= m or m < 1:
        raise ValueError("need n > m >= 1")
    rng = _rng(seed)
    edges = [(i, j) for i in range(m + 1) for j in range(i + 1, m + 1)]
    repeated = [v for e in edges for v in e]
    for v in range(m + 1, n):
        targets: set = set()
        while len(targets) < m:
            targets.add(repeated[rng.integers(len(repeated))])
        for t in sorted(targets):
            edges.append((t, v))
            repeated.extend((t, v))
    return Graph.from_edges(n, edges)


def random_attributes(graph: Graph, n_attrs: int, n_categories: int = 2, seed: int = 0) -> Graph:
    """Attach i.i.d. uniform categorical attributes labelled "0".."c-1"."""
    rng = _rng(seed)
    vals = rng.integers(n_categories, size=(graph.node_count, n_attrs))
    return graph.with_attributes([[str(x) for x in row] for row in vals])


def permute(graph: Graph, seed: int = 0, perm: Optional[np.ndarray] = None) -> tuple:
    """Relabel nodes by a random permutation (A2 = P A1 P^T).

    Node ``i`` of the input becomes node ``perm[i]`` of the output; output labels
    are the new indices as strings. Attributes travel with their nodes.
    """
    n = graph.node_count
    if perm is None:
        perm = _rng(seed).permutation(n)
    perm = np.asarray(perm, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(n)):
        raise ValueError("perm must be a permutation of range(n)")
    edges = perm[graph.edges()] if graph.edge_count else np.empty((0, 2), dtype=np.int64)
    attrs = None
    if graph.attributes is not None:
        inv = np.empty(n, dtype=np.int64)
        inv[perm] = np.arange(n)
        attrs = [graph.attributes[i] for i in inv]
    out = Graph.from_edges(n, edges, labels=[str(i) for i in range(n)], attributes=attrs)
    return out, GroundTruth(perm.copy())


def add_edge_noise(graph: Graph, truth: GroundTruth, p: float, seed: int = 0) -> tuple:
    """Remove each edge independently with probability ``p``.

    Nodes left with degree zero are discarded and the remaining indices are
    compacted (relative order kept); ``truth`` is remapped accordingly. Applying
    this repeatedly accumulates noise.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"noise probability must lie in [0, 1], got {p}")
    rng = _rng(seed)
    edges = graph.edges()
    keep = rng.random(len(edges)) >= p
    edges = edges[keep]
    n = graph.node_count
    alive = np.zeros(n, dtype=bool)
    alive[edges.ravel()] = True
    remap = np.full(n, -1, dtype=np.int64)
    remap[alive] = np.arange(int(alive.sum()))
    labels = [lab for lab, a in zip(graph.labels, alive) if a]
    attrs = None
    if graph.attributes is not None:
        attrs = [row for row, a in zip(graph.attributes, alive) if a]
    out = Graph.from_edges(len(labels), remap[edges], labels=labels, attributes=attrs)
    t = truth.target.copy()
    hit = t >= 0
    t[hit] = remap[t[hit]]
    return out, GroundTruth(t)


def add_attribute_noise(graph: Graph, p: float, categories: Optional[Sequence[Sequence[str]]] = None,
                        seed: int = 0) -> Graph:
    """Replace each attribute value, with probability ``p``, by a different
    category drawn uniformly from that attribute's category set.

    ``categories`` defaults to the values observed per attribute column.
    """
    if graph.attributes is None:
        raise ValueError("graph has no attributes")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"noise probability must lie in [0, 1], got {p}")
    F = graph.attribute_arity
    if categories is None:
        categories = [sorted({row[f] for row in graph.attributes}) for f in range(F)]
    categories = [sorted(str(c) for c in cats) for cats in categories]
    if len(categories) != F:
        raise ValueError(f"expected {F} category sets, got {len(categories)}")
    for f, cats in enumerate(categories):
        if len(cats) < 2:
            raise ValueError(f"attribute {f} has fewer than two categories; cannot replace values")
    rng = _rng(seed)
    flip = rng.random((graph.node_count, F)) < p
    pick = rng.random((graph.node_count, F))
    rows = []
    for i, row in enumerate(graph.attributes):
        new = list(row)
        for f in range(F):
            if flip[i, f]:
                others = [c for c in categories[f] if c != row[f]]
                new[f] = others[int(pick[i, f] * len(others))]
        rows.append(new)
    return graph.with_attributes(rows)


def write_truth(truth: GroundTruth, g1: Graph, g2: Graph, path) -> None:
    with open(path, "w") as fh:
        for a, b in truth.pairs():
            fh.write(f"{g1.labels[a]} {g2.labels[b]}\n")


def load_truth(path, g1: Graph, g2: Graph) -> GroundTruth:
    """Read ``label1 label2`` lines; pairs naming absent nodes are skipped."""
    t = np.full(g1.node_count, -1, dtype=np.int64)
    for lineno, tokens in _data_lines(path):
        if len(tokens) < 2:
            raise GraphFormatError(f"{path}:{lineno}: expected two labels")
        a, b = tokens[0], tokens[1]
        if a in g1._index and b in g2._index:
            t[g1.index_of(a)] = g2.index_of(b)
    return GroundTruth(t)
