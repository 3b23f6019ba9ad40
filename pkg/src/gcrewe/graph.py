"""
Immutable undirected graph with dense indices, plus edge-list and attribute I/O.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

COMMENT_PREFIXES = ("#", "%")


class GraphFormatError(ValueError):
    """Malformed edge-list or attribute file."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph stored as CSR with sorted neighbor lists.

    ``labels[i]`` is the external id of node ``i``. ``attributes`` is either
    None or one tuple of ``F`` categorical strings per node.
    """

    labels: tuple
    indptr: np.ndarray
    indices: np.ndarray
    attributes: Optional[tuple] = None
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._index is None:
            object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})
        if len(self._index) != len(self.labels):
            raise ValueError("node labels must be unique")
        if self.attributes is not None:
            if len(self.attributes) != len(self.labels):
                raise ValueError("one attribute row per node required")
            arity = {len(row) for row in self.attributes}
            if len(arity) > 1:
                raise ValueError("attribute arity differs between nodes")
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    @classmethod
    def from_edges(cls, n: int, edges, labels: Optional[Sequence] = None, attributes=None) -> "Graph":
        """Build from index pairs. Self-loops and duplicates are dropped."""
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        e = e.reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint out of range")
        e = e[e[:, 0] != e[:, 1]]
        both = np.concatenate([e, e[:, ::-1]]) if e.size else e
        if both.size:
            both = np.unique(both, axis=0)  # lexicographic: rows by source, neighbors sorted
        src = both[:, 0] if both.size else np.empty(0, dtype=np.int64)
        dst = both[:, 1] if both.size else np.empty(0, dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        if labels is None:
            labels = [str(i) for i in range(n)]
        if attributes is not None:
            attributes = tuple(tuple(str(a) for a in row) for row in attributes)
        return cls(tuple(labels), indptr, dst.astype(np.int64), attributes)

    @property
    def node_count(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.node_count else 0

    @property
    def attribute_arity(self) -> int:
        return len(self.attributes[0]) if self.attributes else 0

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        self._check(v)
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edges(self) -> np.ndarray:
        """Edge array of shape (|E|, 2) with ``u < v`` per row."""
        src = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees)
        keep = src < self.indices
        return np.stack([src[keep], self.indices[keep]], axis=1)

    def edge_set(self) -> set:
        return {(int(u), int(v)) for u, v in self.edges()}

    def index_of(self, label) -> int:
        return self._index[label]

    def with_attributes(self, attributes) -> "Graph":
        attrs = tuple(tuple(str(a) for a in row) for row in attributes)
        return Graph(self.labels, self.indptr.copy(), self.indices.copy(), attrs, self._index)

    def _check(self, v: int) -> None:
        if not 0 <= v < self.node_count:
            raise IndexError(f"node index {v} out of range [0, {self.node_count})")

    def __repr__(self):
        return f"Graph(nodes={self.node_count}, edges={self.edge_count}, F={self.attribute_arity})"


def _data_lines(path):
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith(COMMENT_PREFIXES):
                continue
            yield lineno, line.split()


def load_edge_list(path) -> Graph:
    """Read a whitespace-separated edge list.

    Labels are indexed in order of first appearance; tokens after the first two
    on a line are ignored. Self-loop lines are skipped entirely, so a label seen
    only in a self-loop does not become a node.
    """
    index: dict = {}
    pairs = []
    for lineno, tokens in _data_lines(path):
        if len(tokens) < 2:
            raise GraphFormatError(f"{path}:{lineno}: expected two node labels, got {len(tokens)} token(s)")
        a, b = tokens[0], tokens[1]
        if a == b:
            continue
        ia = index.setdefault(a, len(index))
        ib = index.setdefault(b, len(index))
        pairs.append((ia, ib))
    return Graph.from_edges(len(index), pairs, labels=list(index))


def load_attributes(path, graph: Graph) -> Graph:
    """Attach categorical attributes read from ``label v1 .. vF`` lines."""
    rows: dict = {}
    arity = None
    for lineno, tokens in _data_lines(path):
        label, values = tokens[0], tokens[1:]
        if arity is None:
            arity = len(values)
            if arity == 0:
                raise GraphFormatError(f"{path}:{lineno}: no attribute values after label {label!r}")
        elif len(values) != arity:
            raise GraphFormatError(
                f"{path}:{lineno}: expected {arity} attribute value(s), got {len(values)}"
            )
        if label not in graph._index:
            raise GraphFormatError(f"{path}:{lineno}: unknown node label {label!r}")
        if label in rows:
            raise GraphFormatError(f"{path}:{lineno}: duplicate attribute row for {label!r}")
        rows[label] = tuple(values)
    missing = [lab for lab in graph.labels if lab not in rows]
    if missing:
        shown = ", ".join(missing[:10]) + (" ..." if len(missing) > 10 else "")
        raise GraphFormatError(f"{path}: no attributes for node(s): {shown}")
    return graph.with_attributes([rows[lab] for lab in graph.labels])


def write_edge_list(graph: Graph, path) -> None:
    with open(path, "w") as fh:
        for u, v in graph.edges():
            fh.write(f"{graph.labels[u]} {graph.labels[v]}\n")


def write_attributes(graph: Graph, path) -> None:
    if graph.attributes is None:
        raise ValueError("graph has no attributes")
    with open(path, "w") as fh:
        for lab, row in zip(graph.labels, graph.attributes):
            fh.write(lab + " " + " ".join(row) + "\n")


def khop_neighbors(graph: Graph, v: int, k: int) -> set:
    """Nodes at shortest-path distance exactly ``k`` from ``v``."""
    graph._check(v)
    if k < 1:
        raise ValueError("k must be >= 1")
    seen = {v}
    frontier = [v]
    for _ in range(k):
        nxt = []
        for u in frontier:
            for w in graph.neighbors(u):
                w = int(w)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
        if not frontier:
            break
    return set(frontier)


def bfs_ball(graph: Graph, v: int, radius: int) -> set:
    """Nodes within ``radius`` hops of ``v``, ``v`` included."""
    ball = {v}
    for k in range(1, radius + 1):
        ball |= khop_neighbors(graph, v, k)
    return ball
