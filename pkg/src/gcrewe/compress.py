"""
Guiding-list construction and MERGE (minimum-degree neighbor) compression.

Supernodes get ids ``n, n+1, ...`` in creation order, where ``n`` is the node
count of the source graph, so ids below ``n`` are always original nodes.
"""
from __future__ import annotations

import logging

import numpy as np

from .graph import Graph

log = logging.getLogger(__name__)


class CompressedGraph:
    """Mutable coarsened view of a :class:`Graph`.

    ``adj`` maps every current node to its neighbor set. ``table`` maps each
    live supernode to the sorted tuple of original nodes merged into it.
    """

    def __init__(self, origin: Graph):
        self.origin = origin
        self.n = origin.node_count
        self.adj = {v: set(origin.neighbors(v).tolist()) for v in range(self.n)}
        self.table: dict = {}
        self.next_id = self.n
        self.under_compressed = False
        self.steps = 0

    def __contains__(self, v):
        return v in self.adj

    @property
    def node_count(self) -> int:
        return len(self.adj)

    @property
    def ratio(self) -> float:
        """Achieved compression ``1 - |V'| / |V|``."""
        return 1.0 - self.node_count / self.n if self.n else 0.0

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def is_supernode(self, v: int) -> bool:
        return v >= self.n

    def uncompressed(self) -> list:
        return sorted(v for v in self.adj if v < self.n)

    def supernodes(self) -> list:
        return sorted(v for v in self.adj if v >= self.n)

    def sub_nodes(self, v: int) -> tuple:
        return self.table[v] if v >= self.n else (v,)

    def image(self) -> np.ndarray:
        """For every original node, the current node that holds it."""
        img = np.arange(self.n, dtype=np.int64)
        for s, subs in self.table.items():
            img[list(subs)] = s
        return img

    def edges(self) -> list:
        return sorted((u, w) for u, nb in self.adj.items() for w in nb if u < w)

    def label(self, v: int) -> str:
        return self.origin.labels[v] if v < self.n else f"S{v - self.n}"


def merge_step(cg: CompressedGraph, v_start: int):
    """Merge the minimum-degree neighbors of ``v_start`` into one new supernode.

    Degrees are read from the current compressed graph. The new supernode is
    linked to every neighbor of the merged set that is not itself merged,
    ``v_start`` included. Returns the supernode id, or None when ``v_start`` is
    gone or isolated.
    """
    adj = cg.adj
    nbrs = adj.get(v_start)
    if not nbrs:
        return None
    dmin = min(len(adj[u]) for u in nbrs)
    merged = sorted(u for u in nbrs if len(adj[u]) == dmin)
    mset = set(merged)
    boundary = set()
    subs = []
    for u in merged:
        boundary |= adj[u]
        if u in cg.table:
            subs.extend(cg.table.pop(u))
        else:
            subs.append(u)
    boundary -= mset
    for u in merged:
        for w in adj[u]:
            if w not in mset:
                adj[w].discard(u)
        del adj[u]
    s = cg.next_id
    cg.next_id += 1
    adj[s] = boundary
    for w in boundary:
        adj[w].add(s)
    cg.table[s] = tuple(sorted(subs))
    cg.steps += 1
    return s


def merge(graph: Graph, guide, phi: float) -> CompressedGraph:
    """Compress ``graph`` until ``1 - |V'|/|V| >= phi``.

    Starting points are taken from ``guide`` in order; entries already merged
    are skipped. If the list runs out first, the supernodes created during that
    pass are used as starting points once more. Still short after that, the
    result is flagged ``under_compressed``.
    """
    if not 0.0 <= phi < 1.0:
        raise ValueError("phi must lie in [0, 1)")
    cg = CompressedGraph(graph)
    if phi == 0.0 or cg.n == 0:
        return cg
    created = []
    for v in guide:
        if cg.ratio >= phi:
            return cg
        s = merge_step(cg, int(v))
        if s is not None:
            created.append(s)
    for v in created:
        if cg.ratio >= phi:
            return cg
        merge_step(cg, v)
    if cg.ratio < phi:
        cg.under_compressed = True
        log.warning("compression stopped at %.4f < phi=%.4f: no usable starting points left", cg.ratio, phi)
    return cg


def _candidates(graph: Graph, z: np.ndarray, eta: int, decimals: int) -> list:
    keep = np.flatnonzero(graph.degrees >= eta)
    norms = np.linalg.norm(z[keep], axis=1)
    order = np.lexsort((keep, -norms))
    keep, norms = keep[order], norms[order]
    rounded = np.round(norms, decimals)
    vals, counts = np.unique(rounded, return_counts=True)
    clash = np.isin(rounded, vals[counts > 1])
    return keep[~clash].tolist()


def make_guiding_lists(g1: Graph, g2: Graph, z1: np.ndarray, z2: np.ndarray, eta: int = 15,
                       omega: float = 0.98, lam: int = 100, decimals: int = 9) -> tuple:
    """Paired compression starting points ``(Q1, Q2)``.

    Nodes below degree ``eta`` are dropped, the rest sorted by decreasing
    embedding norm, and nodes whose norm (rounded to ``decimals``) collides with
    another node of the same graph are removed. Then the head of the first
    list is paired with the first of the top ``lam`` entries of the second list
    whose similarity reaches ``omega``; heads without such a partner are dropped.
    """
    L1 = _candidates(g1, z1, eta, decimals)
    L2 = _candidates(g2, z2, eta, decimals)
    Q1, Q2 = [], []
    for v in L1:
        if not L2:
            break
        window = np.asarray(L2[:lam])
        diff = z2[window] - z1[v]
        sims = np.exp(-np.einsum("ij,ij->i", diff, diff))
        hits = np.flatnonzero(sims >= omega)
        if hits.size:
            Q1.append(v)
            Q2.append(L2.pop(int(hits[0])))
    return Q1, Q2


def write_supernode_table(cg: CompressedGraph, path) -> None:
    labels = cg.origin.labels
    with open(path, "w") as fh:
        for s in cg.supernodes():
            fh.write(f"{cg.label(s)}: " + " ".join(labels[u] for u in cg.table[s]) + "\n")
