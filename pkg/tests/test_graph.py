import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gcrewe.graph import (Graph, GraphFormatError, bfs_ball, khop_neighbors, load_attributes,
                          load_edge_list, write_edge_list)

from conftest import make_graph


def write(tmp_path, name, lines):
    p = tmp_path / name
    p.write_text("\n".join(lines) + ("\n" if lines else ""))
    return p


def test_load_path(tmp_path):
    g = load_edge_list(write(tmp_path, "e.txt", ["a b", "b c"]))
    assert g.node_count == 3 and g.edge_count == 2
    assert g.degree(g.index_of("b")) == 2
    assert g.labels == ("a", "b", "c")


def test_load_dedupes_and_drops_self_loops(tmp_path):
    g = load_edge_list(write(tmp_path, "e.txt", ["a b", "b a", "a a"]))
    assert (g.node_count, g.edge_count) == (2, 1)


def test_load_empty(tmp_path):
    g = load_edge_list(write(tmp_path, "e.txt", []))
    assert (g.node_count, g.edge_count) == (0, 0)


def test_load_comments_and_extra_tokens(tmp_path):
    g = load_edge_list(write(tmp_path, "e.txt", ["# header", "% other", "", "x y 0.5 extra", "y z"]))
    assert g.edge_set() == {(0, 1), (1, 2)}


def test_load_malformed_line_reports_line_number(tmp_path):
    p = write(tmp_path, "e.txt", ["a b", "c"])
    with pytest.raises(GraphFormatError, match=":2:"):
        load_edge_list(p)


def test_load_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_edge_list(tmp_path / "nope.txt")


def test_attributes(tmp_path, path3):
    g = load_attributes(write(tmp_path, "a.txt", ["a x", "b x", "c y"]), path3)
    assert g.attribute_arity == 1
    assert dict(zip(g.labels, g.attributes)) == {"a": ("x",), "b": ("x",), "c": ("y",)}


def test_attributes_arity_error(tmp_path, path3):
    with pytest.raises(GraphFormatError, match="expected 1"):
        load_attributes(write(tmp_path, "a.txt", ["a x", "b x y", "c y"]), path3)


def test_attributes_missing_node(tmp_path, path3):
    with pytest.raises(GraphFormatError, match="c"):
        load_attributes(write(tmp_path, "a.txt", ["a x", "b x"]), path3)


def test_attributes_unknown_label(tmp_path, path3):
    with pytest.raises(GraphFormatError, match="unknown"):
        load_attributes(write(tmp_path, "a.txt", ["a x", "b x", "c x", "zz x"]), path3)


def test_khop_path(path3):
    assert khop_neighbors(path3, 0, 2) == {2}
    assert khop_neighbors(path3, 0, 3) == set()


def test_khop_isolated():
    g = Graph.from_edges(3, [(0, 1)])
    assert khop_neighbors(g, 2, 1) == set()


def test_khop_five_cycle():
    g = Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    oracle = nx.single_source_shortest_path_length(nx.cycle_graph(5), 0)
    expected = {v for v, d in oracle.items() if d == 2}
    assert khop_neighbors(g, 0, 2) == expected and len(expected) == 2


def test_khop_invalid_node(path3):
    with pytest.raises(IndexError):
        khop_neighbors(path3, 7, 1)


edge_lists = st.lists(st.tuples(st.integers(0, 14), st.integers(0, 14)), max_size=40)


@settings(max_examples=60, deadline=None)
@given(edge_lists)
def test_graph_invariants(edges):
    g = Graph.from_edges(15, edges)
    assert g.degrees.sum() == 2 * g.edge_count
    for v in range(15):
        nb = g.neighbors(v)
        assert v not in nb
        assert list(nb) == sorted(set(nb.tolist()))
        for u in nb:
            assert v in g.neighbors(u)


@settings(max_examples=40, deadline=None)
@given(edge_lists, st.integers(0, 14), st.integers(1, 4))
def test_khop_rings_partition_ball(edges, v, K):
    g = Graph.from_edges(15, edges)
    rings = [khop_neighbors(g, v, k) for k in range(1, K + 1)]
    union = set().union(*rings)
    assert sum(map(len, rings)) == len(union)
    assert union == bfs_ball(g, v, K) - {v}
    nxg = nx.Graph(list(map(tuple, g.edges())))
    nxg.add_nodes_from(range(15))
    dist = nx.single_source_shortest_path_length(nxg, v, cutoff=K)
    for k, ring in enumerate(rings, start=1):
        assert ring == {u for u, d in dist.items() if d == k}


@settings(max_examples=30, deadline=None)
@given(edge_lists)
def test_roundtrip_is_idempotent(tmp_path_factory, edges):
    # edge lists cannot carry isolated nodes, so start from a loaded graph
    path = tmp_path_factory.mktemp("rt") / "g.txt"
    path.write_text("".join(f"n{a} n{b}\n" for a, b in edges))
    g = load_edge_list(path)

    def labelled(graph):
        return set(graph.labels), {frozenset((graph.labels[u], graph.labels[v])) for u, v in graph.edges()}

    for _ in range(2):
        write_edge_list(g, path)
        h = load_edge_list(path)
        assert labelled(h) == labelled(g)
        g = h
