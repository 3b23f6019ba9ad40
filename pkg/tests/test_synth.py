import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gcrewe.graph import Graph
from gcrewe.synth import (GroundTruth, add_attribute_noise, add_edge_noise, load_truth, permute,
                          preferential_attachment, random_attributes, write_truth)

# 99% two-sided binomial intervals, scipy.stats.binom.ppf(0.005 / 0.995, 1000, p)
BINOM_1000_HALF = (459, 541)
BINOM_1000_03 = (263, 338)


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.node_count))
    h.add_edges_from(map(tuple, g.edges()))
    return h


def test_identity_permutation():
    g = preferential_attachment(40, 2, seed=1)
    h, truth = permute(g, perm=np.arange(40))
    assert h.edge_set() == g.edge_set()
    assert truth.target.tolist() == list(range(40))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_permutation_is_isomorphism(seed):
    g = preferential_attachment(60, 3, seed=seed)
    h, truth = permute(g, seed=seed)
    assert sorted(g.degrees) == sorted(h.degrees)
    mapped = {tuple(sorted((truth[u], truth[v]))) for u, v in g.edges()}
    assert mapped == h.edge_set()
    sizes = lambda x: sorted(len(c) for c in nx.connected_components(to_nx(x)))
    assert sizes(g) == sizes(h)


def test_seeds_give_different_mappings():
    g = preferential_attachment(100, 2, seed=0)
    _, t1 = permute(g, seed=1)
    _, t2 = permute(g, seed=2)
    assert not np.array_equal(t1.target, t2.target)
    _, t1b = permute(g, seed=1)
    assert np.array_equal(t1.target, t1b.target)


def test_permute_carries_attributes():
    g = random_attributes(preferential_attachment(30, 2), 2, seed=3)
    h, truth = permute(g, seed=4)
    for v in range(30):
        assert g.attributes[v] == h.attributes[truth[v]]


def test_edge_noise_zero():
    g = preferential_attachment(50, 2)
    h, truth = permute(g, seed=0)
    h2, truth2 = add_edge_noise(h, truth, 0.0, seed=1)
    assert h2.edge_set() == h.edge_set() and h2.labels == h.labels
    assert np.array_equal(truth2.target, truth.target)


def test_edge_noise_one():
    g = preferential_attachment(50, 2)
    h, truth = permute(g, seed=0)
    h2, truth2 = add_edge_noise(h, truth, 1.0, seed=1)
    assert (h2.node_count, h2.edge_count, len(truth2)) == (0, 0, 0)


def test_edge_noise_binomial_count():
    g = Graph.from_edges(1000, [(i, (i + 1) % 1000) for i in range(1000)])
    survived = add_edge_noise(g, GroundTruth.identity(1000), 0.5, seed=11)[0].edge_count
    lo, hi = BINOM_1000_HALF
    assert lo <= survived <= hi


def test_edge_noise_rejects_bad_p():
    g = preferential_attachment(10, 2)
    with pytest.raises(ValueError):
        add_edge_noise(g, GroundTruth.identity(10), 1.5)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.floats(0, 1), st.floats(0, 1))
def test_edge_noise_subset_and_truth_consistency(seed, p1, p2):
    g = preferential_attachment(40, 2, seed=seed % 7)
    h, truth = permute(g, seed=seed)
    h1, t1 = add_edge_noise(h, truth, p1, seed=seed)
    h2, t2 = add_edge_noise(h1, t1, p2, seed=seed + 1)
    # surviving edges, compared by label, are a subset of the permuted ones
    lab = lambda x: {frozenset((x.labels[u], x.labels[v])) for u, v in x.edges()}
    assert lab(h2) <= lab(h1) <= lab(h)
    assert (h2.degrees > 0).all()
    for v, u in t2.pairs():
        assert 0 <= u < h2.node_count
        assert h2.labels[u] == h.labels[truth[v]]
    assert len(t2) == h2.node_count


def test_edge_noise_deterministic():
    g = preferential_attachment(80, 3)
    h, truth = permute(g, seed=5)
    a = add_edge_noise(h, truth, 0.2, seed=9)
    b = add_edge_noise(h, truth, 0.2, seed=9)
    assert a[0].edge_set() == b[0].edge_set() and np.array_equal(a[1].target, b[1].target)


def test_attribute_noise_zero_and_full_flip():
    g = random_attributes(preferential_attachment(60, 2), 3, seed=1)
    assert add_attribute_noise(g, 0.0, seed=2).attributes == g.attributes
    flipped = add_attribute_noise(g, 1.0, [["0", "1"]] * 3, seed=2)
    for a, b in zip(g.attributes, flipped.attributes):
        assert all(x != y for x, y in zip(a, b))


def test_attribute_noise_binomial_count():
    g = random_attributes(Graph.from_edges(1000, [(i, i + 1) for i in range(999)]), 1, seed=0)
    noisy = add_attribute_noise(g, 0.3, [["0", "1"]], seed=5)
    flips = sum(a != b for a, b in zip(g.attributes, noisy.attributes))
    lo, hi = BINOM_1000_03
    assert lo <= flips <= hi


def test_attribute_noise_replacement_is_different_and_uniform():
    g = Graph.from_edges(3000, [(i, i + 1) for i in range(2999)]).with_attributes([["a"]] * 3000)
    noisy = add_attribute_noise(g, 1.0, [["a", "b", "c"]], seed=0)
    vals = [row[0] for row in noisy.attributes]
    assert "a" not in vals
    # each of the two alternatives ~ Binomial(3000, 1/2)
    assert 1400 < vals.count("b") < 1600


def test_attribute_noise_single_category_rejected():
    g = preferential_attachment(10, 2).with_attributes([["x"]] * 10)
    with pytest.raises(ValueError, match="two categories"):
        add_attribute_noise(g, 0.5, [["x"]])


def test_truth_file_roundtrip(tmp_path):
    g = preferential_attachment(30, 2)
    h, truth = permute(g, seed=1)
    h, truth = add_edge_noise(h, truth, 0.3, seed=2)
    path = tmp_path / "truth.txt"
    write_truth(truth, g, h, path)
    assert np.array_equal(load_truth(path, g, h).target, truth.target)


def test_ground_truth_must_be_injective():
    with pytest.raises(ValueError):
        GroundTruth(np.array([0, 0, 1]))


def test_preferential_attachment_shape():
    g = preferential_attachment(200, 3, seed=0)
    assert g.node_count == 200
    assert g.edge_count == 6 + 3 * (200 - 4)
    assert g.degrees.min() >= 3
