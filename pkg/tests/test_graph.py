import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ltetm.degree_dist import average_degree, from_pairs
from ltetm.graph import build_graph, dump_graph, encode, from_neighbors, graph_stats, load_graph


def test_forced_degree_one():
    g = build_graph(4, 2, from_pairs([(1, 1.0)]), seed=0)
    assert g.cn_degree.tolist() == [1, 1]
    assert all(0 <= nb[0] < 4 for nb in g.cn_neighbors)


def test_same_seed_same_graph(ref_dist):
    a = build_graph(500, 1000, ref_dist, seed=42)
    b = build_graph(500, 1000, ref_dist, seed=42)
    assert a.same_as(b)
    assert a.cn_ptr.tobytes() == b.cn_ptr.tobytes() and a.edge_vn.tobytes() == b.edge_vn.tobytes()
    assert not a.same_as(build_graph(500, 1000, ref_dist, seed=43))


def test_degrees_clamped_to_k():
    g = build_graph(3, 5, from_pairs([(5, 1.0)]), seed=1)
    assert g.cn_degree.tolist() == [3] * 5
    assert all(sorted(nb.tolist()) == [0, 1, 2] for nb in g.cn_neighbors)


def test_invalid_sizes(ref_dist):
    with pytest.raises(ValueError):
        build_graph(0, 5, ref_dist, 0)


def test_edge_count_matches_average_degree(ref_dist):
    # per-graph sd of E/N is ~2% here, so the check is on the 10-seed mean (sd ~0.65%)
    ratios = [build_graph(4000, 8000, ref_dist, seed).edge_count / 8000 for seed in range(10)]
    assert np.mean(ratios) == pytest.approx(average_degree(ref_dist), rel=0.02)


@pytest.mark.parametrize("seed", range(10))
def test_rho_two(ref_dist, seed):
    stats = graph_stats(build_graph(4000, 8000, ref_dist, seed))
    assert stats.rho[2] == pytest.approx(0.494 / 1.001, abs=0.02)
    assert sum(stats.rho.values()) == pytest.approx(1.0)
    assert 0 <= stats.lambda1 <= 1


def test_stats_forced_degrees(single_atom):
    stats = graph_stats(build_graph(10, 20, single_atom, 0))
    assert stats.rho == {3: 1.0}
    assert stats.dc_max == 3
    assert stats.avg_cn_degree == 3.0


def test_lambda1_all_degree_one():
    g = from_neighbors(2, [[0], [1]])
    assert graph_stats(g).lambda1 == 1.0


def test_encode_examples():
    g = from_neighbors(3, [[0, 2]])
    assert encode(g, [1, 0, 1]).tolist() == [0]
    assert encode(g, [0, 0, 0]).tolist() == [0]
    with pytest.raises(ValueError):
        encode(g, [1, 0])


@given(st.integers(1, 8), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_transpose_and_edge_count(k, n, seed):
    g = build_graph(k, n, from_pairs([(1, 1), (2, 2), (3, 1), (9, 1)]), seed)
    rebuilt = [[] for _ in range(n)]
    for v, adj in enumerate(g.vn_neighbors):
        for c, pos in adj:
            assert g.cn_neighbors[c][pos] == v
            rebuilt[c].append(v)
    assert [sorted(r) for r in rebuilt] == [nb.tolist() for nb in g.cn_neighbors]
    assert g.edge_count == g.cn_degree.sum() == g.vn_degree.sum()
    for nb in g.cn_neighbors:
        assert 1 <= nb.size <= k
        assert np.all(np.diff(nb) > 0)


@pytest.mark.parametrize("k", [1, 3, 5, 8])
def test_encode_linear_exhaustive(k):
    g = build_graph(k, 2 * k, from_pairs([(1, 1), (2, 3), (3, 2), (4, 1)]), seed=k)
    words = [np.array(w, dtype=np.uint8) for w in itertools.product((0, 1), repeat=k)]
    codes = {w.tobytes(): encode(g, w) for w in words}
    for a in words:
        for b in words[:: max(1, len(words) // 16)]:
            assert np.array_equal(codes[a.tobytes()] ^ codes[b.tobytes()], encode(g, a ^ b))


def test_dump_round_trip(tmp_path, ref_dist):
    g = build_graph(50, 100, ref_dist, 9)
    path = tmp_path / "g.txt"
    dump_graph(g, path)
    header = path.read_text().splitlines()[0]
    assert header == f"50 100 {g.edge_count}"
    assert load_graph(path).same_as(g)
