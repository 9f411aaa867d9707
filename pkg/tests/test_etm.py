import itertools
import types

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ltetm.etm import (
    DEFAULT_DC_LRM, CsrState, CsrStrategy, EtmConfig, LrmParams, LrmState, LrmStrategy, csr_step,
    dc_lrm_lookup, lrm_cluster_count, lrm_select, lrm_step, satisfied_checks,
)
from ltetm.graph import encode, from_neighbors
from ltetm.selection import sort_select

from . import oracles


def test_correct_codeword_satisfies_every_check(toy_graph):
    data = np.array([1, 0, 1, 1, 0, 0, 1, 0], dtype=np.uint8)
    state, _ = csr_step(CsrState(), data, encode(toy_graph, data), toy_graph, gamma_lc=1)
    assert state.csr == 1.0


def test_satisfied_count_exhaustive(toy_graph):
    neighbors = [nb.tolist() for nb in toy_graph.cn_neighbors]
    m_c_hard = np.random.default_rng(1).integers(0, 2, toy_graph.num_cn, dtype=np.uint8)
    for word in itertools.product((0, 1), repeat=8):
        bits = np.array(word, dtype=np.uint8)
        assert satisfied_checks(bits, m_c_hard, toy_graph) == oracles.satisfied_count(neighbors, word, m_c_hard)


def test_csr_stall_rule():
    # mu = 0.8 twice in a row with gamma_lc = 1 -> stop on the second
    g = from_neighbors(1, [[0]] * 5)
    m_c_hard = np.array([1, 1, 1, 1, 0], dtype=np.uint8)
    state = CsrState()
    state, stop = csr_step(state, [1], m_c_hard, g, gamma_lc=1)
    assert state.csr == 0.8 and not stop
    state, stop = csr_step(state, [1], m_c_hard, g, gamma_lc=1)
    assert stop


def test_csr_needs_gamma_lc_stalls_in_a_row():
    g = from_neighbors(1, [[0]] * 4)
    hard = np.array([1, 1, 0, 0], dtype=np.uint8)
    state = CsrState()
    trace = []
    for bits in ([1], [1], [1], [0], [0], [0], [0]):
        state, stop = csr_step(state, bits, hard, g, gamma_lc=2)
        trace.append((state.stall_count, stop))
    # the csr value stays at 0.5 throughout, so only the stall counter matters
    assert trace == [(0, False), (1, False), (2, True), (2, True), (2, True), (2, True), (2, True)]


def test_gamma_csr_gate():
    g = from_neighbors(1, [[0]] * 4)
    hard = np.array([1, 1, 1, 0], dtype=np.uint8)
    state = CsrState()
    csr_step(state, [1], hard, g, gamma_lc=1, gamma_csr=1.0)
    _, stop = csr_step(state, [1], hard, g, gamma_lc=1, gamma_csr=1.0)
    assert not stop  # stalled, but only 3/4 satisfied
    _, stop = csr_step(CsrState(prev_csr=0.75), [1], hard, g, gamma_lc=1, gamma_csr=0.75)
    assert stop


@given(st.lists(st.integers(0, 1), min_size=8, max_size=8), st.integers(0, 2**32 - 1))
def test_mu_in_unit_interval(word, seed):
    rng = np.random.default_rng(seed)
    g = from_neighbors(8, [rng.choice(8, int(rng.integers(1, 5)), replace=False) for _ in range(10)])
    state, _ = csr_step(CsrState(), np.array(word, dtype=np.uint8), rng.integers(0, 2, 10, dtype=np.uint8), g, 1)
    assert 0.0 <= state.csr <= 1.0


def test_lrm_select_examples():
    idx, _ = lrm_select([5, -1, 3, -2], b_fraction=0.25)
    assert idx.tolist() == [1]
    idx, _ = lrm_select([5, -1, 3, -2], b_fraction=0.99)
    assert idx.tolist() == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        lrm_select([1.0, 2.0], b_fraction=0.5, n_b=3)


def test_lrm_select_matches_sort_oracle():
    v = np.random.default_rng(0).normal(0, 5, 10**4)
    idx, _ = lrm_select(v, b_fraction=0.05)
    assert idx.size == 500
    assert np.array_equal(idx, sort_select(v, 500))


def test_cluster_size_is_ceiling():
    assert lrm_cluster_count(46904, 0.05) == 2346
    assert lrm_cluster_count(20, 0.05) == 1
    assert lrm_cluster_count(3, 0.01) == 1


def _run_script(v2c_rows, dc, gamma, b=0.9):
    """Feed scripted v2c vectors to the strategy; return the pass count at termination or None."""
    strat = LrmStrategy(gamma, b, dc)
    strat.start(None, None)
    for l, row in enumerate(v2c_rows):
        store = types.SimpleNamespace(v2c=np.asarray(row, dtype=float))
        if strat.step(l, store, None):
            return l + 1
    return None


P, N = 1.0, -1.0
# (dc_lrm, gamma_lc, per-pass v2c for three tracked edges, pass at which it stops), worked by hand:
#   the cluster is picked at l == dc, counting starts at l == dc + 1, a pass with no sign change
#   bumps the counter, any change resets it, stop once counter == gamma_lc
LRM_SCRIPTS = [
    (1, 1, [[P, P, P], [P, P, P], [P, P, P]], 3),
    (1, 1, [[P, P, P], [P, P, N], [P, N, N], [P, N, N]], 4),
    (0, 2, [[P, P, P], [P, P, P], [N, P, P], [N, P, P], [N, P, P]], 5),
    (2, 1, [[P, P, P], [N, N, N], [P, P, P], [N, P, P], [P, P, P], [N, P, P]], None),
    (1, 1, [[P, P, P], [0.2, P, P], [0.0, P, P]], 3),  # exactly 0 counts as the positive sign
    (1, 1, [[P, P, P], [0.2, P, P], [-0.0, 0.5, 9.0]], 3),
    (3, 2, [[N, N, N]] * 3 + [[P, N, P], [P, N, P], [P, N, N], [P, N, N], [P, N, N]], 8),
]


@pytest.mark.parametrize("dc, gamma, rows, expected", LRM_SCRIPTS)
def test_lrm_counter_automaton(dc, gamma, rows, expected):
    assert _run_script(rows, dc, gamma) == expected


def test_lrm_step_is_noop_before_dc():
    state = LrmState()
    state, stop = lrm_step(state, [1.0, -1.0], 3, LrmParams(1, 0.5, 3))
    assert not stop and state.stable_count == 0


def test_lrm_step_requires_cluster():
    with pytest.raises(RuntimeError):
        lrm_step(LrmState(), [1.0], 4, LrmParams(1, 0.5, 3))


@given(st.lists(st.lists(st.sampled_from([P, N]), min_size=3, max_size=3), min_size=1, max_size=12),
       st.integers(0, 4), st.integers(1, 3))
def test_lrm_never_stops_before_dc_plus_gamma(rows, dc, gamma):
    stop = _run_script(rows, dc, gamma)
    assert stop is None or stop >= dc + gamma


@pytest.mark.parametrize("ebno, value", [(0.5, 45), (1.0, 28), (1.5, 22), (2.0, 18), (2.5, 15),
                                         (1.75, 22), (0.0, 45), (3.7, 15), (2.24, 18)])
def test_dc_lrm_lookup(ebno, value):
    assert dc_lrm_lookup(ebno) == value


def test_dc_lrm_custom_table():
    assert dc_lrm_lookup(1.0, {0.0: 9, 2.0: 3}) == 9
    with pytest.raises(ValueError):
        dc_lrm_lookup(1.0, {})


def test_etm_config():
    assert EtmConfig("csr").gamma_lc == 5
    assert EtmConfig("lrm").gamma_lc == 1
    strat = EtmConfig("lrm").make(2.0)
    assert strat.params == LrmParams(1, 0.05, DEFAULT_DC_LRM[2.0])
    assert EtmConfig.from_dict({"kind": "lrm", "dc_lrm_table": [{"ebno_db": 1.0, "value": 7}]}).make(3.0).params.dc_lrm == 7
    with pytest.raises(ValueError):
        EtmConfig("bogus")
    with pytest.raises(ValueError):
        EtmConfig.from_dict({"kind": "csr", "gama_lc": 3})
    with pytest.raises(ValueError):
        CsrStrategy(gamma_lc=0)
