"""Log-domain belief propagation for LT codes, flooding schedule.

Channel LLRs sit on the check nodes; variable nodes get no channel
observation. All messages start at zero, so information enters through the
degree-1 check nodes and spreads from there.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .complexity import OpCounts
from .graph import TannerGraph

LLR_MAX = 30.0
# largest tanh(|x|/2) a saturated message can produce; keeps atanh finite
_T_MAX = np.tanh(LLR_MAX / 2)


@dataclass
class MessageStore:
    m_c: np.ndarray
    c2v: np.ndarray
    v2c: np.ndarray
    iteration: int = 0

    @classmethod
    def fresh(cls, graph: TannerGraph, m_c) -> "MessageStore":
        m_c = np.asarray(m_c, dtype=np.float64)
        if m_c.shape != (graph.num_cn,):
            raise ValueError(f"expected {graph.num_cn} channel LLRs, got shape {m_c.shape}")
        e = graph.edge_count
        return cls(m_c, np.zeros(e), np.zeros(e))

    def snapshot(self) -> "MessageStore":
        return MessageStore(self.m_c.copy(), self.c2v.copy(), self.v2c.copy(), self.iteration)


@dataclass
class DecodeResult:
    bits: np.ndarray
    iterations_used: int
    terminated_early: bool
    etm_ops: OpCounts = field(default_factory=OpCounts)
    etm_time: float = 0.0  # seconds spent in the strategy hook
    etm_detail: dict = field(default_factory=dict)
    decisions: list | None = None


def _exclusive_prod(t: np.ndarray) -> np.ndarray:
    """Row-wise product of every entry except the one in each column, without division."""
    pre = np.ones_like(t)
    suf = np.ones_like(t)
    if t.shape[1] > 1:
        pre[:, 1:] = np.cumprod(t[:, :-1], axis=1)
        suf[:, :-1] = np.cumprod(t[:, :0:-1], axis=1)[:, ::-1]
    return pre * suf


def cn_update(store: MessageStore, graph: TannerGraph) -> np.ndarray:
    """Tanh-rule check node update, in place on ``store.c2v``.

    Magnitude: ``2 atanh(tanh(|m_c|/2) * prod tanh(|m_v'c|/2))`` over the other
    edges. Sign: with positive LLR meaning bit 1, the outgoing hard bit is the
    XOR of the incoming hard bits (``m_c`` and the other v2c, sign(0) = +1).
    That is the plain sign product times ``(-1)**(d + 1)`` for a degree-d CN.
    Inputs are clipped to ``LLR_MAX`` before tanh.
    """
    m_c = np.clip(store.m_c, -LLR_MAX, LLR_MAX)
    v2c = np.clip(store.v2c, -LLR_MAX, LLR_MAX)
    t_c = np.tanh(np.abs(m_c) / 2)
    neg_c = m_c < 0
    out = store.c2v
    for cns, edges in graph.degree_groups:
        x = v2c[edges]
        neg = x < 0
        prod = _exclusive_prod(np.tanh(np.abs(x) / 2)) * t_c[cns, None]
        mag = 2.0 * np.arctanh(np.minimum(prod, _T_MAX))
        d = edges.shape[1]
        # negatives among all d inputs except the own edge; output is negative when the
        # count of positive (bit-1) inputs is even
        n_neg = (neg.sum(axis=1) + neg_c[cns])[:, None] - neg
        out[edges] = np.where((n_neg + d) % 2 == 0, -1.0, 1.0) * np.minimum(mag, LLR_MAX)
    return out


def vn_totals(store: MessageStore, graph: TannerGraph) -> np.ndarray:
    return np.bincount(graph.edge_vn, weights=store.c2v, minlength=graph.num_vn)


def vn_update(store: MessageStore, graph: TannerGraph) -> np.ndarray:
    """``m_vc = sum of m_c'v over c' != c``, clipped to ``LLR_MAX``; in place on ``store.v2c``."""
    total = vn_totals(store, graph)
    np.clip(total[graph.edge_vn] - store.c2v, -LLR_MAX, LLR_MAX, out=store.v2c)
    return store.v2c


def hard_decision(store: MessageStore, graph: TannerGraph) -> np.ndarray:
    """Bit 1 where the VN's total LLR (all incoming c2v) is >= 0."""
    return (vn_totals(store, graph) >= 0).astype(np.uint8)


def edge_llr(store: MessageStore, graph: TannerGraph) -> np.ndarray:
    """``m_v = m_cv + m_vc`` through one representative edge per VN.

    Equals the full incoming sum unless the outgoing message was clipped.
    Degree-1 VNs carry ``m_vc = 0``, so for them this is just ``m_cv``.
    """
    first = graph.first_edge_of_vn
    out = np.zeros(graph.num_vn)
    deg = graph.vn_degree
    one = first[deg == 1]
    many = deg > 1
    out[deg == 1] = store.c2v[one]
    out[many] = store.c2v[first[many]] + store.v2c[first[many]]
    return out


def iterate(store: MessageStore, graph: TannerGraph) -> None:
    cn_update(store, graph)
    vn_update(store, graph)
    store.iteration += 1


def decode(graph: TannerGraph, m_c, max_iter: int, etm=None, record_decisions: bool = False) -> DecodeResult:
    """Run BP until ``max_iter`` passes or until the strategy hook says stop.

    ``etm`` follows the interface in :mod:`ltetm.etm`; ``None`` means fixed
    iterations. With ``record_decisions`` the full-sum decision after every
    pass is kept (outside the timed ETM section).
    """
    from .etm import FixedIterations

    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    etm = FixedIterations() if etm is None else etm
    store = MessageStore.fresh(graph, m_c)
    clock = time.perf_counter
    t0 = clock()
    etm.start(graph, store.m_c)
    etm_time = clock() - t0
    decisions = [] if record_decisions else None
    stop = False
    l = 0
    while l < max_iter and not stop:
        cn_update(store, graph)
        vn_update(store, graph)
        t0 = clock()
        stop = etm.step(l, store, graph)
        etm_time += clock() - t0
        if record_decisions:
            decisions.append(hard_decision(store, graph))
        l += 1
        store.iteration = l
    bits = etm.final_bits()
    if bits is None:
        bits = hard_decision(store, graph)
    return DecodeResult(
        bits=bits,
        iterations_used=l,
        terminated_early=stop,
        etm_ops=etm.ops,
        etm_time=etm_time,
        etm_detail=etm.detail(),
        decisions=decisions,
    )
