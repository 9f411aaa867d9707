"""Early-termination strategies hooked into the BP loop.

A strategy has ``start(graph, m_c)``, ``step(l, store, graph) -> bool``
(called after every CN+VN pass, ``l`` counted from 0), ``final_bits()``
and an ``ops`` counter. Strategies only read messages, never write them.

Op counters follow the three cost categories of the complexity model
(additions; abs/sign/XOR; compares), incremented by the sizes of the arrays
each vectorized step actually processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .complexity import OpCounts
from .decoder import edge_llr
from .graph import TannerGraph
from .selection import quickselect_k_smallest

# Eb/N0 (dB) -> iteration at which the LRM cluster is picked, for the K=4000 rate-1/2 setup
DEFAULT_DC_LRM = {0.5: 45, 1.0: 28, 1.5: 22, 2.0: 18, 2.5: 15}


def dc_lrm_lookup(ebno_db: float, table=None) -> int:
    """Nearest tabulated Eb/N0 point; exact ties go to the lower dB entry."""
    table = DEFAULT_DC_LRM if table is None else table
    if not table:
        raise ValueError("DC-LRM table is empty")
    best = min(sorted(table), key=lambda x: abs(x - ebno_db))
    return int(table[best])


def lrm_cluster_count(edge_count: int, b_fraction: float) -> int:
    # the epsilon keeps exact products like 0.05 * 20 from rounding up to 2
    return max(1, math.ceil(b_fraction * edge_count - 1e-9))


@dataclass
class CsrState:
    prev_csr: float = math.nan
    stall_count: int = 0
    csr: float = math.nan
    satisfied: int = 0


def satisfied_checks(bits, m_c_hard, graph: TannerGraph) -> int:
    """Number of CNs whose re-encoded bit matches the channel hard decision."""
    parity = np.bitwise_xor.reduceat(np.asarray(bits, dtype=np.uint8)[graph.edge_vn], graph.cn_ptr[:-1])
    return int(graph.num_cn - np.count_nonzero(parity ^ m_c_hard))


def csr_step(state: CsrState, bits, m_c_hard, graph: TannerGraph, gamma_lc: int,
             gamma_csr: float | None = None, ops: OpCounts | None = None):
    """One CSR update. Returns ``(state, terminate)``; the state is updated in place."""
    s = satisfied_checks(bits, m_c_hard, graph)
    mu = s / graph.num_cn
    stalled = mu - state.prev_csr == 0
    state.stall_count = min(state.stall_count + 1, gamma_lc) if stalled else 0
    state.prev_csr = mu
    state.csr = mu
    state.satisfied = s
    terminate = state.stall_count >= gamma_lc
    if gamma_csr is not None:
        terminate = terminate and mu >= gamma_csr
    if ops is not None:
        # d XORs per CN of degree d (d - 1 among the bits, one against m_c),
        # N additions to count satisfied CNs, one for the CSR difference
        ops.add(additions=graph.num_cn + 1, sign_domain_ops=graph.edge_count,
                compares=2 + (gamma_csr is not None))
    return state, terminate


@dataclass
class LrmState:
    lrm_indices: np.ndarray | None = None
    prev_signs: np.ndarray | None = None
    stable_count: int = 0
    last_changes: int = -1


@dataclass(frozen=True)
class LrmParams:
    gamma_lc: int
    b_fraction: float
    dc_lrm: int


def lrm_select(v2c, b_fraction: float, seed: int = 0, n_b: int | None = None):
    """Edge indices of the ``N_B`` least reliable v2c messages, plus the selection report."""
    v2c = np.asarray(v2c)
    n_b = lrm_cluster_count(v2c.size, b_fraction) if n_b is None else n_b
    if n_b > v2c.size:
        raise ValueError(f"N_B={n_b} exceeds the {v2c.size} available messages")
    report = quickselect_k_smallest(v2c, n_b, seed=seed)
    return report.indices, report


def lrm_step(state: LrmState, v2c, l: int, params: LrmParams, ops: OpCounts | None = None):
    """Count sign flips in the tracked cluster. Returns ``(state, terminate)``.

    No-op (continue) while ``l <= dc_lrm``.
    """
    if l <= params.dc_lrm:
        return state, False
    if state.lrm_indices is None:
        raise RuntimeError("LRM cluster not selected before counting")
    signs = np.asarray(v2c)[state.lrm_indices] >= 0
    changes = int(np.count_nonzero(signs != state.prev_signs))
    state.prev_signs = signs
    state.last_changes = changes
    state.stable_count = state.stable_count + 1 if changes == 0 else 0
    if ops is not None:
        n_b = state.lrm_indices.size
        ops.add(additions=n_b, sign_domain_ops=n_b, compares=n_b + 1)
    return state, state.stable_count >= params.gamma_lc


class FixedIterations:
    kind = "fixed"

    def __init__(self):
        self.ops = OpCounts()

    def start(self, graph, m_c):
        self.ops = OpCounts()

    def step(self, l, store, graph) -> bool:
        return False

    def final_bits(self):
        return None

    def detail(self) -> dict:
        return {}


class CsrStrategy:
    """Check-sum satisfaction: hard decision and re-encode every pass, stop on a CSR stall."""

    kind = "csr"

    def __init__(self, gamma_lc: int = 5, gamma_csr: float | None = None):
        if gamma_lc < 1:
            raise ValueError("gamma_lc must be >= 1")
        if gamma_csr is not None and not 0 < gamma_csr <= 1:
            raise ValueError("gamma_csr must be in (0, 1]")
        self.gamma_lc = gamma_lc
        self.gamma_csr = gamma_csr
        self.setup = OpCounts()
        self.loop = OpCounts()

    @property
    def ops(self) -> OpCounts:
        return self.setup + self.loop

    def start(self, graph, m_c):
        self.state = CsrState()
        self.m_c_hard = (np.asarray(m_c) >= 0).astype(np.uint8)
        self.bits = None
        self.iterations = 0
        self.setup = OpCounts(sign_domain_ops=graph.num_cn)
        self.loop = OpCounts()

    def step(self, l, store, graph) -> bool:
        m_v = edge_llr(store, graph)
        self.bits = (m_v >= 0).astype(np.uint8)
        self.loop.add(additions=int(np.count_nonzero(graph.vn_degree > 1)), compares=graph.num_vn)
        self.iterations += 1
        _, stop = csr_step(self.state, self.bits, self.m_c_hard, graph, self.gamma_lc, self.gamma_csr, self.loop)
        return stop

    def final_bits(self):
        return self.bits

    def detail(self) -> dict:
        return {
            "active_iterations": self.iterations,
            "per_iteration_ops": self.loop,
            "final_csr": self.state.csr,
        }


class LrmStrategy:
    """Least reliable messages: watch the signs of a fixed low-|LLR| cluster of v2c messages."""

    kind = "lrm"

    def __init__(self, gamma_lc: int = 1, b_fraction: float = 0.05, dc_lrm: int = 15, seed: int = 0):
        if gamma_lc < 1:
            raise ValueError("gamma_lc must be >= 1")
        if not 0 < b_fraction < 1:
            raise ValueError("b_fraction must be in (0, 1)")
        if dc_lrm < 0:
            raise ValueError("dc_lrm must be >= 0")
        self.params = LrmParams(gamma_lc, b_fraction, dc_lrm)
        self.seed = seed
        self.selection = OpCounts()
        self.counting = OpCounts()

    @property
    def ops(self) -> OpCounts:
        return self.selection + self.counting

    def start(self, graph, m_c):
        self.state = LrmState()
        self.selection = OpCounts()
        self.counting = OpCounts()
        self.selection_compares = 0
        self.active = 0

    def step(self, l, store, graph) -> bool:
        if l == self.params.dc_lrm:
            idx, report = lrm_select(store.v2c, self.params.b_fraction, self.seed)
            self.state.lrm_indices = idx
            self.state.prev_signs = store.v2c[idx] >= 0
            self.selection_compares = report.comparisons
            # |.| over every message for the selection key, then the cluster's initial signs
            self.selection.add(sign_domain_ops=store.v2c.size + idx.size, compares=report.comparisons)
            return False
        if l > self.params.dc_lrm:
            self.active += 1
            _, stop = lrm_step(self.state, store.v2c, l, self.params, self.counting)
            return stop
        return False

    def final_bits(self):
        return None

    def detail(self) -> dict:
        n_b = 0 if self.state.lrm_indices is None else int(self.state.lrm_indices.size)
        return {
            "active_iterations": self.active,
            "per_iteration_ops": self.counting,
            "selection_compares": self.selection_compares,
            "selection_sign_ops": self.selection.sign_domain_ops,
            "n_b": n_b,
        }


@dataclass
class EtmConfig:
    kind: str = "fixed"
    gamma_lc: int | None = None
    gamma_csr: float | None = None
    b_percent: float = 5.0
    dc_lrm: int | None = None
    dc_lrm_table: dict = field(default_factory=lambda: dict(DEFAULT_DC_LRM))
    name: str | None = None

    def __post_init__(self):
        if self.kind not in ("fixed", "csr", "lrm"):
            raise ValueError(f"etm.kind: unknown strategy {self.kind!r}")
        if self.gamma_lc is None:
            self.gamma_lc = {"csr": 5, "lrm": 1}.get(self.kind, 1)
        if self.gamma_lc < 1:
            raise ValueError("etm.gamma_lc must be >= 1")
        if not 0 < self.b_percent < 100:
            raise ValueError("etm.b_percent must be in (0, 100)")
        if not self.dc_lrm_table:
            raise ValueError("etm.dc_lrm_table must not be empty")

    @property
    def label(self) -> str:
        return self.name or self.kind

    def make(self, ebno_db: float):
        if self.kind == "fixed":
            return FixedIterations()
        if self.kind == "csr":
            return CsrStrategy(self.gamma_lc, self.gamma_csr)
        dc = self.dc_lrm if self.dc_lrm is not None else dc_lrm_lookup(ebno_db, self.dc_lrm_table)
        return LrmStrategy(self.gamma_lc, self.b_percent / 100.0, dc)

    @classmethod
    def from_dict(cls, d: dict) -> "EtmConfig":
        d = dict(d)
        table = d.pop("dc_lrm_table", None)
        known = {"kind", "gamma_lc", "gamma_csr", "b_percent", "dc_lrm", "name"}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"etm: unknown fields {sorted(unknown)}")
        cfg = cls(**d)
        if table is not None:
            cfg.dc_lrm_table = {float(r["ebno_db"]): int(r["value"]) for r in table}
            if not cfg.dc_lrm_table:
                raise ValueError("etm.dc_lrm_table must not be empty")
        return cfg

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "name": self.label,
            "gamma_lc": self.gamma_lc,
            "gamma_csr": self.gamma_csr,
            "b_percent": self.b_percent,
            "dc_lrm": self.dc_lrm,
            "dc_lrm_table": [{"ebno_db": k, "value": v} for k, v in sorted(self.dc_lrm_table.items())],
        }
