"""LT code belief-propagation decoding with early termination (CSR and LRM)."""

from .channel import ChannelParams, channel_llr, transmit
from .complexity import OpCounts, csr_cost, lrm_cost, reconcile
from .decoder import DecodeResult, MessageStore, cn_update, decode, hard_decision, vn_update
from .degree_dist import DegreeDistribution, average_degree, from_pairs, reference_distribution, sample_degree
from .etm import CsrStrategy, EtmConfig, FixedIterations, LrmStrategy, dc_lrm_lookup, lrm_select
from .graph import TannerGraph, build_graph, encode, graph_stats
from .selection import quickselect_k_smallest
from .sim import SimConfig, convergence_probe, emit_results, run_experiment

__all__ = [
    "ChannelParams", "channel_llr", "transmit",
    "OpCounts", "csr_cost", "lrm_cost", "reconcile",
    "DecodeResult", "MessageStore", "cn_update", "decode", "hard_decision", "vn_update",
    "DegreeDistribution", "average_degree", "from_pairs", "reference_distribution", "sample_degree",
    "CsrStrategy", "EtmConfig", "FixedIterations", "LrmStrategy", "dc_lrm_lookup", "lrm_select",
    "TannerGraph", "build_graph", "encode", "graph_stats",
    "quickselect_k_smallest",
    "SimConfig", "convergence_probe", "emit_results", "run_experiment",
]
