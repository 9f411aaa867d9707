"""Monte Carlo runner: sweeps Eb/N0 and termination strategies, aggregates BER,
iteration counts and ETM-section cost.

Every (Eb/N0, block) pair draws its graph, data and noise from its own seed
stream derived from the master seed, so results do not depend on the worker
count or on the order in which blocks finish. All strategies at one Eb/N0
decode the very same blocks.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channel import ChannelParams, channel_llr, transmit
from .complexity import OpCounts, Reconciliation, csr_cost, lrm_cost, quickselect_amortized
from .decoder import decode
from .degree_dist import DegreeDistribution, average_degree, from_records, reference_distribution
from .etm import EtmConfig
from .graph import build_graph, encode, graph_stats

log = logging.getLogger(__name__)

CSV_HEADER = [
    "ebno_db", "strategy", "blocks", "ber", "avg_iterations", "convergence_avg",
    "etm_time_ms", "etm_add", "etm_signops", "etm_compares",
]

# spawn-key slot for the pinned graph, outside the range of block indices
_PINNED_KEY = 2**31


@dataclass
class SimConfig:
    k: int = 1000
    rate: float = 0.5
    max_iter: int = 100
    ebno_points: list = field(default_factory=lambda: [2.0, 2.5])
    num_blocks: int = 200
    seed: int = 1
    etm: list = field(default_factory=lambda: [EtmConfig("fixed"), EtmConfig("csr"), EtmConfig("lrm")])
    graph_mode: str = "fresh"
    workers: int = 1
    probe_convergence: bool = False
    timing: bool = True
    distribution: DegreeDistribution = field(default_factory=reference_distribution)

    def __post_init__(self):
        problems = []
        if self.k < 1:
            problems.append("k must be >= 1")
        if not 0 < self.rate <= 1:
            problems.append("rate must be in (0, 1]")
        if self.max_iter < 1:
            problems.append("max_iter must be >= 1")
        if self.num_blocks < 1:
            problems.append("num_blocks must be >= 1")
        if self.graph_mode not in ("fresh", "pinned"):
            problems.append("graph_mode must be 'fresh' or 'pinned'")
        if self.workers < 1:
            problems.append("workers must be >= 1")
        if not self.etm:
            problems.append("etm must list at least one strategy")
        labels = [e.label for e in self.etm]
        if len(set(labels)) != len(labels):
            problems.append(f"etm strategy names must be unique, got {labels}")
        if self.seed < 0:
            problems.append("seed must be >= 0")
        if problems:
            raise ValueError("invalid config: " + "; ".join(problems))
        self.ebno_points = [float(x) for x in self.ebno_points]

    @property
    def n(self) -> int:
        return int(round(self.k / self.rate))

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "rate": self.rate,
            "max_iter": self.max_iter,
            "ebno_points": self.ebno_points,
            "num_blocks": self.num_blocks,
            "seed": self.seed,
            "graph_mode": self.graph_mode,
            "workers": self.workers,
            "probe_convergence": self.probe_convergence,
            "timing": self.timing,
            "distribution": self.distribution.to_records(),
            "distribution_raw_mass": self.distribution.raw_mass,
            "etm": [e.to_dict() for e in self.etm],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        d = dict(d)
        kwargs = {}
        for name in ("k", "max_iter", "num_blocks", "seed", "workers"):
            if name in d:
                kwargs[name] = int(d.pop(name))
        for name in ("rate",):
            if name in d:
                kwargs[name] = float(d.pop(name))
        for name in ("probe_convergence", "timing"):
            if name in d:
                kwargs[name] = bool(d.pop(name))
        if "ebno_points" in d:
            kwargs["ebno_points"] = list(d.pop("ebno_points"))
            if not kwargs["ebno_points"]:
                raise ValueError("invalid config: ebno_points must not be empty")
        if "graph_mode" in d:
            kwargs["graph_mode"] = str(d.pop("graph_mode"))
        if "distribution" in d:
            kwargs["distribution"] = from_records(d.pop("distribution"))
        if "etm" in d:
            etm = d.pop("etm")
            etm = [etm] if isinstance(etm, dict) else etm
            kwargs["etm"] = [EtmConfig.from_dict(e) for e in etm]
        d.pop("n", None)
        d.pop("distribution_raw_mass", None)
        if d:
            raise ValueError(f"invalid config: unknown fields {sorted(d)}")
        return cls(**kwargs)


def load_config(path) -> SimConfig:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        raw = json.loads(text)
    else:
        try:
            import tomllib
        except ModuleNotFoundError:  # python < 3.11
            import tomli as tomllib
        raw = tomllib.loads(text)
    return SimConfig.from_dict(raw.get("simulation", raw))


@dataclass
class BlockRecord:
    ebno_db: float
    block: int
    strategy: str
    bit_errors: int
    iterations: int
    terminated_early: bool
    etm_time: float
    etm_ops: OpCounts
    per_iteration_ops: OpCounts
    active_iterations: int
    selection_compares: int = 0
    convergence: int | None = None
    isolated_vns: int = 0
    lambda1: float = 0.0
    rho: dict = field(default_factory=dict)
    edge_count: int = 0


def convergence_probe(decisions, data) -> int | None:
    """First pass count from which the decisions equal ``data`` for good.

    ``decisions[i]`` is the hard decision after pass ``i + 1``. Returns None
    when the last decision is still wrong.
    """
    data = np.asarray(data)
    first = None
    for i in range(len(decisions) - 1, -1, -1):
        if not np.array_equal(decisions[i], data):
            break
        first = i + 1
    return first


def _block_seeds(seed: int, ebno_db: float, block: int):
    key = int(round(ebno_db * 1000)) + 2**20
    ss = np.random.SeedSequence(seed, spawn_key=(block, key))
    return ss.spawn(3)


def run_block(config: SimConfig, ebno_db: float, block: int) -> list[BlockRecord]:
    graph_ss, data_ss, noise_ss = _block_seeds(config.seed, ebno_db, block)
    if config.graph_mode == "pinned":
        graph_ss = np.random.SeedSequence(config.seed, spawn_key=(_PINNED_KEY,))
    graph = build_graph(config.k, config.n, config.distribution, graph_ss)
    stats = graph_stats(graph)
    data = np.random.default_rng(data_ss).integers(0, 2, config.k, dtype=np.uint8)
    params = ChannelParams(ebno_db, config.rate)
    m_c = channel_llr(transmit(encode(graph, data), params, np.random.default_rng(noise_ss)), params)

    convergence = None
    probe = None
    if config.probe_convergence:
        probe = decode(graph, m_c, config.max_iter, None, record_decisions=True)
        convergence = convergence_probe(probe.decisions, data)

    records = []
    for etm_cfg in config.etm:
        if etm_cfg.kind == "fixed" and probe is not None:
            res = probe
        else:
            res = decode(graph, m_c, config.max_iter, etm_cfg.make(ebno_db))
        detail = res.etm_detail
        records.append(BlockRecord(
            ebno_db=ebno_db,
            block=block,
            strategy=etm_cfg.label,
            bit_errors=int(np.count_nonzero(res.bits != data)),
            iterations=res.iterations_used,
            terminated_early=res.terminated_early,
            etm_time=res.etm_time if config.timing else math.nan,
            etm_ops=res.etm_ops,
            per_iteration_ops=detail.get("per_iteration_ops", OpCounts()),
            active_iterations=detail.get("active_iterations", 0),
            selection_compares=detail.get("selection_compares", 0),
            convergence=convergence,
            isolated_vns=stats.isolated_vns,
            lambda1=stats.lambda1,
            rho=stats.rho,
            edge_count=graph.edge_count,
        ))
    return records


def _run_task(args):
    config, ebno_db, block = args
    return (ebno_db, block), run_block(config, ebno_db, block)


@dataclass
class StrategyAggregate:
    ebno_db: float
    strategy: str
    kind: str
    blocks: int
    k: int
    bit_errors: int
    avg_iterations: float
    convergence_avg: float
    convergence_blocks: int
    nonconvergent: int
    avg_etm_time: float  # seconds per block
    avg_etm_ops: OpCounts
    early_terminations: int
    total_iterations: int
    active_iterations: int
    per_iteration_ops: OpCounts
    selection_compares: float
    isolated_vn_blocks: int
    mean_lambda1: float
    mean_rho: dict
    mean_edge_count: float

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.blocks * self.k)

    def csv_row(self) -> list[str]:
        ops = self.avg_etm_ops
        values = [
            self.ebno_db, self.strategy, self.blocks, self.ber, self.avg_iterations, self.convergence_avg,
            1e3 * self.avg_etm_time, ops.additions, ops.sign_domain_ops, ops.compares,
        ]
        return [v if isinstance(v, str) else repr(v) for v in values]

    def to_dict(self) -> dict:
        return {
            "ebno_db": self.ebno_db,
            "strategy": self.strategy,
            "kind": self.kind,
            "blocks": self.blocks,
            "bit_errors": self.bit_errors,
            "ber": self.ber,
            "avg_iterations": self.avg_iterations,
            "convergence_avg": _json_float(self.convergence_avg),
            "convergence_blocks": self.convergence_blocks,
            "nonconvergent_blocks": self.nonconvergent,
            "etm_time_ms": _json_float(1e3 * self.avg_etm_time),
            "etm_ops_per_block": self.avg_etm_ops.as_dict(),
            "early_terminations": self.early_terminations,
            "isolated_vn_blocks": self.isolated_vn_blocks,
        }


def _json_float(x):
    return None if isinstance(x, float) and math.isnan(x) else x


@dataclass
class AggregateResult:
    config: SimConfig
    rows: list

    def row(self, ebno_db: float, strategy: str) -> StrategyAggregate:
        for r in self.rows:
            if r.ebno_db == ebno_db and r.strategy == strategy:
                return r
        raise KeyError((ebno_db, strategy))


def aggregate(config: SimConfig, records: list[BlockRecord]) -> AggregateResult:
    rows = []
    for ebno in config.ebno_points:
        for etm_cfg in config.etm:
            recs = sorted((r for r in records if r.ebno_db == ebno and r.strategy == etm_cfg.label),
                          key=lambda r: r.block)
            if not recs:
                continue
            nb = len(recs)
            conv = [r.convergence for r in recs if r.convergence is not None]
            total_ops = OpCounts()
            per_iter = OpCounts()
            for r in recs:
                total_ops = total_ops + r.etm_ops
                per_iter = per_iter + r.per_iteration_ops
            degrees = sorted({d for r in recs for d in r.rho})
            rows.append(StrategyAggregate(
                ebno_db=ebno,
                strategy=etm_cfg.label,
                kind=etm_cfg.kind,
                blocks=nb,
                k=config.k,
                bit_errors=sum(r.bit_errors for r in recs),
                avg_iterations=sum(r.iterations for r in recs) / nb,
                convergence_avg=(sum(conv) / len(conv)) if conv and config.probe_convergence else math.nan,
                convergence_blocks=len(conv),
                nonconvergent=(nb - len(conv)) if config.probe_convergence else 0,
                avg_etm_time=sum(r.etm_time for r in recs) / nb,
                avg_etm_ops=total_ops.scaled(1.0 / nb),
                early_terminations=sum(r.terminated_early for r in recs),
                total_iterations=sum(r.iterations for r in recs),
                active_iterations=sum(r.active_iterations for r in recs),
                per_iteration_ops=per_iter,
                selection_compares=sum(r.selection_compares for r in recs) / nb,
                isolated_vn_blocks=sum(r.isolated_vns > 0 for r in recs),
                mean_lambda1=sum(r.lambda1 for r in recs) / nb,
                mean_rho={d: sum(r.rho.get(d, 0.0) for r in recs) / nb for d in degrees},
                mean_edge_count=sum(r.edge_count for r in recs) / nb,
            ))
    return AggregateResult(config, rows)


def run_experiment(config: SimConfig, progress=None) -> AggregateResult:
    tasks = [(config, ebno, b) for ebno in config.ebno_points for b in range(config.num_blocks)]
    records = []
    if config.workers == 1:
        for i, t in enumerate(tasks):
            records.extend(_run_task(t)[1])
            if progress:
                progress(i + 1, len(tasks))
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunk = max(1, len(tasks) // (4 * config.workers))
            for i, (_, recs) in enumerate(pool.map(_run_task, tasks, chunksize=chunk)):
                records.extend(recs)
                if progress:
                    progress(i + 1, len(tasks))
    return aggregate(config, records)


def reconcile_row(row: StrategyAggregate, config: SimConfig, tolerance=0.10,
                  amortized_tolerance=0.25) -> list[Reconciliation]:
    """Measured ETM op counts per iteration against the analytic model.

    CSR is checked per pass it ran; LRM's counting terms per pass after the
    cluster was picked, and its selection cost as the amortized term.
    """
    n, k = config.n, config.k
    if row.kind == "csr":
        measured = row.per_iteration_ops.scaled(1.0 / max(row.active_iterations, 1))
        model = csr_cost(n, k, row.mean_lambda1, row.mean_rho)
        return [Reconciliation(f"csr {name}", getattr(measured, name), getattr(model, name), tolerance)
                for name in ("additions", "sign_domain_ops", "compares")]
    if row.kind == "lrm":
        etm = next(e for e in config.etm if e.label == row.strategy)
        b = etm.b_percent / 100.0
        avg = average_degree(config.distribution)
        measured = row.per_iteration_ops.scaled(1.0 / max(row.active_iterations, 1))
        model = lrm_cost(n, avg, b, row.avg_iterations)
        amortized = quickselect_amortized(n * avg, row.avg_iterations)
        return [
            Reconciliation("lrm additions", measured.additions, model.additions, tolerance),
            Reconciliation("lrm sign_domain_ops", measured.sign_domain_ops, model.sign_domain_ops, tolerance),
            Reconciliation("lrm compares (cluster)", measured.compares, model.compares - amortized, tolerance),
            Reconciliation("lrm compares (quickselect, amortized)",
                           row.selection_compares / row.avg_iterations, amortized, amortized_tolerance),
        ]
    return []


def csv_text(result: AggregateResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in result.rows:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        parsed = {"ebno_db": float(r["ebno_db"]), "strategy": r["strategy"], "blocks": int(r["blocks"])}
        for name in CSV_HEADER[3:]:
            parsed[name] = float(r[name])
        out.append(parsed)
    return out


def gnuplot_table(result: AggregateResult) -> str:
    labels = [e.label for e in result.config.etm]
    lines = ["# ebno_db " + " ".join(f"ber_{s}" for s in labels)]
    for ebno in result.config.ebno_points:
        vals = []
        for s in labels:
            try:
                vals.append(repr(result.row(ebno, s).ber))
            except KeyError:
                vals.append("nan")
        lines.append(f"{ebno!r} " + " ".join(vals))
    return "\n".join(lines) + "\n"


def summary(result: AggregateResult) -> dict:
    recon = {}
    for r in result.rows:
        lines = reconcile_row(r, result.config)
        if lines:
            recon[f"{r.ebno_db}/{r.strategy}"] = [
                {"category": x.category, "measured": x.measured, "model": x.model,
                 "rel_diff": x.rel_diff, "tolerance": x.tolerance, "pass": x.passed}
                for x in lines
            ]
    return {
        "config": result.config.to_dict(),
        "results": [r.to_dict() for r in result.rows],
        "complexity_reconciliation": recon,
    }


def emit_results(result: AggregateResult, out_dir, gnuplot: bool = True) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"csv": out / "results.csv", "json": out / "summary.json"}
    paths["csv"].write_text(csv_text(result))
    paths["json"].write_text(json.dumps(summary(result), indent=2) + "\n")
    if gnuplot:
        paths["gnuplot"] = out / "ber.dat"
        paths["gnuplot"].write_text(gnuplot_table(result))
    return paths
