"""``simulate`` command-line entry point."""

from __future__ import annotations

import argparse
import logging
import sys

from .etm import EtmConfig
from .sim import SimConfig, emit_results, load_config, reconcile_row, run_experiment

log = logging.getLogger("ltetm")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="simulate", description="LT BP decoding with early termination: Monte Carlo sweep")
    p.add_argument("--config", help="TOML or JSON config file (defaults are used when omitted)")
    p.add_argument("--ebno", help="comma-separated Eb/N0 points in dB")
    p.add_argument("--etm", choices=["fixed", "csr", "lrm"], action="append",
                   help="strategy to run; repeat for several (overrides the config list)")
    p.add_argument("--blocks", type=int)
    p.add_argument("--k", type=int, help="data packet length K")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default="results")
    p.add_argument("--workers", type=int)
    p.add_argument("--probe-convergence", action="store_true")
    p.add_argument("--pin-graph", action="store_true", help="use one graph for every block")
    p.add_argument("--no-timing", action="store_true", help="leave etm_time_ms out (nan) for byte-stable output")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args) -> SimConfig:
    cfg = load_config(args.config) if args.config else SimConfig()
    d = cfg.to_dict()
    if args.ebno:
        d["ebno_points"] = [float(x) for x in args.ebno.split(",") if x.strip()]
    if args.etm:
        by_kind = {e.kind: e for e in cfg.etm}
        d["etm"] = [(by_kind.get(kind) or EtmConfig(kind)).to_dict() for kind in args.etm]
    for name, attr in (("blocks", "num_blocks"), ("k", "k"), ("seed", "seed"), ("workers", "workers")):
        value = getattr(args, name)
        if value is not None:
            d[attr] = value
    if args.probe_convergence:
        d["probe_convergence"] = True
    if args.pin_graph:
        d["graph_mode"] = "pinned"
    if args.no_timing:
        d["timing"] = False
    return SimConfig.from_dict(d)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = config_from_args(args)
    except (ValueError, KeyError, TypeError, OSError) as exc:
        print(f"simulate: config error: {exc}", file=sys.stderr)
        return 2

    def progress(done, total):
        if done % max(1, total // 20) == 0 or done == total:
            log.info("%d/%d blocks", done, total)

    try:
        result = run_experiment(cfg, progress)
        paths = emit_results(result, args.out)
    except OSError as exc:
        print(f"simulate: {exc}", file=sys.stderr)
        return 1

    print(f"{'ebno':>5} {'strategy':>8} {'ber':>10} {'avg_it':>7} {'conv':>7} {'etm_ms':>8}")
    for r in result.rows:
        print(f"{r.ebno_db:5.2f} {r.strategy:>8} {r.ber:10.3e} {r.avg_iterations:7.2f} "
              f"{r.convergence_avg:7.2f} {1e3 * r.avg_etm_time:8.3f}")
        for line in reconcile_row(r, cfg):
            log.info("    %s", line.line())
    print(f"wrote {', '.join(str(p) for p in paths.values())}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
