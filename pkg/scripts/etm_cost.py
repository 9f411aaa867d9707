"""Measured ETM time and operation counts per block, checked against the closed-form model."""

import argparse

from ltetm.sim import SimConfig, reconcile_row, run_experiment


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--k", type=int, default=4000)
    p.add_argument("--ebno", type=float, nargs="+", default=[2.0])
    p.add_argument("--blocks", type=int, default=100)
    args = p.parse_args()

    cfg = SimConfig(k=args.k, ebno_points=args.ebno, num_blocks=args.blocks)
    result = run_experiment(cfg)
    by_key = {(r.ebno_db, r.kind): r for r in result.rows}
    for e in cfg.ebno_points:
        csr, lrm = by_key[e, "csr"], by_key[e, "lrm"]
        cut = 1 - lrm.avg_etm_time / csr.avg_etm_time
        print(f"{e:.1f} dB: CSR {1e3 * csr.avg_etm_time:.3f} ms, LRM {1e3 * lrm.avg_etm_time:.3f} ms "
              f"({100 * cut:.1f}% less)")
        for row in (csr, lrm):
            print(f"  {row.strategy} ops/block {row.avg_etm_ops.as_dict()}")
            for line in reconcile_row(row, cfg):
                print("   ", line.line())


if __name__ == "__main__":
    main()
