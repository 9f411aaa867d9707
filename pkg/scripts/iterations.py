"""Average iteration counts: true convergence point versus where CSR and LRM stop."""

import argparse

from ltetm.sim import SimConfig, run_experiment


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--k", type=int, default=4000)
    p.add_argument("--ebno", type=float, nargs="+", default=[0.5, 1.0, 1.5, 2.0, 2.5])
    p.add_argument("--blocks", type=int, default=200)
    p.add_argument("--seed", type=int, default=1)
    args = p.parse_args()

    cfg = SimConfig(k=args.k, ebno_points=args.ebno, num_blocks=args.blocks,
                    seed=args.seed, probe_convergence=True, timing=False)
    rows = {(r.ebno_db, r.kind): r for r in run_experiment(cfg).rows}
    print(f"{'Eb/N0':>6} {'converge':>9} {'LRM':>7} {'CSR':>7} {'excluded':>9}")
    for e in cfg.ebno_points:
        fixed, csr, lrm = rows[e, "fixed"], rows[e, "csr"], rows[e, "lrm"]
        print(f"{e:6.1f} {fixed.convergence_avg:9.2f} {lrm.avg_iterations:7.2f} "
              f"{csr.avg_iterations:7.2f} {fixed.nonconvergent:9d}")


if __name__ == "__main__":
    main()
