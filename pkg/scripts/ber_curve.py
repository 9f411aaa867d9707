"""BER against Eb/N0 for fixed-iteration, CSR and LRM decoding.

Writes results.csv, summary.json and ber.dat (gnuplot columns) into --out.
"""

import argparse

from ltetm.sim import emit_results, load_config, run_experiment


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config", default="configs/full.toml")
    p.add_argument("--blocks", type=int, help="override the block count")
    p.add_argument("--out", default="results/ber_curve")
    args = p.parse_args()

    cfg = load_config(args.config)
    if args.blocks:
        cfg.num_blocks = args.blocks
    result = run_experiment(cfg)
    emit_results(result, args.out)
    for r in result.rows:
        print(f"{r.ebno_db:4.1f} dB  {r.strategy:>6}  ber {r.ber:.3e}  ({r.bit_errors} errors)")


if __name__ == "__main__":
    main()
