"""Cooperative base stations vs. the same number of static ones, N_b = 1..4.

Hotspot count follows the station count (N_h = N_b) unless --n-h is given.

    python scripts/station_sweep.py --reps 5
"""

import argparse
from dataclasses import replace
from pathlib import Path
from statistics import mean

from maecsim.cli import NB_VALUES
from maecsim.config import parse_config
from maecsim.metrics import write_summary
from maecsim.netsim import build_topology, run_scenario

HERE = Path(__file__).resolve().parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--config", type=Path, default=HERE.parent / "configs" / "multi_bs.cfg")
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--n-h", type=int, default=None)
    ap.add_argument("--out", type=Path, default=Path("results/station_sweep"))
    args = ap.parse_args()
    base = parse_config(args.config.read_text())
    args.out.mkdir(parents=True, exist_ok=True)

    reports = []
    print(f"{'n_b':>3} {'static':>10} {'comaec':>10}")
    for n_b in NB_VALUES:
        avg = {"static": [], "comaec": []}
        for rep in range(args.reps):
            cfg = replace(base, n_b=n_b, n_h=args.n_h or n_b, seed=base.seed + rep,
                          bs_initial_positions="random")
            topo = build_topology(cfg)
            for strategy in avg:
                r = run_scenario(replace(cfg, strategy=strategy), topology=topo)
                reports.append(r)
                avg[strategy].append(r.summary.avg_consumption)
        print(f"{n_b:>3} {mean(avg['static']):>10.2f} {mean(avg['comaec']):>10.2f}")
    write_summary(reports, args.out / "summary.csv")


if __name__ == "__main__":
    main()
