"""Static base station vs. hotspot-seeking base station on one shared deployment.

Writes per-node CSVs (residual energy maps) for both runs of every seed and
prints total consumption per seed plus the ratio of means.

    python scripts/static_vs_maec.py --seeds 5 --out results/static_vs_maec
"""

import argparse
from dataclasses import replace
from pathlib import Path
from statistics import mean

from maecsim.config import parse_config
from maecsim.metrics import write_per_node
from maecsim.netsim import build_topology, run_scenario

HERE = Path(__file__).resolve().parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--config", type=Path, default=HERE.parent / "configs" / "single_bs.cfg")
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--out", type=Path, default=Path("results/static_vs_maec"))
    args = ap.parse_args()
    base = parse_config(args.config.read_text())
    args.out.mkdir(parents=True, exist_ok=True)

    totals = {"static": [], "maec": []}
    for seed in range(base.seed, base.seed + args.seeds):
        cfg = replace(base, seed=seed)
        topo = build_topology(cfg)
        for strategy in totals:
            rep = run_scenario(replace(cfg, strategy=strategy), topology=topo)
            write_per_node(rep, args.out / f"per_node_{strategy}_seed{seed}.csv")
            totals[strategy].append(rep.summary.total_consumption)
        print(f"seed {seed}: static={totals['static'][-1]:.1f} maec={totals['maec'][-1]:.1f}")
    print(f"ratio of means maec/static = {mean(totals['maec']) / mean(totals['static']):.3f}")


if __name__ == "__main__":
    main()
