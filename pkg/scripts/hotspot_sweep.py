"""Mean avg/max/min consumption per strategy for 1..7 hotspots, single base station.

    python scripts/hotspot_sweep.py --reps 5 --jobs 4
"""

import argparse
from collections import defaultdict
from pathlib import Path
from statistics import mean

from maecsim.cli import BASELINES, NH_VALUES, cmd_sweep
from maecsim.config import parse_config
from maecsim.metrics import read_summary

HERE = Path(__file__).resolve().parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--config", type=Path, default=HERE.parent / "configs" / "single_bs.cfg")
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results/hotspot_sweep"))
    args = ap.parse_args()
    cmd_sweep(parse_config(args.config.read_text()), args.out, args.reps, "nh", args.jobs)

    cells = defaultdict(list)
    for (strategy, n_h, _, _), s in read_summary(args.out / "summary.csv"):
        cells[strategy, n_h].append(s)
    for metric in ("avg_consumption", "max_consumption", "min_consumption"):
        print(f"\n{metric}")
        print("n_h " + "".join(f"{s:>12}" for s in BASELINES))
        for n_h in NH_VALUES:
            row = "".join(f"{mean(getattr(x, metric) for x in cells[s, n_h]):>12.2f}" for s in BASELINES)
            print(f"{n_h:>3} {row}")


if __name__ == "__main__":
    main()
