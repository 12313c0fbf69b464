"""Command line: `maecsim run|compare|sweep --config FILE --out DIR [--seed N] [--reps N]`.

Exit status is 0 on success, 1 for configuration errors, 2 for runtime or I/O errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from maecsim.config import ConfigError, parse_config
from maecsim.metrics import summary_row, write_per_node, write_summary
from maecsim.netsim import ConfigurationError, ScenarioConfig, build_topology, run_scenario

log = logging.getLogger("maecsim")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2
BASELINES = ("static", "random", "periphery", "maec")
NH_VALUES = tuple(range(1, 8))
NB_VALUES = tuple(range(1, 5))


def load_config(path, seed: int | None = None) -> ScenarioConfig:
    text = Path(path).read_text()
    return parse_config(text, **({"seed": seed} if seed is not None else {}))


def _per_node_name(cfg: ScenarioConfig) -> str:
    return f"per_node_{cfg.strategy}_nh{cfg.n_h}_nb{cfg.n_b}_seed{cfg.seed}.csv"


def format_summary(cfg: ScenarioConfig, s) -> str:
    return (f"{cfg.strategy:<9} n_h={cfg.n_h} n_b={cfg.n_b} seed={cfg.seed} "
            f"avg={s.avg_consumption:.3f} max={s.max_consumption:.3f} min={s.min_consumption:.3f} "
            f"total={s.total_consumption:.3f} delivered={s.delivered} dropped={s.dropped}")


def comparison_table(rows) -> str:
    head = f"{'strategy':<10}{'avg':>12}{'max':>12}{'min':>12}{'total':>14}{'delivered':>11}{'dropped':>9}"
    lines = [head, "-" * len(head)]
    for cfg, s in rows:
        lines.append(f"{cfg.strategy:<10}{s.avg_consumption:>12.3f}{s.max_consumption:>12.3f}"
                     f"{s.min_consumption:>12.3f}{s.total_consumption:>14.3f}"
                     f"{s.delivered:>11}{s.dropped:>9}")
    return "\n".join(lines) + "\n"


def cmd_run(cfg: ScenarioConfig, out: Path, reps: int = 1) -> int:
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for rep in range(reps):
        c = replace(cfg, seed=cfg.seed + rep)
        report = run_scenario(c)
        write_per_node(report, out / _per_node_name(c))
        rows.append(summary_row(report))
        print(format_summary(c, report.summary))
    write_summary(rows, out / "summary.csv")
    return EXIT_OK


def compare_strategies(cfg: ScenarioConfig) -> list[str]:
    return list(BASELINES) + (["comaec"] if cfg.n_b > 1 else [])


def cmd_compare(cfg: ScenarioConfig, out: Path, reps: int = 1) -> int:
    out.mkdir(parents=True, exist_ok=True)
    rows, table_rows = [], []
    for rep in range(reps):
        base = replace(cfg, seed=cfg.seed + rep)
        topo = build_topology(base)  # one deployment shared by every strategy
        for strategy in compare_strategies(base):
            c = replace(base, strategy=strategy)
            report = run_scenario(c, topology=topo)
            write_per_node(report, out / _per_node_name(c))
            rows.append(summary_row(report))
            table_rows.append((c, report.summary))
    write_summary(rows, out / "summary.csv")
    table = comparison_table(table_rows)
    (out / "comparison.txt").write_text(table)
    sys.stdout.write(table)
    return EXIT_OK


def sweep_configs(cfg: ScenarioConfig, kind: str, reps: int) -> list[ScenarioConfig]:
    """Runs in a fixed order. Repetition k uses seed base+k for every cell, so
    strategies at the same (n_h, n_b, k) share a topology."""
    out = []
    if kind == "nh":
        for n_h in NH_VALUES:
            for strategy in BASELINES:
                for rep in range(reps):
                    out.append(replace(cfg, n_h=n_h, strategy=strategy, seed=cfg.seed + rep, hotspots=None))
    elif kind == "nb":
        if not isinstance(cfg.bs_initial_positions, str):
            raise ConfigError("bs_initial_positions", None, "the n_b sweep needs 'random' placement")
        for n_b in NB_VALUES:
            for n_h in NH_VALUES:
                for strategy in ("static", "comaec"):
                    for rep in range(reps):
                        out.append(replace(cfg, n_b=n_b, n_h=n_h, strategy=strategy,
                                           seed=cfg.seed + rep, hotspots=None))
    else:
        raise ValueError(f"unknown sweep kind {kind!r}")
    return out


def _summary_only(cfg: ScenarioConfig):
    return summary_row(run_scenario(cfg))


def cmd_sweep(cfg: ScenarioConfig, out: Path, reps: int = 1, kind: str = "nh", jobs: int = 1) -> int:
    out.mkdir(parents=True, exist_ok=True)
    configs = sweep_configs(cfg, kind, reps)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_summary_only, configs, chunksize=4))
    else:
        rows = [_summary_only(c) for c in configs]
    write_summary(rows, out / "summary.csv")
    log.info("wrote %d rows to %s", len(rows), out / "summary.csv")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="maecsim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (("run", "run one scenario"),
                        ("compare", "run every strategy on one shared deployment"),
                        ("sweep", "hotspot-count or base-station-count sweep")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", required=True, type=Path)
        sp.add_argument("--out", required=True, type=Path)
        sp.add_argument("--seed", type=int, default=None, help="override the config seed")
        sp.add_argument("--reps", type=int, default=1, help="repetitions with seeds seed..seed+reps-1")
        if name == "sweep":
            sp.add_argument("--kind", choices=("nh", "nb"), default="nh")
            sp.add_argument("--jobs", type=int, default=1)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    args = build_parser().parse_args(argv)
    if args.reps < 1:
        print("error: --reps must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config, args.seed)
    except OSError as e:
        print(f"error: cannot read config: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, ConfigurationError) as e:
        print(f"error: {args.config}: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "run":
            return cmd_run(cfg, args.out, args.reps)
        if args.command == "compare":
            return cmd_compare(cfg, args.out, args.reps)
        return cmd_sweep(cfg, args.out, args.reps, args.kind, args.jobs)
    except (ConfigError, ConfigurationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
