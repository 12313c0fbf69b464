"""Run summaries and the two CSV result formats."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, TextIO

PER_NODE_HEADER = ("node_id", "x", "y", "consumed", "residual", "percent",
                   "sent", "forwarded", "dropped")
SUMMARY_KEYS = ("strategy", "n_h", "n_b", "seed")


@dataclass(frozen=True)
class Summary:
    avg_consumption: float
    max_consumption: float
    min_consumption: float
    total_consumption: float
    avg_consumption_percent: float
    delivered: int
    dropped: int


SUMMARY_HEADER = SUMMARY_KEYS + tuple(f.name for f in fields(Summary))


def summarize(ledger, initial_energy: float) -> Summary:
    consumed = ledger.consumed
    total = sum(consumed)
    avg = total / len(consumed)
    delivered = sum(ledger.sent) - sum(ledger.dropped)
    return Summary(
        avg_consumption=avg,
        max_consumption=max(consumed),
        min_consumption=min(consumed),
        total_consumption=total,
        avg_consumption_percent=avg / initial_energy if initial_energy > 0 else 0.0,
        delivered=delivered,
        dropped=sum(ledger.dropped),
    )


def fmt(v) -> str:
    # repr gives the shortest string that round-trips a float
    return repr(float(v)) if isinstance(v, float) else str(v)


def _open(sink, fn):
    if isinstance(sink, (str, Path)):
        path = Path(sink)
        try:
            with open(path, "w", newline="") as fh:
                fn(fh)
        except OSError as e:
            raise OSError(f"could not write {path}: {e}") from e
    else:
        fn(sink)


def per_node_rows(report) -> list[tuple]:
    led = report.ledger
    init = report.config.initial_energy
    rows = []
    for n in report.nodes:
        c = led.consumed[n.id]
        rows.append((n.id, n.position.x, n.position.y, c, init - c,
                     c / init if init > 0 else 0.0,
                     led.sent[n.id], led.forwarded[n.id], led.dropped[n.id]))
    return rows


def write_per_node(report, sink) -> None:
    def go(fh: TextIO):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PER_NODE_HEADER)
        for row in per_node_rows(report):
            w.writerow([fmt(v) for v in row])
    _open(sink, go)


def summary_row(report) -> tuple:
    cfg = report.config
    s = report.summary
    return (cfg.strategy, cfg.n_h if cfg.hotspots is None else len(cfg.hotspots),
            cfg.n_b, cfg.seed) + tuple(asdict(s).values())


def write_summary(reports: Iterable, sink) -> None:
    rows = [r if isinstance(r, tuple) else summary_row(r) for r in reports]

    def go(fh: TextIO):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    _open(sink, go)


def _num(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_per_node(source) -> list[tuple]:
    text = Path(source).read_text() if isinstance(source, (str, Path)) else source.read()
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != PER_NODE_HEADER:
        raise ValueError(f"unexpected per-node header {header}")
    return [tuple(_num(v) for v in row) for row in reader]


def read_summary(source) -> list[tuple[tuple, Summary]]:
    """Rows as ((strategy, n_h, n_b, seed), Summary)."""
    text = Path(source).read_text() if isinstance(source, (str, Path)) else source.read()
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != SUMMARY_HEADER:
        raise ValueError(f"unexpected summary header {header}")
    out = []
    for row in reader:
        key = (row[0], int(row[1]), int(row[2]), int(row[3]))
        vals = [_num(v) for v in row[4:]]
        s = Summary(*[float(v) for v in vals[:5]], int(vals[5]), int(vals[6]))
        out.append((key, s))
    return out


def summarize_table(rows: Iterable[tuple]) -> Summary:
    """Independent recomputation of a Summary from parsed per-node rows."""
    rows = list(rows)
    consumed = [r[3] for r in rows]
    sent = sum(r[6] for r in rows)
    dropped = sum(r[8] for r in rows)
    avg = sum(consumed) / len(consumed)
    pct = sum(r[5] for r in rows) / len(rows)
    return Summary(avg, max(consumed), min(consumed), sum(consumed), pct, sent - dropped, dropped)
