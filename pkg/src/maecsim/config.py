"""Flat `key = value` scenario files.

    # comments run to end of line
    strategy = maec
    field = 750 x 750
    bs_initial_positions = 100,200; 600,400     # or: random
    hotspots = 300,300,80; 500,100,60           # optional, x,y,radius each
    bs_speed = unlimited                        # or meters per tick

Keys are the ScenarioConfig field names. Absent keys take the defaults.
"""

from __future__ import annotations

import dataclasses
from typing import Any, Callable

from maecsim.geometry import Field, Point
from maecsim.metrics import fmt
from maecsim.netsim import ConfigurationError, Hotspot, ScenarioConfig


class ConfigError(ValueError):
    def __init__(self, key: str | None, line: int | None, msg: str):
        self.key, self.line = key, line
        where = f"line {line}: " if line is not None else ""
        what = f"{key}: " if key else ""
        super().__init__(f"{where}{what}{msg}")


def _int(text: str) -> int:
    return int(text)


def _float(text: str) -> float:
    v = float(text)
    if v != v or v in (float("inf"), float("-inf")):
        raise ValueError("must be finite")
    return v


def _field(text: str) -> Field:
    w, h = text.lower().replace("×", "x").split("x")
    return Field(_float(w), _float(h))


def _points(text: str) -> tuple[Point, ...] | str:
    if text.strip().lower() == "random":
        return "random"
    out = []
    for chunk in text.split(";"):
        x, y = chunk.split(",")
        out.append(Point(_float(x), _float(y)))
    return tuple(out)


def _hotspots(text: str) -> tuple[Hotspot, ...] | None:
    if text.strip().lower() == "none":
        return None
    out = []
    for chunk in text.split(";"):
        x, y, rad = chunk.split(",")
        out.append(Hotspot(Point(_float(x), _float(y)), _float(rad)))
    return tuple(out)


def _speed(text: str) -> float | None:
    return None if text.strip().lower() == "unlimited" else _float(text)


def _strategy(text: str) -> str:
    return text.strip().lower()


PARSERS: dict[str, Callable[[str], Any]] = {
    "field": _field,
    "node_count": _int,
    "comm_radius": _float,
    "initial_energy": _float,
    "n_h": _int,
    "hotspot_radius": _float,
    "hotspots": _hotspots,
    "packets_per_source": _int,
    "send_rate": _float,
    "strategy": _strategy,
    "n_b": _int,
    "bs_initial_positions": _points,
    "discovery_interval": _int,
    "moving_interval": _int,
    "bs_speed": _speed,
    "baseline_step": _float,
    "e_tx": _float,
    "e_rx": _float,
    "e_ctrl": _float,
    "seed": _int,
}
assert set(PARSERS) == {f.name for f in dataclasses.fields(ScenarioConfig)}


def parse_config(text: str, **overrides) -> ScenarioConfig:
    values: dict[str, Any] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(None, lineno, f"expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in PARSERS:
            raise ConfigError(key, lineno, "unknown key")
        if key in values:
            raise ConfigError(key, lineno, f"duplicate key (first set on line {lines[key]})")
        try:
            values[key] = PARSERS[key](value)
        except (ValueError, ConfigurationError) as e:
            raise ConfigError(key, lineno, f"bad value {value!r} ({e})") from None
        lines[key] = lineno
    values.update(overrides)
    try:
        return ScenarioConfig(**values)
    except ConfigurationError as e:
        key = getattr(e, "key", None)
        raise ConfigError(key, lines.get(key), str(e).split(": ", 1)[-1]) from None


def dump_config(cfg: ScenarioConfig) -> str:
    out = []
    for f in dataclasses.fields(cfg):
        v = getattr(cfg, f.name)
        if f.name == "field":
            text = f"{fmt(v.width)} x {fmt(v.height)}"
        elif f.name == "bs_initial_positions":
            text = v if isinstance(v, str) else "; ".join(f"{fmt(p.x)},{fmt(p.y)}" for p in v)
        elif f.name == "hotspots":
            if v is None:
                continue
            text = "; ".join(f"{fmt(h.center.x)},{fmt(h.center.y)},{fmt(h.radius)}" for h in v)
        elif f.name == "bs_speed":
            text = "unlimited" if v is None else fmt(v)
        else:
            text = fmt(v)
        out.append(f"{f.name} = {text}")
    return "\n".join(out) + "\n"
