"""Experiment files: TOML with flat dotted keys, expanded into a sweep of RunConfigs.

Example::

    n_nodes = 200
    tau = 0.0
    sensor.q = 1e-4
    sensor.r = 0.05
    attack.strategy = "leading"
    attack.n_star = [0, 20, 40, 60]
    runs = 10000
    seed = 20170101

``tau``, ``sensor.q``, ``sensor.r`` and ``attack.n_star`` accept a scalar or a
list; the sweep is their cartesian product.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import tomli

from .adversary import Strategy
from .engine import HYPOTHESES, RunConfig
from .sensor import SensorSpec


class ConfigError(ValueError):
    def __init__(self, message: str, source: str = "", line: Optional[int] = None):
        self.message = message
        self.source = source
        self.line = line
        where = f"{source}:{line}: " if line is not None else (f"{source}: " if source else "")
        super().__init__(where + message)


# key -> (default, kind); kinds checked in _coerce
SCHEMA: dict[str, tuple[Any, str]] = {
    "n_nodes": (200, "int"),
    "tau": ([0.0], "float_list"),
    "sensor.q": ([1e-4], "float_list"),
    "sensor.r": ([0.05], "float_list"),
    "attack.strategy": ("leading", "strategy"),
    "attack.n_star": ([0], "int_list"),
    "attack.forced_bit": (0, "bit"),
    "runs": (10_000, "int"),
    "seed": (0, "int"),
    "hypothesis": ("both", "hypothesis"),
    "worst_fraction": (0.10, "float"),
    "output.dir": ("out", "str"),
    "output.formats": (["csv"], "formats"),
    "limits.max_points": (1000, "int"),
}
FORMATS = ("csv", "svg")


def _flatten(table: dict, prefix: str = "") -> dict[str, Any]:
    flat = {}
    for k, v in table.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            flat.update(_flatten(v, key + "."))
        else:
            flat[key] = v
    return flat


def _key_lines(text: str) -> dict[str, int]:
    """Map each flattened key to the 1-based line that assigns it."""
    lines = {}
    header = ""
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        m = re.fullmatch(r"\[\s*([\w.\s]+?)\s*\]", line)
        if m:
            header = re.sub(r"\s*\.\s*", ".", m.group(1)) + "."
            continue
        m = re.match(r"([\w\s.\"']+?)\s*=", line)
        if m:
            key = re.sub(r"\s*\.\s*", ".", m.group(1)).replace('"', "").replace("'", "")
            lines.setdefault(header + key, no)
    return lines


def _coerce(key: str, value: Any, kind: str) -> Any:
    def bad(what: str) -> ConfigError:
        return ConfigError(f"{key}: expected {what}, got {value!r}")

    def num(v):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise bad("a number")
        return float(v)

    def integer(v):
        if isinstance(v, bool) or not isinstance(v, int):
            raise bad("an integer")
        return v

    if kind == "int":
        return integer(value)
    if kind == "float":
        return num(value)
    if kind in ("float_list", "int_list"):
        items = value if isinstance(value, list) else [value]
        if not items:
            raise ConfigError(f"{key}: sweep axis must not be empty")
        conv = num if kind == "float_list" else integer
        return [conv(v) for v in items]
    if kind == "bit":
        if integer(value) not in (0, 1):
            raise bad("0 or 1")
        return value
    if kind == "str":
        if not isinstance(value, str):
            raise bad("a string")
        return value
    if kind == "strategy":
        try:
            return Strategy(value).value
        except ValueError:
            raise bad("one of " + ", ".join(s.value for s in Strategy)) from None
    if kind == "hypothesis":
        if value not in HYPOTHESES:
            raise bad("one of " + ", ".join(HYPOTHESES))
        return value
    if kind == "formats":
        items = value if isinstance(value, list) else [value]
        if any(f not in FORMATS for f in items):
            raise bad("formats from " + ", ".join(FORMATS))
        return list(items)
    raise AssertionError(kind)


@dataclass
class ExperimentSpec:
    values: dict[str, Any]
    source: str = "<defaults>"
    overrides: dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    def axes(self) -> dict[str, list]:
        return {k: self.values[k] for k in ("sensor.q", "sensor.r", "tau", "attack.n_star")}

    def n_points(self) -> int:
        n = 1
        for axis in self.axes().values():
            n *= len(axis)
        return n

    def points(self) -> list[RunConfig]:
        v = self.values
        out = []
        for q, r, tau, n_star in itertools.product(v["sensor.q"], v["sensor.r"], v["tau"], v["attack.n_star"]):
            out.append(
                RunConfig(
                    n_nodes=v["n_nodes"],
                    sensor=SensorSpec(q=q, r=r),
                    tau=tau,
                    strategy=Strategy(v["attack.strategy"]),
                    n_star=n_star,
                    forced_bit=v["attack.forced_bit"],
                    n_runs=v["runs"],
                    seed=v["seed"],
                    hypothesis=v["hypothesis"],
                )
            )
        return out


def parse_override(item: str) -> tuple[str, Any]:
    """``key=value`` with the value read as a TOML value (bare words become strings)."""
    if "=" not in item:
        raise ConfigError(f"override {item!r} is not of the form key=value", "--set")
    key, raw = (s.strip() for s in item.split("=", 1))
    try:
        value = tomli.loads(f"v = {raw}")["v"]
    except tomli.TOMLDecodeError:
        value = raw
    return key, value


def load_spec(path: Optional[str | Path] = None, overrides: Optional[dict[str, Any]] = None,
              text: Optional[str] = None) -> ExperimentSpec:
    source = str(path) if path is not None else "<string>"
    if text is None:
        if path is None:
            text = ""
            source = "<defaults>"
        else:
            try:
                text = Path(path).read_text(encoding="utf-8")
            except OSError as exc:
                raise ConfigError(f"cannot read spec file: {exc.strerror}", source) from None
    try:
        raw = _flatten(tomli.loads(text))
    except tomli.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(str(exc), source, int(m.group(1)) if m else None) from None
    lines = _key_lines(text)

    values = {k: default for k, (default, _) in SCHEMA.items()}
    layers = [(raw, source, lines), (overrides or {}, "--set", {})]
    for layer, src, where in layers:
        for key, value in layer.items():
            if key not in SCHEMA:
                raise ConfigError(f"unknown key {key!r}", src, where.get(key))
            try:
                values[key] = _coerce(key, value, SCHEMA[key][1])
            except ConfigError as exc:
                raise ConfigError(exc.message, src, where.get(key)) from None

    spec = ExperimentSpec(values=values, source=source, overrides=dict(overrides or {}))
    _validate(spec, lines)
    return spec


def _validate(spec: ExperimentSpec, lines: dict[str, int]) -> None:
    v = spec.values

    def fail(key: str, message: str):
        src = "--set" if key in spec.overrides else spec.source
        raise ConfigError(f"{key}: {message}", src, None if key in spec.overrides else lines.get(key))

    if v["n_nodes"] < 1:
        fail("n_nodes", "must be at least 1")
    if v["runs"] < 1:
        fail("runs", "must be at least 1")
    if not 0 <= v["seed"] < 2**64:
        fail("seed", "must be a non-negative 64-bit integer")
    if not 0.0 < v["worst_fraction"] <= 1.0:
        fail("worst_fraction", "must lie in (0, 1]")
    for q in v["sensor.q"]:
        if not 0.0 <= q < 0.5:
            fail("sensor.q", f"{q!r} outside [0, 0.5)")
    for r in v["sensor.r"]:
        if not 0.0 < r <= 1.0:
            fail("sensor.r", f"{r!r} outside (0, 1]")
    for n_star in v["attack.n_star"]:
        if not 0 <= n_star <= v["n_nodes"]:
            fail("attack.n_star", f"{n_star} outside 0..{v['n_nodes']}")
    if spec.n_points() > v["limits.max_points"]:
        fail("limits.max_points", f"sweep has {spec.n_points()} points, limit is {v['limits.max_points']}")
