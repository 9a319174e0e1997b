"""Run configuration: a strict JSON document.

Top-level sections are ``spin``, ``hubbard``, ``sweep``, ``leakage``,
``output`` and ``workers``; every key is checked against the known fields and
anything unknown is rejected. Units are fixed (ueV, ns, rad).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .dynamics import AVERAGE, SINGLE
from .errors import ConfigError
from .hubbard import HubbardParams
from .spin import Rotation3, UniformDevice

MAX_AXES = 3
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class OutputSpec:
    path: str | None = None
    format: str = "csv"


@dataclass(frozen=True)
class LeakageSpec:
    mode: str = AVERAGE
    state: int | None = None


@dataclass(frozen=True)
class RunConfig:
    spin: UniformDevice = field(default_factory=UniformDevice)
    hubbard: HubbardParams | None = None
    sweep: tuple[Axis, ...] = ()
    leakage: LeakageSpec = field(default_factory=LeakageSpec)
    output: OutputSpec = field(default_factory=OutputSpec)
    workers: int = 1

    def axes(self) -> dict[str, np.ndarray]:
        return {ax.name: ax.values() for ax in self.sweep}


def _reject_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ConfigError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _check_keys(section: str, data, allowed) -> dict:
    if not isinstance(data, dict):
        raise ConfigError(f"section {section!r} must be an object")
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in {section!r}: {', '.join(unknown)}")
    return data


def _number(where: str, x, allow_inf: bool = False) -> float:
    if allow_inf and x in ("inf", "infinity"):
        return math.inf
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise ConfigError(f"{where} must be a finite number, got {x!r}")
    return float(x)


def _vector(where: str, x, length: int) -> list[float]:
    if not isinstance(x, list) or len(x) != length:
        raise ConfigError(f"{where} must be a list of {length} numbers")
    return [_number(f"{where}[{i}]", v) for i, v in enumerate(x)]


def _rotation(where: str, data) -> Rotation3:
    data = _check_keys(where, data, ("axis", "angle"))
    if set(data) != {"axis", "angle"}:
        raise ConfigError(f"{where} needs both 'axis' and 'angle'")
    axis = _vector(f"{where}.axis", data["axis"], 3)
    if np.linalg.norm(axis) == 0:
        raise ConfigError(f"{where}.axis must be non-zero")
    return Rotation3.about(axis, _number(f"{where}.angle", data["angle"]))


def _parse_spin(data) -> UniformDevice:
    names = [f.name for f in fields(UniformDevice)]
    data = _check_keys("spin", data, names)
    kw = {}
    for k, v in data.items():
        kw[k] = None if (k == "phase" and v is None) else _number(f"spin.{k}", v)
    return UniformDevice(**kw)


def _parse_hubbard(data) -> HubbardParams:
    names = [f.name for f in fields(HubbardParams)]
    data = _check_keys("hubbard", data, names)
    kw = {}
    for k, v in data.items():
        where = f"hubbard.{k}"
        if k == "eps":
            kw[k] = tuple(_vector(where, v, 4))
        elif k in ("u", "u_ca"):
            kw[k] = None if (k == "u_ca" and v is None) else _number(where, v, allow_inf=True)
        elif k == "single_sc":
            if not isinstance(v, bool):
                raise ConfigError(f"{where} must be true or false")
            kw[k] = v
        elif k in ("rot1", "rot2", "rot_ca"):
            kw[k] = _rotation(where, v)
        elif k == "h":
            if isinstance(v, list) and v and isinstance(v[0], list):
                if len(v) != 4:
                    raise ConfigError(f"{where} needs four Zeeman vectors")
                kw[k] = np.array([_vector(f"{where}[{i}]", row, 3) for i, row in enumerate(v)])
            else:
                kw[k] = np.array(_vector(where, v, 4))
        else:
            kw[k] = _number(where, v)
    try:
        return HubbardParams(**kw)
    except ValueError as exc:
        raise ConfigError(f"hubbard: {exc}") from exc


def _parse_sweep(data) -> tuple[Axis, ...]:
    if not isinstance(data, list):
        raise ConfigError("sweep must be a list of axes")
    if len(data) > MAX_AXES:
        raise ConfigError(f"at most {MAX_AXES} sweep axes are supported")
    axes = []
    for i, ax in enumerate(data):
        where = f"sweep[{i}]"
        ax = _check_keys(where, ax, ("name", "start", "stop", "count"))
        missing = {"name", "start", "stop", "count"} - set(ax)
        if missing:
            raise ConfigError(f"{where} is missing {', '.join(sorted(missing))}")
        count = ax["count"]
        if isinstance(count, bool) or not isinstance(count, int) or count < 1:
            raise ConfigError(f"{where}.count must be a positive integer")
        if not isinstance(ax["name"], str):
            raise ConfigError(f"{where}.name must be a string")
        axes.append(Axis(ax["name"], _number(f"{where}.start", ax["start"]),
                         _number(f"{where}.stop", ax["stop"]), count))
    names = [a.name for a in axes]
    if len(set(names)) != len(names):
        raise ConfigError("sweep axes must have distinct names")
    return tuple(axes)


def _parse_leakage(data) -> LeakageSpec:
    data = _check_keys("leakage", data, ("mode", "state"))
    mode = data.get("mode", AVERAGE)
    if mode not in (AVERAGE, SINGLE):
        raise ConfigError(f"leakage.mode must be {AVERAGE!r} or {SINGLE!r}")
    state = data.get("state")
    if mode == SINGLE and (isinstance(state, bool) or state not in range(4)):
        raise ConfigError("leakage.state must be a computational index 0..3 in single mode")
    return LeakageSpec(mode, state)


def _parse_output(data) -> OutputSpec:
    data = _check_keys("output", data, ("path", "format"))
    fmt = data.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError(f"output.format must be one of {FORMATS}")
    path = data.get("path")
    if path is not None and not isinstance(path, str):
        raise ConfigError("output.path must be a string")
    return OutputSpec(path, fmt)


def parse_config(doc: dict) -> RunConfig:
    doc = _check_keys("config", doc, ("spin", "hubbard", "sweep", "leakage", "output", "workers"))
    workers = doc.get("workers", 1)
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise ConfigError("workers must be a positive integer")
    return RunConfig(
        spin=_parse_spin(doc.get("spin", {})),
        hubbard=_parse_hubbard(doc["hubbard"]) if "hubbard" in doc else None,
        sweep=_parse_sweep(doc.get("sweep", [])),
        leakage=_parse_leakage(doc.get("leakage", {})),
        output=_parse_output(doc.get("output", {})),
        workers=workers,
    )


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return parse_config(doc)
