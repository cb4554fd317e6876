"""Sweep configuration: dataclass, TOML loading and validation.

Example file::

    [model]
    n_env = 30                      # integer or list of integers

    [ensemble]
    mean = 0.5
    std = 0.5

    [grid]
    t = { start = 0.0, stop = 10.0, num = 200 }   # or an explicit list
    f = [0.2]                       # fragment fractions; or frag = [6] (sizes)
    theta = [0.7853981633974483]
    q = [0.0]

    [run]
    realizations = 10
    master_seed = 0
    quantities = ["qfi_closed", "qfi_thermo"]
    workers = 1
    emit = "all"                    # all | realizations | aggregate

    [output]
    path = "out.csv"                # "-" for stdout
    format = "csv"                  # csv | json

Unknown keys anywhere are rejected.
"""

from __future__ import annotations

import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from ..errors import ConfigError, DomainError
from ..oracle import MAX_QUBITS
from ..spinstar import GaussianCouplingSpec, fragment_size_from_fraction

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger(__name__)

QUANTITIES = (
    "qfi_closed",
    "qfi_thermo",
    "qfi_oracle",
    "precision_finite",
    "precision_thermo",
    "coherence",
    "tau_f",
    "tau_y",
)
EMIT_MODES = ("all", "realizations", "aggregate")
FORMATS = ("csv", "json")

_SCHEMA = {
    "model": {"n_env"},
    "ensemble": {"mean", "std"},
    "grid": {"t", "f", "frag", "theta", "q"},
    "run": {"realizations", "master_seed", "quantities", "workers", "emit"},
    "output": {"path", "format"},
}


@dataclass(frozen=True)
class SweepConfig:
    n_env: tuple[int, ...]
    times: tuple[float, ...]
    thetas: tuple[float, ...] = (math.pi / 4,)
    qs: tuple[float, ...] = (0.0,)
    fractions: Optional[tuple[float, ...]] = None
    frag_sizes: Optional[tuple[int, ...]] = None
    ensemble: GaussianCouplingSpec = field(default_factory=GaussianCouplingSpec)
    realizations: int = 1
    master_seed: int = 0
    quantities: tuple[str, ...] = ("qfi_closed",)
    workers: int = 1
    emit: str = "all"
    output_path: Optional[str] = None
    output_format: str = "csv"

    def __post_init__(self):
        validate(self)

    def fragment_sizes(self, n: int) -> list[int]:
        """Fragment sizes for environment size ``n``, in grid order."""
        if self.frag_sizes is not None:
            return list(self.frag_sizes)
        sizes = []
        for f in self.fractions:
            k = fragment_size_from_fraction(f, n)
            if not math.isclose(k / n, f, rel_tol=0, abs_tol=1e-12):
                log.info("fragment fraction f=%g at N=%d rounds to |F|=%d (f=%g)", f, n, k, k / n)
            sizes.append(k)
        return sizes


def _fail(msg: str):
    raise ConfigError(msg)


def validate(cfg: SweepConfig) -> None:
    for name in ("n_env", "times", "thetas", "qs"):
        if len(getattr(cfg, name)) == 0:
            _fail(f"grid axis '{name}' is empty")
    if (cfg.fractions is None) == (cfg.frag_sizes is None):
        _fail("exactly one of 'f' and 'frag' must be given")
    if cfg.fractions is not None:
        if len(cfg.fractions) == 0:
            _fail("grid axis 'f' is empty")
        if any(not 0 <= f <= 1 for f in cfg.fractions):
            _fail("fragment fractions must lie in [0, 1]")
    if cfg.frag_sizes is not None:
        if len(cfg.frag_sizes) == 0:
            _fail("grid axis 'frag' is empty")
        if any(k < 0 or k > min(cfg.n_env) for k in cfg.frag_sizes):
            _fail(f"fragment sizes must lie in [0, {min(cfg.n_env)}]")
    if any(n < 1 for n in cfg.n_env):
        _fail("n_env must be >= 1")
    if any(not (t >= 0 and math.isfinite(t)) for t in cfg.times):
        _fail("times must be finite and >= 0")
    if any(not 0 <= q < 1 for q in cfg.qs):
        _fail("q must lie in [0, 1)")
    if cfg.realizations < 1:
        _fail("realizations must be >= 1")
    if cfg.workers < 1:
        _fail("workers must be >= 1")
    if not cfg.quantities:
        _fail("no quantities requested")
    unknown = [q for q in cfg.quantities if q not in QUANTITIES]
    if unknown:
        _fail(f"unknown quantities {unknown}; choose from {list(QUANTITIES)}")
    if len(set(cfg.quantities)) != len(cfg.quantities):
        _fail("duplicate quantities")
    if cfg.emit not in EMIT_MODES:
        _fail(f"emit must be one of {EMIT_MODES}")
    if cfg.output_format not in FORMATS:
        _fail(f"format must be one of {FORMATS}")
    if "qfi_oracle" in cfg.quantities:
        if max(cfg.n_env) + 1 > MAX_QUBITS:
            _fail(f"qfi_oracle needs n_env + 1 <= {MAX_QUBITS}")
        if any(not 0 < th < math.pi / 2 for th in cfg.thetas):
            _fail("qfi_oracle needs every theta strictly inside (0, pi/2)")
    needs_j2 = {"qfi_thermo", "tau_f", "tau_y"} & set(cfg.quantities)
    if needs_j2 and not cfg.ensemble.second_moment > 0:
        _fail(f"{sorted(needs_j2)} need a positive <J^2>")
    if "precision_thermo" in cfg.quantities and cfg.ensemble.mean == 0:
        _fail("precision_thermo is not available for zero-mean couplings")


def _axis(value: Any, name: str, cast=float) -> tuple:
    if isinstance(value, dict):
        extra = set(value) - {"start", "stop", "num"}
        if extra or not {"start", "stop", "num"} <= set(value):
            _fail(f"range for '{name}' needs exactly start, stop, num")
        return tuple(cast(x) for x in np.linspace(value["start"], value["stop"], int(value["num"])))
    if isinstance(value, (list, tuple)):
        return tuple(cast(x) for x in value)
    return (cast(value),)


def config_from_dict(data: dict, base_dir: Optional[Path] = None) -> SweepConfig:
    for section, body in data.items():
        if section not in _SCHEMA:
            _fail(f"unknown section [{section}]")
        if not isinstance(body, dict):
            _fail(f"[{section}] must be a table")
        extra = set(body) - _SCHEMA[section]
        if extra:
            _fail(f"unknown keys in [{section}]: {sorted(extra)}")

    model = data.get("model", {})
    ens = data.get("ensemble", {})
    grid = data.get("grid", {})
    run = data.get("run", {})
    out = data.get("output", {})
    if "n_env" not in model:
        _fail("[model] n_env is required")
    if "t" not in grid:
        _fail("[grid] t is required")

    path = out.get("path")
    if path not in (None, "-") and base_dir is not None and not Path(path).is_absolute():
        path = str(base_dir / path)
    try:
        return SweepConfig(
            n_env=_axis(model["n_env"], "n_env", int),
            times=_axis(grid["t"], "t"),
            thetas=_axis(grid.get("theta", math.pi / 4), "theta"),
            qs=_axis(grid.get("q", 0.0), "q"),
            fractions=_axis(grid["f"], "f") if "f" in grid else None,
            frag_sizes=_axis(grid["frag"], "frag", int) if "frag" in grid else None,
            ensemble=GaussianCouplingSpec(float(ens.get("mean", 0.5)), float(ens.get("std", 0.5))),
            realizations=int(run.get("realizations", 1)),
            master_seed=int(run.get("master_seed", 0)),
            quantities=tuple(run.get("quantities", ("qfi_closed",))),
            workers=int(run.get("workers", 1)),
            emit=str(run.get("emit", "all")),
            output_path=path,
            output_format=str(out.get("format", "csv")),
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed value: {exc}") from exc


def load_config(path) -> SweepConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    return config_from_dict(data, base_dir=path.parent)
