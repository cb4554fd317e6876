"""Disorder-averaged parameter sweeps.

Every realization index r draws its couplings with ``derive_seed(master_seed, r)``,
so each realization can be reproduced on its own. Realizations are the unit
of parallel work; rows are reassembled in a fixed order, and aggregates are
computed in the main process over realizations in index order, so output does
not depend on the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import observables, oracle, qfi, spinstar
from ..observables import ObservableSpec
from .config import SweepConfig

KEY_COLUMNS = ("n_env", "t", "f", "frag_size", "theta", "q", "realization_index", "seed", "master_seed")
AGGREGATE_INDEX = -1


@dataclass
class SweepRow:
    n_env: Optional[int]
    t: float
    f: Optional[float]
    frag_size: Optional[int]
    theta: Optional[float]
    q: Optional[float]
    realization_index: int
    seed: Optional[int]
    master_seed: Optional[int]
    values: dict = field(default_factory=dict)
    stds: dict = field(default_factory=dict)

    @property
    def is_aggregate(self) -> bool:
        return self.realization_index == AGGREGATE_INDEX

    def cell(self) -> tuple:
        return (self.n_env, self.t, self.frag_size, self.theta, self.q)


def columns(quantities) -> list[str]:
    return list(KEY_COLUMNS) + list(quantities) + [f"{q}_std" for q in quantities]


def row_to_dict(row: SweepRow, quantities) -> dict:
    d = {k: getattr(row, k) for k in KEY_COLUMNS}
    for q in quantities:
        d[q] = row.values.get(q)
    for q in quantities:
        d[f"{q}_std"] = row.stds.get(q)
    return d


def _cells(cfg: SweepConfig):
    """Grid cells in lexicographic axis order: n_env, t, fragment, theta, q."""
    for n in cfg.n_env:
        sizes = cfg.fragment_sizes(n)
        for it, t in enumerate(cfg.times):
            for k in sizes:
                for th in cfg.thetas:
                    for q in cfg.qs:
                        yield n, it, t, k, th, q


def _grids(cfg: SweepConfig, n: int, couplings) -> dict:
    """Closed-form arrays indexed [time index, |F| - 1] for one realization."""
    wanted = set(cfg.quantities)
    times = np.asarray(cfg.times)
    g = {}
    if "qfi_closed" in wanted:
        g["qfi_closed"] = qfi.qfi_closed_form_grid(times, couplings)
    if "coherence" in wanted:
        g["coherence"] = np.prod(np.cos(spinstar.phases(times, couplings)), axis=1)
    if "precision_finite" in wanted:
        g["precision_finite"] = {
            (th, q): observables.precision_finite_grid(th, times, couplings, ObservableSpec(q))
            for th in cfg.thetas
            for q in cfg.qs
        }
    return g


def _evaluate(cfg: SweepConfig, grids: dict, couplings, n, it, t, k, th, q) -> dict:
    ens = cfg.ensemble
    f = k / n
    vals = {}
    for name in cfg.quantities:
        if name == "qfi_closed":
            v = grids[name][it, k - 1] if k > 0 else 0.0
        elif name == "qfi_thermo":
            v = qfi.qfi_thermodynamic(t, f, ens.second_moment).value if k > 0 else 0.0
        elif name == "qfi_oracle":
            v = oracle.oracle_qfi(th, t, couplings, k).value
        elif name == "precision_finite":
            v = grids[name][(th, q)][it, k - 1] if k > 0 else 0.0
        elif name == "precision_thermo":
            v = (observables.precision_thermodynamic(th, t, f, ens.mean, ObservableSpec(q)).precision
                 if k > 0 else 0.0)
        elif name == "coherence":
            v = grids[name][it]
        elif name == "tau_f":
            v = qfi.fragment_qfi_time(f, ens.second_moment) if k > 0 else math.inf
        elif name == "tau_y":
            v = qfi.timescales(th, f, (ens.mean, ens.second_moment)).tau_y if k > 0 else math.inf
        else:  # pragma: no cover - rejected by config validation
            raise KeyError(name)
        vals[name] = float(v)
    return vals


def _run_realization(args) -> list[SweepRow]:
    cfg, r = args
    seed = spinstar.derive_seed(cfg.master_seed, r)
    rows = []
    cache = {}
    for n, it, t, k, th, q in _cells(cfg):
        if n not in cache:
            couplings = spinstar.sample_couplings(cfg.ensemble, n, seed)
            cache[n] = (couplings, _grids(cfg, n, couplings))
        couplings, grids = cache[n]
        vals = _evaluate(cfg, grids, couplings, n, it, t, k, th, q)
        rows.append(SweepRow(n, float(t), k / n, k, float(th), float(q), r, seed, cfg.master_seed, vals))
    return rows


def _aggregate(per_realization: list[list[SweepRow]], cfg: SweepConfig) -> list[SweepRow]:
    out = []
    n_cells = len(per_realization[0])
    for i in range(n_cells):
        members = [rows[i] for rows in per_realization]
        first = members[0]
        means, stds = {}, {}
        for name in cfg.quantities:
            x = np.array([m.values[name] for m in members], dtype=float)
            if np.all(x == x[0]):
                means[name], stds[name] = float(x[0]), 0.0
                continue
            # population std; clip guards the mean against summation rounding
            means[name] = float(np.clip(math.fsum(x) / x.size, x.min(), x.max()))
            stds[name] = float(np.std(x))
        out.append(SweepRow(first.n_env, first.t, first.f, first.frag_size, first.theta, first.q,
                            AGGREGATE_INDEX, None, cfg.master_seed, means, stds))
    return out


def run_sweep(cfg: SweepConfig, workers: Optional[int] = None) -> list[SweepRow]:
    """Evaluate every grid cell for every realization, then append aggregates.

    Per-realization rows are ordered by cell (lexicographic over axes) and
    then by realization index; aggregate rows follow in cell order.
    """
    workers = cfg.workers if workers is None else workers
    tasks = [(cfg, r) for r in range(cfg.realizations)]
    if workers > 1 and cfg.realizations > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, cfg.realizations // (4 * workers))
            per_realization = list(pool.map(_run_realization, tasks, chunksize=chunk))
    else:
        per_realization = [_run_realization(task) for task in tasks]

    rows: list[SweepRow] = []
    if cfg.emit in ("all", "realizations"):
        n_cells = len(per_realization[0])
        for i in range(n_cells):
            rows.extend(rows_r[i] for rows_r in per_realization)
    if cfg.emit in ("all", "aggregate"):
        rows.extend(_aggregate(per_realization, cfg))
    return rows


def fig1b_curves(tau_ratios=(1.0, 2.0, 5.0), num: int = 200, t_max: float = 5.0) -> list[dict]:
    """Thermodynamic QFI and S_y precision against t / tau_F.

    For each ratio tau_Y / tau_F the precision curve is 4 / (1 + (tau_Y / t)^2).
    Returns flat records with columns ``tau_ratio, t_over_tau_f, qfi_thermo,
    precision_thermo``.
    """
    if any(not r > 0 for r in tau_ratios):
        raise ValueError("tau ratios must be positive")
    x = np.linspace(0.0, t_max, num)
    qfi_curve = qfi.F_MAX * -np.expm1(-(x**2))
    rows = []
    for ratio in tau_ratios:
        prec = observables.precision_s_y_curve(x / ratio)
        for xi, a, b in zip(x, qfi_curve, prec):
            rows.append({"tau_ratio": float(ratio), "t_over_tau_f": float(xi),
                         "qfi_thermo": float(a), "precision_thermo": float(b)})
    return rows
