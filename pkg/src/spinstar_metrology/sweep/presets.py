"""Parameter sets that regenerate the data behind the published figures.

Time grids use 200 uniform points. The fig2 and plateau presets evaluate the
S_y precision at theta = pi/4, where tau_Y is shortest.
"""

from __future__ import annotations

import math

import numpy as np

from ..spinstar import GaussianCouplingSpec
from .config import SweepConfig

PRESETS = ("fig1b", "fig2", "fig3-heatmap", "plateau")
TAU_RATIOS = (1.0, 2.0, 5.0)
ENSEMBLE = GaussianCouplingSpec(mean=0.5, std=0.5)


def _grid(start, stop, num=200):
    return tuple(float(x) for x in np.linspace(start, stop, num))


def fig2(seed: int = 0, **overrides) -> SweepConfig:
    """QFI and S_y precision against time, N in {25, 50}, f = 0.2, 10 realizations."""
    kw = dict(
        n_env=(25, 50),
        times=_grid(0.0, 10.0),
        fractions=(0.2,),
        thetas=(math.pi / 4,),
        qs=(0.0,),
        ensemble=ENSEMBLE,
        realizations=10,
        master_seed=seed,
        quantities=("qfi_closed", "qfi_thermo", "precision_finite", "precision_thermo"),
    )
    kw.update(overrides)
    return SweepConfig(**kw)


def fig3_heatmap(seed: int = 0, **overrides) -> SweepConfig:
    """QFI over (|F|, t) for one N = 30 realization and the thermodynamic surface.

    The tau_f column gives the t = tau_F(f) marker line; the other marker
    is t = sqrt(n_env).
    """
    kw = dict(
        n_env=(30,),
        times=_grid(0.0, 10.0),
        frag_sizes=tuple(range(1, 31)),
        thetas=(math.pi / 4,),
        ensemble=ENSEMBLE,
        realizations=1,
        master_seed=seed,
        quantities=("qfi_closed", "qfi_thermo", "tau_f"),
        emit="realizations",
    )
    kw.update(overrides)
    return SweepConfig(**kw)


def plateau(seed: int = 0, **overrides) -> SweepConfig:
    """Mean and spread of QFI and S_y precision against f at t = 3, N = 30, 2000 realizations."""
    kw = dict(
        n_env=(30,),
        times=(3.0,),
        frag_sizes=tuple(range(1, 31)),
        thetas=(math.pi / 4,),
        qs=(0.0,),
        ensemble=ENSEMBLE,
        realizations=2000,
        master_seed=seed,
        quantities=("qfi_closed", "qfi_thermo", "precision_finite", "precision_thermo"),
        emit="aggregate",
    )
    kw.update(overrides)
    return SweepConfig(**kw)


SWEEP_PRESETS = {"fig2": fig2, "fig3-heatmap": fig3_heatmap, "plateau": plateau}
