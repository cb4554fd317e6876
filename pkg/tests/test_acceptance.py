"""Acceptance criteria, each run at its stated tolerance and runtime budget.

Every criterion prints one ``PASS``/``FAIL`` line. Run standalone with
``python3 tests/test_acceptance.py`` or through pytest, which repeats the
lines in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from spinstar_metrology import observables, oracle, qfi, spinstar, verify
from spinstar_metrology.observables import ObservableSpec
from spinstar_metrology.spinstar import GaussianCouplingSpec, ModelPoint
from spinstar_metrology.sweep import columns, output, presets, row_to_dict, run_sweep
from spinstar_metrology.sweep.runner import fig1b_curves

MASTER_SEED = 0
ENSEMBLE = GaussianCouplingSpec(0.5, 0.5)
RESULTS: list[str] = []


def matrix():
    """N in {4, 6, 8, 10}, |F| in 1..4, 50 seeded (theta, t) points each."""
    return list(verify.sample_points((4, 6, 8, 10), 4, 50, seed=MASTER_SEED))


def report(label, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'}  {label}: {detail}"
    RESULTS.append(line)
    print(line)
    return passed


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def _half_anticommutator(rho, lmat):
    return 0.5 * (rho @ lmat + lmat @ rho)


# criteria ---------------------------------------------------------------

def criterion_1():
    pts = matrix()

    def work():
        return max(float(np.max(np.abs(spinstar.fragment_state(p).rho - oracle.oracle_fragment_state(
            p.theta, p.time, p.couplings, p.fragment_size)))) for p in pts)

    err, secs = timed(work)
    ok = err <= 1e-10 and secs < 10
    return ok, f"{len(pts)} points, max state error {err:.2e} (tol 1e-10), {secs:.2f} s (< 10 s)"


def criterion_2():
    pts = matrix()

    def work():
        e_oracle = e_generic = 0.0
        for p in pts:
            closed = qfi.qfi_closed_form(p).value
            e_oracle = max(e_oracle, abs(closed - oracle.oracle_qfi(p.theta, p.time, p.couplings,
                                                                    p.fragment_size).value))
            fs = spinstar.fragment_state(p)
            e_generic = max(e_generic, abs(closed - qfi.qfi_generic(fs.rho, fs.drho_dtheta).value))
        return e_oracle, e_generic

    (e_o, e_g), secs = timed(work)
    ok = e_o <= 1e-6 and e_g <= 1e-8 and secs < 20
    return ok, f"oracle {e_o:.2e} (tol 1e-6), generic {e_g:.2e} (tol 1e-8), {secs:.2f} s (< 20 s)"


def criterion_3():
    cs = spinstar.sample_couplings(ENSEMBLE, 8, spinstar.derive_seed(MASTER_SEED, 0))
    thetas = np.arange(0.1, 1.5 + 1e-9, 0.2)
    times = np.arange(0.0, 3.0 + 1e-9, 0.5)

    def work():
        return max(abs(qfi.system_qfi(th, t, cs).value - 4.0) for th in thetas for t in times)

    err, secs = timed(work)
    ok = err <= 1e-8 and secs < 5
    return ok, f"{thetas.size}x{times.size} grid, max |F_sys - 4| {err:.2e} (tol 1e-8), {secs:.2f} s (< 5 s)"


def criterion_4():
    residual = trace_err = var_err = 0.0
    for p in matrix():
        fs = spinstar.fragment_state(p)
        s = qfi.sld(p)
        lmat = s.full
        fisher = qfi.qfi_closed_form(p).value
        residual = max(residual, float(np.max(np.abs(fs.drho_dtheta - _half_anticommutator(fs.rho, lmat)))))
        trace_err = max(trace_err, abs(np.trace(fs.rho @ lmat @ lmat).real - fisher))
        if fisher > 0:
            x = qfi.optimal_observable(p)
            mean = np.trace(fs.rho @ x).real
            var = np.trace(fs.rho @ x @ x).real - mean**2
            var_err = max(var_err, abs(var * fisher - 1.0))
    ok = residual <= 1e-8 and trace_err <= 1e-8 and var_err <= 1e-6
    return ok, (f"SLD residual {residual:.2e} (tol 1e-8), |Tr[rho L^2] - F| {trace_err:.2e} (tol 1e-8), "
                f"|Var(X) F - 1| {var_err:.2e} (tol 1e-6)")


def criterion_5():
    worst = -math.inf
    n_checked = 0
    for cfg in (presets.fig2(MASTER_SEED), presets.plateau(MASTER_SEED, realizations=200, emit="all")):
        for r in run_sweep(cfg):
            if r.is_aggregate:
                continue
            worst = max(worst, r.values["precision_finite"] - r.values["qfi_closed"],
                        r.values["precision_thermo"] - r.values["qfi_thermo"])
            n_checked += 1
    for p in matrix():
        f = qfi.qfi_closed_form(p).value
        for q in (0.0, 0.3, 0.7):
            worst = max(worst, observables.precision_finite(p, ObservableSpec(q)).precision - f)
            n_checked += 1
    ok = worst <= 1e-9
    return ok, f"{n_checked} rows/points, max(precision - QFI) {worst:.2e} (tol 1e-9)"


def _fig2_n50():
    cfg = presets.fig2(MASTER_SEED)
    n = 50
    k = spinstar.fragment_size_from_fraction(0.2, n)
    times = np.asarray(cfg.times)
    tau_f = qfi.fragment_qfi_time(0.2, ENSEMBLE.second_moment)
    curves = []
    for r in range(cfg.realizations):
        cs = spinstar.sample_couplings(ENSEMBLE, n, spinstar.derive_seed(MASTER_SEED, r))
        curves.append(qfi.qfi_closed_form_grid(times, cs)[:, k - 1])
    thermo = np.array([qfi.qfi_thermodynamic(t, 0.2, ENSEMBLE.second_moment).value for t in times])
    return times, np.array(curves), thermo, tau_f, math.sqrt(n)


def criterion_6a():
    (times, curves, _, tau_f, t_max), secs = timed(_fig2_n50)
    window = (times > tau_f) & (times < t_max)
    low = float(curves[:, window].min())
    ok = low >= 3.5 and secs < 5
    return ok, (f"min closed-form QFI over {window.sum()} grid times in (tau_F, sqrt N) across 10 realizations "
                f"= {low:.4f} (need >= 3.5), {secs:.2f} s (< 5 s)")


def criterion_6b():
    (times, curves, thermo, tau_f, _), secs = timed(_fig2_n50)
    early = times < tau_f
    lo, hi = curves[:, early].min(axis=0), curves[:, early].max(axis=0)
    outside = float(np.max(np.maximum(lo - thermo[early], thermo[early] - hi)))
    ok = outside <= 1e-12 and secs < 5
    return ok, (f"thermodynamic curve vs realization envelope on {early.sum()} grid times t < tau_F, "
                f"max excursion {max(outside, 0.0):.2e}, {secs:.2f} s (< 5 s)")


def criterion_7():
    cfg = presets.plateau(MASTER_SEED)
    rows, secs = timed(lambda: run_sweep(cfg))
    rows = sorted(rows, key=lambda r: r.frag_size)
    f = np.array([r.f for r in rows])
    mean = np.array([r.values["qfi_closed"] for r in rows])
    plateau_min = float(mean[f >= 0.3 - 1e-12].min())
    steps = np.diff(mean)
    ok = plateau_min >= 3.8 and bool(np.all(steps >= 0)) and secs < 60
    return ok, (f"min mean QFI for f >= 0.3 = {plateau_min:.4f} (need >= 3.8), "
                f"smallest step in f {steps.min():.2e} (need >= 0), {secs:.2f} s (< 60 s)")


def _n2000():
    n, f, th = 2000, 0.2, math.pi / 4
    k = spinstar.fragment_size_from_fraction(f, n)
    cs = spinstar.sample_couplings(ENSEMBLE, n, spinstar.derive_seed(MASTER_SEED, 0))
    times = np.linspace(0.0, 3.0, 61)[1:]
    qfi_n = qfi.qfi_closed_form_grid(times, cs)[:, k - 1]
    qfi_inf = np.array([qfi.qfi_thermodynamic(t, f, ENSEMBLE.second_moment).value for t in times])
    prec_n = observables.precision_finite_grid(th, times, cs)[:, k - 1]
    prec_inf = np.array([observables.precision_thermodynamic(th, t, f, ENSEMBLE.mean).precision for t in times])
    return np.abs(qfi_n - qfi_inf) / qfi_inf, np.abs(prec_n - prec_inf) / prec_inf


def criterion_8a():
    (dev, _), secs = timed(_n2000)
    worst = float(dev.max())
    ok = worst <= 0.02 and secs < 5
    return ok, f"N=2000, t in (0, 3]: max relative QFI deviation {worst:.4f} (tol 0.02), {secs:.2f} s (< 5 s)"


def criterion_8b():
    (_, dev), secs = timed(_n2000)
    worst = float(dev.max())
    ok = worst <= 0.05 and secs < 5
    return ok, (f"N=2000, theta=pi/4, t in (0, 3]: max relative S_y precision deviation {worst:.4f} "
                f"(tol 0.05), {secs:.2f} s (< 5 s)")


def criterion_9():
    f, th = 0.2, math.pi / 4
    ts = qfi.timescales(th, f, (ENSEMBLE.mean, ENSEMBLE.second_moment))
    worst = 0.0
    for t in np.linspace(0.0, 0.1 * ts.tau_f, 51)[1:]:
        ratio = qfi.qfi_thermodynamic(t, f, ENSEMBLE.second_moment).value / (4 * (t / ts.tau_f) ** 2)
        worst = max(worst, abs(ratio - 1))
    for t in np.linspace(0.0, 0.1 * ts.tau_y, 51)[1:]:
        ratio = observables.precision_thermodynamic(th, t, f, ENSEMBLE.mean).precision / (4 * (t / ts.tau_y) ** 2)
        worst = max(worst, abs(ratio - 1))
    ok = worst <= 0.01
    return ok, f"max relative deviation from the quadratic law {worst:.4f} (tol 0.01)"


def criterion_10():
    pts = matrix()
    moment_err = 0.0
    for p in pts:
        for q in (0.0, 0.3, 0.7):
            spec = ObservableSpec(q)
            got = observables.aq_moments(p, spec)
            ref = oracle.oracle_observable_moments(p.theta, p.time, p.couplings, p.fragment_size, spec)
            moment_err = max(moment_err, abs(got[0] - ref[0]), abs(got[1] - ref[1]))
    h = 1e-5
    slope = 0.0
    for p in pts:
        k = p.fragment_size
        up = spinstar.fragment_state(ModelPoint(p.theta + h, p.time, p.couplings, k)).rho
        dn = spinstar.fragment_state(ModelPoint(p.theta - h, p.time, p.couplings, k)).rho
        for op in (oracle.SIGMA_X, oracle.SIGMA_Z):
            s = oracle.collective(op, k)
            slope = max(slope, abs(np.trace((up - dn) @ s).real / (2 * h)))
    ok = moment_err <= 1e-9 and slope <= 1e-10
    return ok, f"moment error {moment_err:.2e} (tol 1e-9), max |d<S_x,z>/dtheta| {slope:.2e} (tol 1e-10)"


def _render_preset(name, workers=1):
    if name == "fig1b":
        cols = ["tau_ratio", "t_over_tau_f", "qfi_thermo", "precision_thermo"]
        return output.render(fig1b_curves(presets.TAU_RATIOS), cols, "csv")
    cfg = presets.SWEEP_PRESETS[name](MASTER_SEED)
    rows = run_sweep(cfg, workers=workers)
    return output.render([row_to_dict(r, cfg.quantities) for r in rows], columns(cfg.quantities), "csv")


def criterion_11():
    identical = all(_render_preset(name) == _render_preset(name) for name in presets.PRESETS)
    cfg = presets.plateau(MASTER_SEED)
    a, b = run_sweep(cfg, workers=1), run_sweep(cfg, workers=4)
    diff = max(abs(x.values[q] - y.values[q]) + abs(x.stds[q] - y.stds[q])
               for x, y in zip(a, b) for q in cfg.quantities)
    ok = identical and len(a) == len(b) and diff <= 1e-12
    return ok, f"byte-identical reruns of all presets: {identical}; plateau workers 1 vs 4 max diff {diff:.1e}"


CRITERIA = [
    ("1 oracle equivalence (states)", criterion_1),
    ("2 oracle equivalence (QFI)", criterion_2),
    ("3 system QFI constancy", criterion_3),
    ("4 SLD identities", criterion_4),
    ("5 Cramer-Rao everywhere", criterion_5),
    ("6a saturation band tau_F < t < sqrt(N)", criterion_6a),
    ("6b thermodynamic curve inside envelope", criterion_6b),
    ("7 plateau reproduction", criterion_7),
    ("8a thermodynamic QFI at N=2000", criterion_8a),
    ("8b thermodynamic S_y precision at N=2000", criterion_8b),
    ("9 short-time quadratic law", criterion_9),
    ("10 moment-algebra equivalence", criterion_10),
    ("11 determinism", criterion_11),
]


@pytest.mark.parametrize("label,fn", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(label, fn):
    passed, detail = fn()
    assert report(f"criterion {label}", passed, detail), detail


if __name__ == "__main__":
    failures = sum(not report(f"criterion {label}", *fn()) for label, fn in CRITERIA)
    raise SystemExit(1 if failures else 0)
