"""Invariant and oracle-equivalence checks, runnable from the CLI.

Each check returns a ``Check`` with the worst observed error and the
tolerance it was held to. Functions are looked up through their modules at
call time so a patched implementation is what gets verified.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import linalg, observables, oracle, qfi, spinstar
from .observables import ObservableSpec
from .spinstar import GaussianCouplingSpec, ModelPoint

ENSEMBLE = GaussianCouplingSpec(0.5, 0.5)
VERIFY_SEED = 0


@dataclass
class Check:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    kind: str = "deterministic"
    detail: str = ""
    seconds: float = 0.0


@dataclass
class Report:
    scope: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "scope": self.scope,
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": sum(not c.passed for c in self.checks),
            "checks": [asdict(c) for c in self.checks],
        }


def sample_points(n_values, max_frag, per_combo, seed=VERIFY_SEED):
    """Seeded (point, couplings) samples with theta in [0.1, pi/2 - 0.1], t in [0.1, 3]."""
    rng = np.random.default_rng(seed)
    for n in n_values:
        for k in range(1, min(max_frag, n) + 1):
            for _ in range(per_combo):
                th = float(rng.uniform(0.1, math.pi / 2 - 0.1))
                t = float(rng.uniform(0.1, 3.0))
                cs = spinstar.sample_couplings(ENSEMBLE, n, int(rng.integers(2**63)))
                yield ModelPoint(th, t, cs, k)


def _check(name, errors, tol, kind="deterministic", detail=""):
    worst = float(np.max(errors)) if len(errors) else 0.0
    ok = bool(np.isfinite(worst) and worst <= tol)
    return Check(name, ok, worst, tol, kind, detail)


def _timed(fn, *args) -> list:
    t0 = _time.perf_counter()
    out = fn(*args)
    out = out if isinstance(out, list) else [out]
    elapsed = round(_time.perf_counter() - t0, 3)
    for c in out:
        c.seconds = elapsed
    return out


def check_states(points):
    errs = [
        np.max(np.abs(spinstar.fragment_state(p).rho
                      - oracle.oracle_fragment_state(p.theta, p.time, p.couplings, p.fragment_size)))
        for p in points
    ]
    return _check("oracle_fragment_states", errs, 1e-10)


def check_system_states(points):
    errs = [
        np.max(np.abs(spinstar.system_state(p.theta, p.time, p.couplings)
                      - oracle.oracle_system_state(p.theta, p.time, p.couplings)))
        for p in points
    ]
    return _check("oracle_system_state_coherence", errs, 1e-10)


def check_qfi_oracle(points):
    errs = [abs(qfi.qfi_closed_form(p).value
                - oracle.oracle_qfi(p.theta, p.time, p.couplings, p.fragment_size).value) for p in points]
    return _check("oracle_qfi", errs, 1e-6, detail="central difference, step 1e-6")


def check_qfi_generic(points):
    errs = []
    for p in points:
        fs = spinstar.fragment_state(p)
        errs.append(abs(qfi.qfi_closed_form(p).value - qfi.qfi_generic(fs.rho, fs.drho_dtheta).value))
    return _check("generic_qfi_vs_closed_form", errs, 1e-8)


def check_fragment_invariants(points):
    errs = []
    for p in points:
        fs = spinstar.fragment_state(p)
        lam = linalg.eig_hermitian(fs.rho).eigenvalues
        big = lam[lam > 1e-12]
        errs.append(max(
            linalg.hermiticity_residual(fs.rho),
            abs(np.trace(fs.rho) - 1),
            max(0.0, -lam[0]),
            linalg.hermiticity_residual(fs.drho_dtheta),
            abs(np.trace(fs.drho_dtheta)),
            0.0 if big.size <= 2 else 1.0,
            abs(big.sum() - 1),
        ))
    return _check("fragment_state_invariants", errs, 1e-10, detail="hermitian, unit trace, PSD, rank <= 2")


def check_drho_finite_difference(points):
    h = 1e-6
    errs = []
    for p in points:
        up = spinstar.fragment_state(ModelPoint(p.theta + h, p.time, p.couplings, p.fragment_size)).rho
        dn = spinstar.fragment_state(ModelPoint(p.theta - h, p.time, p.couplings, p.fragment_size)).rho
        errs.append(np.max(np.abs((up - dn) / (2 * h) - spinstar.fragment_state(p).drho_dtheta)))
    return _check("drho_vs_finite_difference", errs, 1e-8)


def check_theta_independence(points):
    errs = []
    for p in points:
        other = ModelPoint(math.pi / 2 - p.theta * 0.5, p.time, p.couplings, p.fragment_size)
        a, b = (spinstar.fragment_state(x) for x in (p, other))
        errs.append(abs(qfi.qfi_generic(a.rho, a.drho_dtheta).value - qfi.qfi_generic(b.rho, b.drho_dtheta).value))
    return _check("qfi_theta_independence", errs, 1e-8)


def check_sld(points):
    errs, var_errs = [], []
    for p in points:
        fs = spinstar.fragment_state(p)
        L = qfi.sld(p).full
        rho = fs.rho
        fisher = qfi.qfi_closed_form(p).value
        errs.append(max(
            np.max(np.abs(fs.drho_dtheta - (rho @ L + L @ rho) / 2)),
            abs(np.trace(rho @ L @ L).real - fisher),
            abs(np.trace(rho @ L)),
            linalg.hermiticity_residual(L),
        ))
        if fisher > 1e-3:
            x = qfi.optimal_observable(p)
            mean = np.trace(rho @ x).real
            var = np.trace(rho @ x @ x).real - mean**2
            var_errs.append(max(abs(var * fisher - 1), abs(mean - p.theta)))
    return [_check("sld_identities", errs, 1e-8),
            _check("optimal_observable_variance", var_errs, 1e-6)]


def check_system_qfi():
    cs = spinstar.sample_couplings(ENSEMBLE, 8, spinstar.derive_seed(VERIFY_SEED, 0))
    errs = [abs(qfi.system_qfi(th, t, cs).value - 4.0)
            for th in np.arange(0.1, 1.51, 0.2) for t in np.arange(0.0, 3.01, 0.5)]
    return _check("system_qfi_constant", errs, 1e-8)


def check_moments(points):
    errs = []
    for p in points:
        for q in (0.0, 0.3, 0.7):
            spec = ObservableSpec(q)
            a = observables.aq_moments(p, spec)
            b = oracle.oracle_observable_moments(p.theta, p.time, p.couplings, p.fragment_size, spec)
            errs.append(max(abs(a[0] - b[0]), abs(a[1] - b[1])))
    return _check("aq_moments_vs_oracle", errs, 1e-9)


def check_sx_sz_no_information(points):
    h = 1e-5
    errs = []
    for p in points:
        k = p.fragment_size
        sx, sz = oracle.collective(oracle.SIGMA_X, k), oracle.collective(oracle.SIGMA_Z, k)
        up = spinstar.fragment_state(ModelPoint(p.theta + h, p.time, p.couplings, k)).rho
        dn = spinstar.fragment_state(ModelPoint(p.theta - h, p.time, p.couplings, k)).rho
        d = (up - dn) / (2 * h)
        errs.append(max(abs(np.trace(sx @ d)), abs(np.trace(sz @ d))))
    return _check("sx_sz_carry_no_information", errs, 1e-10)


def check_cramer_rao(points):
    errs = []
    for p in points:
        fisher = qfi.qfi_closed_form(p).value
        for q in (0.0, 0.3, 0.7):
            prec = observables.precision_finite(p, ObservableSpec(q)).precision
            errs.append(max(0.0, prec - fisher))
    return _check("cramer_rao_bound", errs, 1e-9)


def check_bounds_and_monotonicity(points):
    errs = []
    for p in points:
        grid = qfi.qfi_closed_form_grid([p.time], p.couplings)[0]
        errs.append(max(0.0, float(np.max(grid)) - 4.0))
        errs.append(max(0.0, -float(np.min(np.diff(grid)))))
    return _check("qfi_bound_and_fragment_monotonicity", errs, 1e-9)


def check_short_time_law():
    errs = []
    for f in (0.1, 0.2, 0.5, 1.0):
        tau_f = qfi.fragment_qfi_time(f, ENSEMBLE.second_moment)
        for t in np.linspace(1e-3, 0.1, 25) * tau_f:
            ratio = qfi.qfi_thermodynamic(t, f, ENSEMBLE.second_moment).value / (4 * (t / tau_f) ** 2)
            errs.append(max(0.0, 0.99 - ratio, ratio - 1.0))
        for th in (0.3, math.pi / 4, 1.2):
            tau_y = qfi.timescales(th, f, (ENSEMBLE.mean, ENSEMBLE.second_moment)).tau_y
            for t in np.linspace(1e-3, 0.1, 25) * tau_y:
                prec = observables.precision_thermodynamic(th, t, f, ENSEMBLE.mean).precision
                ratio = prec / (4 * (t / tau_y) ** 2)
                errs.append(max(0.0, 0.99 - ratio, ratio - 1.0))
    return _check("short_time_quadratic_law", errs, 0.0)


def check_timescales():
    errs = []
    for mean, std in ((0.5, 0.5), (0.5, 0.0), (1.0, 0.2), (-0.3, 0.4)):
        for f in (0.05, 0.2, 1.0):
            for th in (0.2, math.pi / 4, 1.3):
                ts = qfi.timescales(th, f, (mean, mean**2 + std**2))
                errs.append(abs(ts.tau_f - ts.tau_d / math.sqrt(2 * f)))
                errs.append(max(0.0, ts.tau_f - ts.tau_y))
    return _check("timescale_relations", errs, 1e-12)


def check_gamma_limit():
    n = 10_000
    cs = spinstar.CouplingSet(np.full(n, 0.5), 0.5, 0.25)
    gamma = spinstar.decoherence_exponent(1.0, cs)
    limit = spinstar.gamma_thermodynamic(1.0, 0.25)
    return _check("decoherence_exponent_large_n", [abs(gamma - limit) / limit], 0.01)


def check_thermodynamic_limits():
    n, f = 2000, 0.2
    k = spinstar.fragment_size_from_fraction(f, n)
    cs = spinstar.sample_couplings(ENSEMBLE, n, spinstar.derive_seed(VERIFY_SEED, 0))
    times = np.linspace(0.0, 3.0, 200)[1:]
    qfi_n = qfi.qfi_closed_form_grid(times, cs)[:, k - 1]
    qfi_inf = np.array([qfi.qfi_thermodynamic(t, f, ENSEMBLE.second_moment).value for t in times])
    sel = times >= 0.5
    prec_n = observables.precision_finite_grid(math.pi / 4, times[sel], cs)[:, k - 1]
    prec_inf = np.array([observables.precision_thermodynamic(math.pi / 4, t, f, ENSEMBLE.mean).precision
                         for t in times[sel]])
    sample_mean = float(np.mean(cs.values[:k]))
    return [
        _check("thermodynamic_qfi_n2000", np.abs(qfi_n - qfi_inf) / qfi_inf, 0.02, kind="statistical",
               detail="single realization, f=0.2, t in (0, 3]"),
        _check("thermodynamic_precision_n2000", np.abs(prec_n - prec_inf) / prec_inf, 0.05, kind="statistical",
               detail=f"single realization, theta=pi/4, t in [0.5, 3]; fragment sample <J>={sample_mean:.4f} "
                      f"vs ensemble {ENSEMBLE.mean}"),
    ]


def check_q_optimality():
    errs = []
    for th in (0.3, math.pi / 4):
        for t in (0.5, 2.0):
            base = observables.precision_thermodynamic(th, t, 0.2, 0.5, ObservableSpec(0.0)).variance_theta
            for q in (0.1, 0.5, 0.9):
                v = observables.precision_thermodynamic(th, t, 0.2, 0.5, ObservableSpec(q)).variance_theta
                errs.append(max(0.0, base - v))
    return _check("q0_minimizes_thermodynamic_variance", errs, 1e-12)


def run(scope: str = "fast") -> Report:
    if scope not in ("fast", "full"):
        raise ValueError(f"scope must be 'fast' or 'full', got {scope!r}")
    if scope == "fast":
        pts = list(sample_points((4, 6, 8), 4, 8))
    else:
        pts = list(sample_points((4, 6, 8, 10), 4, 50))
    small = [p for p in pts if p.fragment_size <= 3]

    report = Report(scope)
    for fn, args in (
        (check_states, (pts,)),
        (check_system_states, (pts,)),
        (check_qfi_oracle, (pts,)),
        (check_qfi_generic, (pts,)),
        (check_fragment_invariants, (pts,)),
        (check_drho_finite_difference, (pts,)),
        (check_theta_independence, (pts,)),
        (check_moments, (pts,)),
        (check_sx_sz_no_information, (small,)),
        (check_cramer_rao, (pts,)),
        (check_bounds_and_monotonicity, (pts,)),
        (check_system_qfi, ()),
        (check_short_time_law, ()),
        (check_timescales, ()),
        (check_gamma_limit, ()),
        (check_q_optimality, ()),
        (check_sld, (pts,)),
        (check_thermodynamic_limits, ()),
    ):
        report.checks.extend(_timed(fn, *args))
    return report
