import json

import numpy as np
import pytest
from click.testing import CliRunner

from spinstar_metrology import spinstar, verify
from spinstar_metrology.cli import main


@pytest.fixture(scope="module")
def fast_report():
    return verify.run("fast")


def _names(report):
    return {c.name: c for c in report.checks}


DETERMINISTIC = [
    "oracle_fragment_states",
    "oracle_system_state_coherence",
    "oracle_qfi",
    "generic_qfi_vs_closed_form",
    "fragment_state_invariants",
    "drho_vs_finite_difference",
    "qfi_theta_independence",
    "aq_moments_vs_oracle",
    "sx_sz_carry_no_information",
    "cramer_rao_bound",
    "qfi_bound_and_fragment_monotonicity",
    "system_qfi_constant",
    "short_time_quadratic_law",
    "timescale_relations",
    "decoherence_exponent_large_n",
    "q0_minimizes_thermodynamic_variance",
    "sld_identities",
]


@pytest.mark.parametrize("name", DETERMINISTIC)
def test_deterministic_check_passes(fast_report, name):
    check = _names(fast_report)[name]
    assert check.kind == "deterministic"
    assert check.passed, (check.max_error, check.tolerance)


def test_report_lists_statistical_checks(fast_report):
    stats = [c for c in fast_report.checks if c.kind == "statistical"]
    assert {c.name for c in stats} == {"thermodynamic_qfi_n2000", "thermodynamic_precision_n2000"}


def test_report_is_json_serializable(fast_report):
    d = json.loads(json.dumps(fast_report.as_dict()))
    assert d["n_checks"] == len(fast_report.checks)
    assert d["passed"] == fast_report.passed
    assert d["n_failed"] == sum(not c["passed"] for c in d["checks"])


def test_fast_scope_runtime(fast_report):
    assert sum(c.seconds for c in fast_report.checks) < 30


def test_full_scope_covers_n10_and_four_spin_fragments():
    pts = list(verify.sample_points((4, 6, 8, 10), 4, 50))
    assert {(p.n_env, p.fragment_size) for p in pts} >= {(10, 4), (4, 1)}
    assert len(pts) == 4 * 4 * 50


def test_sample_points_deterministic():
    a = [(p.theta, p.time) for p in verify.sample_points((4,), 2, 3)]
    b = [(p.theta, p.time) for p in verify.sample_points((4,), 2, 3)]
    assert a == b


def test_unknown_scope():
    with pytest.raises(ValueError):
        verify.run("medium")


def test_tampered_closed_form_fails(monkeypatch):
    original = spinstar.omega

    def flipped(j, time, n_env, sign=1):
        return original(j, time, n_env, -sign)

    monkeypatch.setattr(spinstar, "omega", flipped)
    report = verify.run("fast")
    failed = {c.name for c in report.checks if not c.passed}
    assert "oracle_fragment_states" in failed
    assert not report.passed

    result = CliRunner().invoke(main, ["verify", "--scope", "fast"])
    assert result.exit_code == 2
    assert json.loads(result.output)["passed"] is False


def test_tampered_coherence_fails(monkeypatch):
    monkeypatch.setattr(spinstar, "coherence_factor", lambda t, cs: float(np.prod(np.cos(t * cs.values))))
    failed = {c.name for c in verify.run("fast").checks if not c.passed}
    assert "oracle_system_state_coherence" in failed
