from pathlib import Path

import pytest

from relgodunov.config import load
from relgodunov.verify import report, run_suite

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.mark.parametrize("name", ["gamma43", "stiff", "polytrope", "double_gamma", "massless_ideal",
                                  "ideal_gas", "tabulated"])
def test_shipped_configs_pass(name):
    results = run_suite(load(CONFIGS / f"{name}.cfg"), samples=8)
    failed = [r.name for r in results if not r.passed]
    assert results and failed == []


def test_acausal_config_fails_expected_checks():
    results = run_suite(load(CONFIGS / "acausal_gamma3.cfg"), samples=8)
    failed = {r.name for r in results if not r.passed}
    assert {"causality", "symmetrizer4-definiteness"} <= failed
    assert "flux4-stress-tensor" not in failed


def test_report_shape():
    results = run_suite(load(CONFIGS / "stiff.cfg"), samples=4)
    rep = report(results, command="verify", label="stiff")
    assert rep["passed"] is True and rep["eos"] == "stiff"
    assert {"name", "max_residual", "tolerance", "passed"} <= set(rep["checks"][0])


def test_seed_changes_samples_not_verdict():
    cfg = load(CONFIGS / "gamma43.cfg")
    a = run_suite(cfg, samples=4, seed=1)
    b = run_suite(cfg, samples=4, seed=2)
    assert [r.name for r in a] == [r.name for r in b]
    assert all(r.passed for r in a + b)
