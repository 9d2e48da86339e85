import json
import math

import pytest

from gtquant import algebra as alg
from gtquant import verify
from gtquant.algebra import AlgebraElement
from gtquant.phasespace import PhasePoint
from gtquant.verify import DEFAULT_TOLERANCES, SUITES, SuiteConfig, SuiteReport, run_all, run_suite

QUICK = SuiteConfig(trials=20)


@pytest.fixture(scope="module")
def quick_run():
    return run_all(QUICK)


def test_config_validation():
    with pytest.raises(ValueError):
        SuiteConfig(trials=0)
    with pytest.raises(ValueError):
        SuiteConfig(tolerances={"nonsense": 1.0})
    with pytest.raises(ValueError):
        SuiteConfig(tolerances={"bch": -1.0})
    with pytest.raises(ValueError):
        SuiteConfig(tolerances={"bch": math.nan})


def test_tolerance_resolution():
    cfg = SuiteConfig(tolerances={"commutators": 1e-3, "commutators.abelian": 1e-20})
    assert cfg.tol("commutators.abelian") == 1e-20
    assert cfg.tol("commutators.nontrivial") == 1e-3
    assert cfg.tol("bch.slope_deficit") == DEFAULT_TOLERANCES["bch.slope_deficit"]


def test_every_check_has_a_tolerance(quick_run):
    for r in quick_run.reports:
        checks = [n.split(":")[0] for n in r.notes if ": residual=" in n]
        assert checks
        for c in checks:
            assert f"{r.suite}.{c}" in DEFAULT_TOLERANCES


def test_reports_in_fixed_order_and_pass(quick_run):
    assert [r.suite for r in quick_run.reports] == list(SUITES)
    assert len(quick_run.reports) == 11
    assert quick_run.passed
    assert quick_run.runtime > 0
    for r in quick_run.reports:
        assert r.passed == (r.max_residual <= r.tolerance)
        assert r.trials >= 1


def test_suite_selection_and_unknown():
    res = run_all(QUICK, ["bch", "group_axioms", "bch"])
    assert [r.suite for r in res.reports] == ["group_axioms", "bch"]
    with pytest.raises(KeyError):
        run_all(QUICK, ["nope"])
    with pytest.raises(KeyError):
        run_suite("nope", QUICK)


def test_determinism_and_independence_from_selection(quick_run):
    again = run_all(QUICK, workers=4)
    assert verify.reports_to_json(again.reports) == verify.reports_to_json(quick_run.reports)
    alone = run_suite("weyl_punctured", QUICK)
    assert alone == quick_run.reports[list(SUITES).index("weyl_punctured")]


def test_seed_changes_residuals(quick_run):
    other = run_all(SuiteConfig(seed=7, trials=20), ["group_axioms"]).reports[0]
    assert other.max_residual != quick_run.reports[0].max_residual or other.notes != quick_run.reports[0].notes


def test_failing_suite_flips_aggregate():
    cfg = SuiteConfig(trials=20, tolerances={"group_axioms.associativity": 1e-30})
    res = run_all(cfg, ["group_axioms", "bch"])
    ga = res.reports[0]
    assert not ga.passed and not res.passed
    assert ga.tolerance == 1e-30
    assert "binding check: associativity" in ga.notes
    assert res.reports[1].passed


def test_json_schema(quick_run):
    data = json.loads(verify.reports_to_json(quick_run.reports))
    assert len(data) == 11
    for item in data:
        assert list(item) == ["suite", "trials", "max_residual", "tolerance", "passed", "notes"]
        assert isinstance(item["trials"], int) and isinstance(item["passed"], bool)
        assert isinstance(item["max_residual"], float) and isinstance(item["notes"], list)


def test_sign_notes_present(quick_run):
    by_name = {r.suite: r for r in quick_run.reports}
    assert any("sign:" in n for n in by_name["momentum_homomorphism"].notes)
    assert any("hbar" in n for n in by_name["commutators"].notes)


def test_identity_elements_give_zero_residuals():
    e = alg.identity()
    res = verify.group_axiom_residuals(e, e, e, AlgebraElement(0, 0, 0, 0), 0.5, -0.25)
    assert all(v == 0.0 for v in res.values())


def test_bch_slope_examples():
    assert verify.bch_slope(AlgebraElement(1, 0, 0, 0), AlgebraElement(0, 1, 0, 0)) is None
    slope = verify.bch_slope(AlgebraElement(1, 0, 0, 0), AlgebraElement(0, 0, 1, 0))
    assert 2.9 <= slope <= 3.1


def test_fd_order_is_two():
    pt = PhasePoint((0.7, 1.2), (0.3, -0.4))
    p = verify.fd_order(AlgebraElement(0.2, 1.0, 1.3, -0.8), pt)
    assert abs(p - 2.0) < 0.05
    # affine-in-t flows (pure translations) are reproduced exactly, order undefined
    assert verify.fd_order(AlgebraElement(1.0, 0.5, 0, 0), pt) is None


def test_report_to_dict_roundtrip():
    r = SuiteReport("x", 3, 1e-13, 1e-12, True, ("a",))
    assert r.to_dict() == {
        "suite": "x", "trials": 3, "max_residual": 1e-13, "tolerance": 1e-12, "passed": True, "notes": ["a"],
    }


def test_nan_residual_fails():
    chk = verify._Checks("bch", SuiteConfig())
    chk.record("slope_deficit", math.nan)
    chk.record("trivial_cases", 0.0)
    assert not chk.report(1).passed
