import pytest

from dgwb.checks import (
    Fail,
    Pass,
    check_module_theorems,
    indecomposable_injectives,
    module_theorem_cases,
    run_check,
)
from dgwb.errors import ResourceLimit, UnsupportedInstance
from dgwb.modules import module_invariants
from dgwb.rings import FpxQuotient, Zmod
from dgwb.suite import INSTANCE_CHECKS
from dgwb.zoo import generate_zoo

ZOO = generate_zoo(11, 6)


@pytest.mark.parametrize("name,check", INSTANCE_CHECKS, ids=[n for n, _ in INSTANCE_CHECKS])
def test_checks_hold_on_sample_instances(name, check):
    for z in ZOO:
        report = check(z)
        assert report.verdict.kind != "fail", report.to_json()
        assert report.digest == z.digest


def _raise(exc):
    def fn():
        raise exc
    return fn


def test_run_check_maps_errors_to_verdicts():
    z = ZOO[0]
    crash = run_check("x", z, _raise(ZeroDivisionError("boom")))
    assert crash.verdict.kind == "fail" and crash.verdict.reason == "error"
    assert crash.verdict.witness["instance"] == z.to_json()
    assert "ZeroDivisionError" in crash.verdict.witness["error"]
    limit = run_check("x", z, _raise(ResourceLimit("too deep")))
    assert (limit.verdict.kind, limit.verdict.reason) == ("skipped", "ExceedsCutoff")
    unsupported = run_check("x", z, _raise(UnsupportedInstance("no")))
    assert unsupported.verdict.kind == "skipped"


def test_failures_carry_a_rerunnable_witness():
    z = ZOO[1]
    report = run_check("x", z, lambda: (Fail("mismatch", {"left": 1}), {}))
    assert report.verdict.witness == {"left": 1, "instance": z.to_json()}
    assert run_check("x", z, lambda: (Pass(), {})).to_json() == {"check": "x", "instance": z.digest, "verdict": "pass"}


def test_indecomposable_injectives():
    assert [module_invariants(J) for J in indecomposable_injectives(Zmod(12))] == [(4,), (3,)]
    assert len(indecomposable_injectives(FpxQuotient(2, (0, 0, 1)))) == 1


@pytest.mark.parametrize("R,a", [
    (Zmod(4), 2),
    (Zmod(4), 1),
    (Zmod(9), 3),
    (FpxQuotient(2, (0, 0, 1)), FpxQuotient(2, (0, 0, 1))([0, 1])),
])
def test_module_theorem_examples(R, a):
    report = check_module_theorems(R, a)
    assert report.verdict.kind == "pass", report.to_json()


def test_module_theorem_cases_cover_all_elements():
    cases = module_theorem_cases()
    assert len(cases) == 4 + 8 + 9 + 4
    assert all(check_module_theorems(R, a).verdict.kind == "pass" for R, a in cases)
