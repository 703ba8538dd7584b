from __future__ import annotations

import json

import pytest

from holocoh.generators import canonical_generators
from holocoh.groups import GroupSpec
from holocoh.presentation import holomorph_presentation
from holocoh.report import SCHEMA_VERSION, CheckRecord, VerificationReport
from holocoh.verify import run_target, verify_presentation


@pytest.fixture(scope="module")
def reports():
    return {(r.target, r.group): r for r in run_target("all")}


def get(reports, target, group=None):
    hits = [r for (t, g), r in reports.items() if t == target and (group is None or g == group)]
    assert len(hits) == 1
    return hits[0]


def test_metacyclic_and_dihedral_pass(reports):
    assert get(reports, "prop_2_1_4").verdict
    assert get(reports, "ring_Gz").verdict


def test_inflation_passes_with_a_unique_twisted_tuple(reports):
    r = get(reports, "remark_3_9")
    assert r.verdict
    assert r.check("supplement.twisted").computed == "1: w3=01 c4=0011"
    assert not r.check("supplement.stated").passed


@pytest.mark.parametrize("rho", [3, 4])
def test_holomorph_report_shape(reports, rho):
    r = get(reports, "theorem_1_5", f"Holomorph({rho})")
    assert r.check("hilbert").passed
    for id in ("restrict.N.w1", "restrict.N.w3", "restrict.N.c4", "restrict.A.wz", "restrict.A.wx", "restrict.A.w1"):
        assert r.check(id).passed, id
    # the last stated relation fails for every pinned candidate
    last = [k for k in r.candidates[0].checks if "w3^2" in k]
    assert len(last) == 1
    assert not any(c.checks[last[0]] for c in r.candidates)
    # the degree-three and degree-four restrictions to A are not in the image of restriction
    assert not r.check("image.A.w3").passed and not r.check("image.A.c4").passed
    assert not r.check("restrict.A.w3").passed and not r.check("restrict.A.c4").passed
    assert r.check("supplement.twisted").computed.startswith("4 of 64 pass")
    assert not r.verdict


def test_twisted_presentation_holds_with_full_restrictions():
    named = canonical_generators(GroupSpec.holomorph(3), 8)
    r = verify_presentation(named, holomorph_presentation(3, twisted=True), 8)
    assert r.verdict
    assert {" ".join(f"{k}={v}" for k, v in c.labels.items()) for c in r.passing_candidates} >= {"w3=01 c4=0011"}


def test_json_round_trip(reports):
    r = get(reports, "prop_2_1_4")
    data = json.loads(r.to_json())
    assert data["schema"] == SCHEMA_VERSION
    assert data["verdict"] == "pass"
    assert data["betti"] == data["hilbert"] == [1, 2, 2, 2, 3, 4, 4, 4, 5]
    assert {c["id"] for c in data["checks"]} >= {"hilbert", "restrict.N.w3", "unique.w3"}
    assert set(data["checks"][0]) == {"id", "reference", "inputs", "expected", "computed", "passed", "mandatory"}
    assert "[PASS] prop_2_1_4" in r.to_text()


def test_empty_report_fails():
    assert not VerificationReport("x", "y").verdict


def test_supplementary_checks_do_not_decide():
    r = VerificationReport("x", "y")
    r.add(CheckRecord("a", "ok", {}, "1", "1", True))
    r.add(CheckRecord("b", "extra", {}, "1", "0", False, mandatory=False))
    assert r.verdict and r.failed_checks == []
    assert "(* supplementary" in r.to_text()


def test_unknown_target():
    with pytest.raises(ValueError):
        run_target("nope")
