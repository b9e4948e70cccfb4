import json

from rigidcochains.reports import Check, Report, check


def test_tally_and_rendering():
    rep = Report()
    rep.tally("first", [], 3, seed=5)
    rep.tally("second", [(1, "x")], 3, seed=5)
    rep.tally("third", [], 0, seed=5)
    assert [c.status for c in rep.checks] == ["PASS", "FAIL", "VACUOUS"]
    assert not rep.passed and rep.first_failure().label == "second"
    assert rep.warnings == ["third: no trials requested, vacuous pass"]
    lines = rep.lines().splitlines()
    assert lines[1] == "FAIL second [sampled, 3 trials, seed=5] counterexample=(1, 'x')"
    assert rep.summary() == "2/3 checks passed; first failure: second"
    data = json.loads(rep.to_json())
    assert data["passed"] is False and data["checks"][0]["seed"] == 5


def test_vacuous_counts_as_pass():
    assert Check("x", "VACUOUS").passed
    assert check("y", True, "ignored").counterexample is None
    assert check("z", False, "why").counterexample == "why"
