import json
from fractions import Fraction

import pytest

import oracle
from momentkit import differences as D
from momentkit import scenarios as S
from momentkit.errors import DisagreementError
from momentkit.expr import poly
from momentkit.kernels import parse_kernel
from momentkit.parser import parse


def _observed(rep):
    return {c.name: c.observed for c in rep.claims}


@pytest.mark.parametrize("rst,outcome,witness", [
    ((1, 1, 2), "pass", None),
    ((3, 1, 2), "fail", (71, 0)),
    ((10, 1, 1), "fail", (20, 0)),
])
def test_thm22(rst, outcome, witness):
    rep = S.thm22(*rst)
    assert rep.outcome == outcome
    assert rep.claim("inequality").observed == "pass"
    holds = rep.claim("inequality").details["holds"]
    assert holds == (outcome == "pass")
    if witness:
        w = rep.witnesses()[0]
        assert (w["n"], w["m"]) == witness
        assert "factorization" not in _observed(rep)
    else:
        assert rep.claim("factorization").observed == "pass"


def test_thm22_witness_matches_oracle():
    rep = S.thm22(10, 1, 1)
    e = parse(rep.claim("subnormal").details["sequence"])
    n, m, val = oracle.first_cm_failure(oracle.seq(e, 21), 20)
    w = rep.witnesses()[0]
    assert (w["n"], w["m"], Fraction(w["value"])) == (n, m, val)


def test_thm22_missed_failure_is_inconclusive():
    # the witness lies at order 71, beyond a budget of 50
    rep = S.thm22(3, 1, 2, budget=50)
    assert rep.claim("subnormal").observed == "inconclusive"
    assert rep.outcome == "inconclusive"


def test_thm22_grid_parallel_matches_serial():
    grid = [1, 2, Fraction(1, 2)]
    serial = S.thm22_grid(grid, order=20, budget=80)
    assert S.thm22_grid(grid, order=20, budget=80, jobs=2) == serial
    assert {row[3] for row in serial} <= {"pass", "fail", "inconclusive"}
    assert ("3", "1", "2") not in {row[:3] for row in serial}


def test_prop29_szego():
    rep = S.prop29(parse("k+1"))
    assert rep.outcome == "pass"
    assert _observed(rep) == {"sum_subnormal": "pass", "complement_ca": "pass",
                              "kernel_subnormal": "pass"}
    assert rep.claim("kernel_subnormal").expected == "pass"


def test_prop29_converse_is_not_claimed():
    rep = S.prop29(parse("pow(2)"))
    assert _observed(rep)["sum_subnormal"] == "fail"
    assert (rep.witnesses()[0]["n"], rep.witnesses()[0]["m"]) == (16, 0)
    # K itself is subnormal; the implication makes no prediction here
    assert rep.claim("kernel_subnormal").observed == "pass"
    assert rep.claim("kernel_subnormal").expected is None


def test_prop29_bergman_companion():
    # a_k = (k+1)(k+19/10)*10/19 has real negative roots, so nothing fails
    a = parse("(k+1)*(k+19/10)*10/19")
    rep = S.prop29(a, companion="bergman")
    obs = _observed(rep)
    assert "complement_ca" not in obs
    assert all(c.expected is None for c in rep.claims)
    assert obs["kernel_subnormal"] == "pass"
    b = poly([1, Fraction(19, 10), 1])
    rep = S.prop29(b, companion="bergman")
    assert _observed(rep) == {"sum_subnormal": "pass", "kernel_subnormal": "fail"}
    assert rep.claim("kernel_subnormal").details["decision"]["decision"] == "never-moment"
    with pytest.raises(ValueError):
        S.prop29(b, companion="dirichlet")


@pytest.mark.parametrize("params", [(3, 2, 1), (Fraction(5, 2), 2, 2), (2, 2, 1)])
def test_prop211_inside_hypothesis(params):
    assert S.prop211_hypothesis(*params)
    rep = S.prop211(*params)
    assert rep.outcome == "pass"
    assert all(c.expected == "pass" for c in rep.claims)


def test_prop211_outside_hypothesis():
    rep = S.prop211(Fraction(21, 20), 3, 1)
    assert not rep.params["hypothesis"]
    assert rep.claim("sum_subnormal").expected is None
    assert rep.outcome == "fail"
    w = rep.witnesses()[0]
    assert (w["claim"], w["n"], w["m"]) == ("sum_subnormal", 18, 0)


def test_prop211_lambda_scan():
    lams = [Fraction(21, 20), Fraction(11, 10), 2, 3, 4]
    out = S.prop211_lambda_scan(lams, 3, 1, order=80)
    res = {row["lam"]: row for row in out["rows"]}
    assert res["21/20"]["result"] == "fail" and res["11/10"]["result"] == "fail"
    assert (res["11/10"]["n"], res["11/10"]["m"]) == (58, 2)
    assert res["3"]["result"] == "pass" and res["4"]["result"] == "pass"
    assert out["smallest_failing"] == "21/20"
    assert out["largest_failing"] == "11/10"


def test_prop214():
    rep = S.prop214(parse("k+1"), 1, 2)
    assert rep.outcome == "pass"
    rep = S.prop214(parse("k+1"), 1, 3)
    obs = _observed(rep)
    assert obs["sum_subnormal"] == "pass" and obs["power_ca"] == "fail"
    assert rep.witnesses()[0]["n"] == 2
    rep = S.prop214(parse("k+1"), Fraction(1, 2), Fraction(1, 2))
    assert rep.outcome == "pass"


def test_seq_power():
    assert S.seq_power(parse("k+1"), Fraction(1, 2)) == parse("pow(1/2)")
    assert S.seq_power(parse("poch(3/2,1)"), 2) == parse("poch(3/2,1)^2")
    with pytest.raises(ValueError):
        S.seq_power(parse("poch(3/2,1)"), Fraction(1, 2))


@pytest.mark.parametrize("p,outcome", [(1, "pass"), (2, "pass"), (Fraction(3, 2), "pass"),
                                       (3, "pass"), (Fraction(3, 4), "fail"),
                                       (Fraction(1, 2), "fail")])
def test_thm216(p, outcome):
    rep = S.thm216(p)
    assert rep.outcome == outcome
    assert rep.claim("agreement").observed == "pass"
    assert rep.claim("lommel_sign").observed == outcome


def test_thm216_deep_witnesses():
    w = S.thm216(Fraction(3, 4)).witnesses()[0]
    assert (w["n"], w["m"]) == (238, 0)
    w = S.thm216(Fraction(1, 2)).witnesses()[0]
    assert (w["n"], w["m"]) == (62, 0)


def test_conjecture_screen():
    rep = S.conjecture_screen(parse_kernel("Kr(3)"), parse_kernel("Kst(1,2)"))
    assert rep.label == S.COUNTEREXAMPLE_LABEL
    assert rep.claim("conclusion").observed == "fail"
    assert all(c.observed == "pass" for c in rep.claims if c.name != "conclusion")
    assert rep.to_json()["label"] == S.COUNTEREXAMPLE_LABEL
    for a, b in [("Kp(1)", "Kp(2)"), ("bergman", "bergman")]:
        rep = S.conjecture_screen(parse_kernel(a), parse_kernel(b))
        assert rep.outcome == "pass" and rep.label is None


def test_conjecture_trend_flags_bounded_growth():
    rep = S.conjecture_screen(parse_kernel("szego"), parse_kernel("bergman"))
    assert rep.claim("growth_A").observed == "fail"
    assert rep.label is None


def test_settle_rules():
    assert S._settle("pass", "pass", "x") == "pass"
    assert S._settle("fail", None, "x") == "fail"
    assert S._settle("pass", "fail", "x") == "inconclusive"
    assert S._settle("inconclusive", "pass", "x") == "inconclusive"
    with pytest.raises(DisagreementError):
        S._settle("fail", "pass", "x")


def test_decision_and_differences_disagreement_raises():
    fake = D.Fail(m=0, n=3, value=Fraction(-1))
    with pytest.raises(DisagreementError):
        S._decision_claim("c", "", "", None, [2, 3, 1], fake)


def test_disagreement_surfaces_from_scenarios(monkeypatch):
    # a corrupted difference engine contradicts the guaranteed pass
    monkeypatch.setattr(D, "check_cm", lambda *a, **k: D.Fail(m=0, n=1, value=Fraction(-1)))
    with pytest.raises(DisagreementError):
        S.prop211(3, 2, 1)


@pytest.mark.parametrize("name,args", [
    ("thm22", (3, 1, 2)), ("prop211", (Fraction(5, 2), 2, 2)), ("thm216", (Fraction(1, 2),)),
])
def test_json_is_deterministic(name, args):
    a = json.dumps(S.SCENARIOS[name](*args).to_json(), sort_keys=True)
    b = json.dumps(S.SCENARIOS[name](*args).to_json(), sort_keys=True)
    assert a == b
    js = json.loads(a)
    assert "runtime" not in js
    assert js["caveat"] == D.FINITE_ORDER_CAVEAT
    assert [v["claim"] for v in js["verdicts"]] == [c["name"] for c in js["claims"]]


def test_thm22_full_grid_has_no_disagreement():
    grid = [Fraction(1, 4), Fraction(1, 2), 1, Fraction(3, 2), 2, 3, 4, 5, 7, 10]
    rows = S.thm22_grid(grid, order=30, budget=200)
    assert len(rows) == 1000
    assert all(row[3] != "disagreement" for row in rows)
    outcomes = {row[:3]: row[3] for row in rows}
    assert outcomes[("3", "1", "2")] == "fail"
    assert outcomes[("1", "1", "2")] == "pass"
