import json

import pytest

from qmb.ncalg import Presentation
from qmb.qmatrices import hol_mat
from qmb.scalars import Q
from qmb.verify import (
    CHECK_NAMES,
    CheckId,
    check_associativity,
    check_confluence,
    check_pbw_dims,
    default_grid,
    expand,
    run_check,
    run_suite,
)


def corrupted_holomorphic():
    """HolMat(2) with the row rule z[1,2]*z[1,1] -> q^-1 z[1,1]*z[1,2] made commutative.

    Rescaling the single correction term would not do: that family stays
    confluent (two-parameter quantum matrices).
    """
    good = hol_mat(2)
    rules = {k: list(v) for k, v in good.rules.items()}
    key = (good.index["z[1,2]"], good.index["z[1,1]"])
    (word, coef), = rules[key]
    rules[key] = [(word, coef * Q)]
    return Presentation("broken", good.labels, rules, q=Q)


def test_grid_sizes():
    assert len(expand("prop8")) == 10
    assert len(expand("theorem1", n=[2], lambda_max=2)) == 12
    assert len(expand("theorem1", n=[1], lambda_max=3)) == 4
    assert len(expand("lemma_sigma")) == 3
    assert {c.name for c in default_grid()} == set(CHECK_NAMES)


def test_unknown_check_is_rejected():
    with pytest.raises(ValueError):
        expand("bogus")
    with pytest.raises(ValueError):
        CheckId.of("bogus")


def test_single_checks():
    assert run_check(CheckId.of("commutativity_y", n=1)).status == "pass"
    entry = run_check(CheckId.of("pbw_dims", algebra="HolMat", n=2, max_degree=4))
    assert entry.status == "pass" and entry.witness is None
    for e in run_suite(expand("theorem1", n=[1], lambda_max=3)).entries:
        assert e.status == "pass"


def test_empty_selection():
    assert run_suite([]).entries == ()
    assert json.loads(run_suite([]).to_json()) == []


def test_convention_factor_is_reported():
    entries = run_suite(expand("xk_two_forms")).entries
    assert [e.status for e in entries] == ["pass-with-convention-factor"] * 3
    assert [e.correction_factor for e in entries] == ["-q", "q^2", "q^4"]


def test_report_schema():
    data = json.loads(run_suite(expand("xk_two_forms", n=[1])).to_json())
    assert set(data[0]) == {"check", "params", "status", "witness", "correction_factor", "millis"}
    assert data[0]["params"] == {"n": 1, "k": 1}
    data = json.loads(run_suite(expand("theorem1", n=[1], lambda_max=0)).to_json())
    assert set(data[0]) == {"check", "params", "status", "millis"}
    assert data[0]["params"]["lam"] == [0]


def test_reports_do_not_depend_on_parallelism():
    ids = expand("prop8") + expand("theorem1", n=[2], lambda_max=1) + expand("coroll1", n=[1, 2])
    serial = run_suite(list(reversed(ids)), 1).to_json(timing=False)
    parallel = run_suite(ids, 2).to_json(timing=False)
    assert serial == parallel == run_suite(ids, 1).to_json(timing=False)


def test_corrupted_rule_yields_witnesses():
    broken = corrupted_holomorphic()
    status, witness, _ = check_associativity(broken, triples=100)
    assert status == "fail" and witness
    status, witness, _ = check_confluence(broken)
    assert status == "fail" and witness
    assert check_associativity(hol_mat(2))[0] == "pass"


def test_pbw_check_catches_missing_rule():
    good = hol_mat(2)
    rules = dict(good.rules)
    rules.pop(max(rules))
    fewer = Presentation("fewer", good.labels, rules, q=Q)
    status, witness, _ = check_pbw_dims(fewer, 3)
    assert status == "fail" and "expected" in witness
