import pytest

import entrates as er
from entrates.battery import COVERAGE, SUITE_NAMES, run_battery, triple_order_violations


SMALL_RUNS = [
    ("ssa", (2, 2, 2), 40),
    ("subadditivity", (2, 2, 2), 40),
    ("bound-order", (2, 2, 2), 40),
    ("combing-region", (2, 2, 2), 40),
    ("triple-order", (2, 2, 2, 2), 60),
    ("quad-plan", (2, 2, 2, 2), 40),
    ("ghz-split", (2, 2, 2), 40),
]


@pytest.mark.parametrize("suite,dims,trials", SMALL_RUNS)
def test_suites_pass_clean(suite, dims, trials):
    report = run_battery(suite, trials, dims, seed=5)
    assert report.ok, report.render()
    assert report.max_violation <= report.tolerance


def test_reports_bitwise_reproducible():
    a = run_battery("combing-region", 20, (2, 2, 2), seed=11)
    b = run_battery("combing-region", 20, (2, 2, 2), seed=11)
    assert a.render() == b.render()
    c = run_battery("combing-region", 20, (2, 2, 2), seed=12)
    assert c.render() != a.render()


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_battery("nope", 1, (2, 2, 2), seed=0)


def test_dims_mismatch_rejected():
    with pytest.raises(ValueError):
        run_battery("triple-order", 1, (2, 2, 2), seed=0)
    with pytest.raises(ValueError):
        run_battery("combing-region", 1, (2, 2, 2, 2), seed=0)


def test_negative_control_corrupted_triples():
    # Harness self-test: feed deliberately corrupted triples to the raw
    # check and require nonempty violations.
    triples = er.merging_rate_triples(er.ghz_state(4))
    corrupted = list(triples)
    corrupted[0] = er.RateTriple(0.5, 0.0, 1.0, origin=1)  # breaks the row sum
    issues = triple_order_violations(corrupted, sa=1.0)
    assert any(amount > 1e-9 for _, amount, _ in issues)


def test_coverage_matrix_rendered():
    report = run_battery("quad-plan", 2, (2, 2, 2, 2), seed=1)
    text = report.render()
    assert text.startswith("battery-report 1\n")
    for check in COVERAGE["quad-plan"]:
        assert f"check {check} ::" in text
    assert "status ok" in text


def test_every_suite_has_coverage():
    assert set(SUITE_NAMES) == set(COVERAGE)
    for suite, checks in COVERAGE.items():
        assert checks, suite
