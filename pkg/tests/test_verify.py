import json

import pytest

from conftest import hypersurface, pair
from datum_core import SpecialDatum, canonical_form, signature, validate
from multiplicity import OracleBudget
from verify import (
    FAIL,
    PASS,
    EnumerationBudget,
    ceiling_lemma_grid,
    check_datum,
    collapse_labeled,
    completeness,
    concavity_lemma_grid,
    enumerate_data,
    enumerate_dimension,
    jsonl_path,
    labeled_count,
    labeled_data,
    run_suite,
    write_report,
)


@pytest.mark.parametrize(
    "n, max_ratio, expected",
    [(1, 3, 1), (2, 2, 2), (2, 3, 3), (3, 2, 4), (3, 3, 9), (4, 2, 10), (4, 3, 36)],
)
def test_class_counts(n, max_ratio, expected):
    assert len(enumerate_dimension(n, max_ratio)) == expected


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumerated_data_are_valid_and_canonical(n):
    data = enumerate_dimension(n, 3)
    for d in data:
        assert d.n == n
        assert validate(d).valid
        assert canonical_form(d)[0] == d
    assert len({signature(d) for d in data}) == len(data)
    assert data == sorted(data, key=signature)


def test_enumerate_data_walks_every_dimension():
    data = list(enumerate_data(EnumerationBudget(n_max=3, max_ratio=2)))
    assert [d.n for d in data] == [1] + [2] * 2 + [3] * 4


def test_small_classes_are_the_expected_ones(point, loose):
    assert enumerate_dimension(1, 3) == [point]
    two = set(enumerate_dimension(2, 3))
    assert two == {SpecialDatum.of(2, [((1,), 1), ((2,), 1)]), pair(2), pair(3)}
    assert loose in enumerate_dimension(3, 2)


def test_labeled_count():
    assert labeled_count(1, 3) == 1
    assert labeled_count(2, 3) == 3
    assert labeled_count(3, 2) == 8


def test_labeled_data_collapse_to_classes():
    orbits = collapse_labeled(labeled_data(3, 2))
    assert set(orbits) == set(enumerate_dimension(3, 2))
    assert sum(orbits.values()) == 8
    # three ways to choose which pair sits below the top
    assert orbits[canonical_form(SpecialDatum.of(3, [((1, 2, 3), 1), ((1, 2), 2), ((3,), 2), ((1,), 4), ((2,), 4)]))[0]] == 3


def test_completeness_matches():
    result = completeness(EnumerationBudget(n_max=3, max_ratio=2))
    assert result[3] == {"labeled": 8, "classes": 4, "matches": True}
    assert all(entry["matches"] for entry in result.values())


def test_lemma_grids_hold():
    ceiling = ceiling_lemma_grid()
    assert ceiling.ok
    assert ceiling.equalities > 0
    concavity = concavity_lemma_grid()
    assert concavity.ok
    assert concavity.points == 5 ** 4 + 5 ** 6


def test_ceiling_grid_counts_points():
    result = ceiling_lemma_grid(a_max=2, b_max=3, step_denominator=1)
    # a = 2 with b = 2, 3
    assert result.points == 2
    assert result.to_dict()["failures"] == []


@pytest.mark.parametrize("a", [2, 3, 4])
def test_hypersurfaces_pass_every_check(a):
    record = check_datum(hypersurface(a))
    assert not record.failed
    statuses = {c.check: c.status for c in record.checks}
    assert len(statuses) == 15
    assert statuses["C13"] == PASS
    assert statuses["C15"] == PASS
    assert record.multiplicity.value == record.oracle.e


def test_check_datum_works_on_relabeled_input(strict_branch):
    record = check_datum(strict_branch)
    assert record.datum == canonical_form(strict_branch)[0]
    assert FAIL not in {c.status for c in record.checks}


def test_check_datum_rejects_invalid():
    with pytest.raises(ValueError):
        check_datum(SpecialDatum.of(2, [((1, 2), 1), ((1,), 2)]))


def test_starved_oracle_skips_instead_of_failing():
    record = check_datum(hypersurface(2), OracleBudget(k_max=12, point_ceiling=10))
    statuses = {c.check: c.status for c in record.checks}
    assert statuses["C15"] == "skip"
    assert statuses["C1"] == PASS
    assert not record.failed


def test_run_suite_small():
    report = run_suite(EnumerationBudget(n_max=2, max_ratio=2))
    assert report.ok
    summary = report.summary()
    assert summary["data"] == 3
    assert summary["per_dimension"] == {"1": 1, "2": 2}
    assert summary["failed_records"] == 0
    assert set(summary["tallies"]) == {f"C{i}" for i in range(1, 16)}


def test_report_is_deterministic(tmp_path):
    budget = EnumerationBudget(n_max=2, max_ratio=3)
    first = write_report(run_suite(budget), str(tmp_path / "a.json"))
    second = write_report(run_suite(budget), str(tmp_path / "b.json"))
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    with open(first, encoding="utf-8") as f, open(second, encoding="utf-8") as g:
        assert f.read() == g.read()
    with open(first, encoding="utf-8") as f:
        lines = [json.loads(line) for line in f]
    assert len(lines) == 4
    assert {"datum", "summary", "multiplicity", "bounds", "oracle", "checks", "observational"} <= set(lines[0])


def test_budget_validation():
    with pytest.raises(ValueError):
        EnumerationBudget(n_max=0)
    with pytest.raises(ValueError):
        EnumerationBudget(max_ratio=1)
    assert EnumerationBudget(2, 2).to_dict()["k_max"] == OracleBudget().k_max


def test_jsonl_path():
    assert jsonl_path("out/report.json") == "out/report.jsonl"
    assert jsonl_path("report") == "report.jsonl"


def test_run_suite_through_dimension_three():
    report = run_suite(EnumerationBudget(n_max=3, max_ratio=3))
    summary = report.summary()
    assert report.ok
    assert summary["data"] == 13
    assert summary["per_dimension"] == {"1": 1, "2": 3, "3": 9}
    assert summary["skips"] == 0
    assert summary["failed_records"] == 0
    assert summary["completeness"]["3"]["matches"] is True


def test_emb_check_reports_cover_degrees(nested):
    record = check_datum(nested)
    c4 = next(c for c in record.checks if c.check == "C4")
    assert c4.status == PASS
    assert c4.witness["cover_degrees"] == "[2]"


def test_write_report_creates_missing_directories(tmp_path):
    path = tmp_path / "out" / "nested" / "report.json"
    records = write_report(run_suite(EnumerationBudget(n_max=1)), str(path))
    assert path.exists()
    assert records == str(tmp_path / "out" / "nested" / "report.jsonl")


def test_write_report_refuses_to_overwrite_its_summary(tmp_path):
    with pytest.raises(ValueError):
        write_report(run_suite(EnumerationBudget(n_max=1)), str(tmp_path / "report.jsonl"))
