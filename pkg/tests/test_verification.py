import pytest

from cyclohedra.config import Settings
from cyclohedra.geodesic_service import GeodesicService
from cyclohedra.verification_service import VerificationService


@pytest.fixture
def verification(geodesics):
    return VerificationService(geodesics)


def test_table_up_to_six(verification):
    report = verification.table(6)
    assert [row.value for row in report.rows] == [1, 3, 5, 7, 9, 11]
    assert not any(row.partial for row in report.rows)
    assert not any(row.jump for row in report.rows)
    assert report.all_within_bounds
    assert [row.states for row in report.rows] == [2, 6, 20, 70, 252, 924]


def test_table_flags_the_jump_at_seven(verification):
    report = verification.table(7, d_min=6)
    assert [row.value for row in report.rows] == [11, 14]
    assert [row.jump for row in report.rows] == [False, True]


def test_rows_over_the_table_cap_become_lower_bounds(tmp_path):
    settings = Settings(cache_dir=tmp_path, table_cap=100)
    report = VerificationService(GeodesicService(settings)).table(5, d_min=4)
    four, five = report.rows
    assert (four.value, four.partial) == (7, False)
    assert five.partial
    assert five.within_bounds is None
    assert 1 <= five.value <= 9


def test_deep_lifts_the_table_cap(tmp_path):
    settings = Settings(cache_dir=tmp_path, table_cap=100)
    report = VerificationService(GeodesicService(settings)).table(5, d_min=5, deep=True)
    assert (report.rows[0].value, report.rows[0].partial) == (9, False)


def test_table_uses_the_cache(tmp_path):
    settings = Settings(cache_dir=tmp_path)
    VerificationService(GeodesicService(settings)).table(4)
    cached = VerificationService(GeodesicService(settings)).table(4)
    assert [row.value for row in cached.rows] == [1, 3, 5, 7]
    assert (tmp_path / "results.jsonl").exists()


def test_table_with_worker_processes(tmp_path):
    settings = Settings(cache_dir=tmp_path)
    report = VerificationService(GeodesicService(settings)).table(5, use_cache=False, jobs=2)
    assert [row.d for row in report.rows] == [1, 2, 3, 4, 5]
    assert [row.value for row in report.rows] == [1, 3, 5, 7, 9]


@pytest.mark.slow
def test_table_up_to_eight(verification):
    report = verification.table(8)
    assert [row.value for row in report.rows] == [1, 3, 5, 7, 9, 11, 14, 16]
    assert [row.d for row in report.rows if row.jump] == [7]


@pytest.mark.slow
def test_deep_table(verification):
    report = verification.table(10, d_min=9, deep=True)
    assert [row.value for row in report.rows] == [18, 21]
    assert [row.jump for row in report.rows] == [False, True]


def test_verify_bounds_four_to_seven(verification):
    checks = verification.verify_bounds(4, 7, samples=30)
    assert checks
    assert all(check.passed for check in checks), [c for c in checks if not c.passed]
    names = {check.name for check in checks}
    assert names == {"upper-bound-path", "pair-bound", "lower-bound-pair", "deletion"}


def test_bound_checks_for_one_dimension(verification):
    checks = verification.bound_checks(6, samples=10)
    lower = [c for c in checks if c.name == "lower-bound-pair"]
    assert len(lower) == 1
    assert "a=2" in lower[0].detail
    assert len([c for c in checks if c.name == "deletion"]) == 2


def _pair_c(check):
    return int(check.detail.split("c=")[1].split()[0])


def test_pair_bounds_cover_the_staircase_pairs(verification):
    checks = verification.check_pair_bounds(7)
    assert all(check.passed for check in checks)
    assert any(_pair_c(c) < 7 for c in checks if c.name == "pair-bound")
