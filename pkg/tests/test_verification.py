import pytest

from verification import SUITES, SuiteOptions, SuiteReport, run_suites, summary_table


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_on_small_corpus(name):
    (report,) = run_suites([name], SuiteOptions(max_edges=1, exhaustive=True))
    assert report.ok, report.failures


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_on_random_corpus(name):
    (report,) = run_suites([name], SuiteOptions(max_edges=3, exhaustive=False, seed=5, count=6))
    assert report.ok, report.failures


def test_summary_table_columns():
    reports = [SuiteReport("a", cases=3), SuiteReport("b", cases=1, failures=[{"subject": {}}])]
    table = summary_table(reports)
    assert list(table.columns) == ["suite", "cases", "failures", "seconds"]
    assert table["failures"].tolist() == [0, 1]


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_exhaustive_three_edges(name):
    (report,) = run_suites([name], SuiteOptions(max_edges=3, exhaustive=True))
    assert report.ok, report.failures[:3]
