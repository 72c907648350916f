from src.DTOs.models import SynthesisReport, ValidationIssue
from src.core.perm_core import identity, make_permutation
from src.utils.reporting import (
    REPORT_FIELDS, bench_frame, bench_row, difference_frame, format_report, write_difference_csv,
)

from tests.conftest import read_report


def sample_report(**overrides):
    fields = dict(
        method="kcycle", n=7, gates=12, cost=90, estimate=174, distance=0.25, nop=9,
        category=3, verified=True, seconds=0.01, route="kcycle", counts={"Pair22": 1},
    )
    fields.update(overrides)
    return SynthesisReport(**fields)


def test_report_field_order():
    lines = format_report(sample_report()).splitlines()
    assert [line.split("=")[0] for line in lines[:len(REPORT_FIELDS)]] == list(REPORT_FIELDS)
    assert lines[len(REPORT_FIELDS)] == "count.Pair22=1"


def test_report_values():
    parsed = read_report(format_report(sample_report(verified=None, estimate=None)))
    assert parsed["verified"] == "skipped"
    assert parsed["estimate"] == "none"
    assert parsed["distance"] == "0.250000"
    assert parsed["standin"] == "false"


def test_report_lists_warnings():
    report = sample_report(warnings=[ValidationIssue(issue_type="odd_permutation", message="odd")])
    assert "warning.odd_permutation=odd\n" in format_report(report)


def test_difference_frame():
    df = difference_frame(make_permutation(2, [3, 2, 1, 0]))
    assert list(df.columns) == ["i", "f_i", "diff"]
    assert df["diff"].tolist() == [3, 1, -1, -3]


def test_difference_csv(tmp_path):
    path = tmp_path / "d.csv"
    write_difference_csv(identity(3), str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "i,f_i,diff"
    assert len(lines) == 9


def test_bench_frame():
    df = bench_frame([bench_row("random", 0, sample_report()), bench_row("random", 1, sample_report(cost=128))])
    assert df["cost_per_n2n"].tolist() == [90 / 896, 128 / 896]
    assert bench_frame([]).empty
