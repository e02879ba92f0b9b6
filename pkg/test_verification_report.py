import json

import pytest

from algebra_errors import ReportFormatError
from verification_report import (
    ReportBundle,
    VerificationReport,
    choose_tuples,
    report_diff,
    run_sweep,
    worst_status,
)


def make_report(check="jacobi", status="pass", witnesses=None, timing=0.5):
    return VerificationReport(check=check, family="tauH", N=2, window=1, status=status,
                              witnesses=witnesses or [], details={"checked": 3}, timing=timing)


@pytest.fixture
def bundle():
    """Bundle with one passing and one partial report."""
    return ReportBundle([make_report(), make_report("closure:levelzero", "partial")], {"algebra.N": 2})


def test_unknown_status_is_rejected():
    with pytest.raises(ValueError):
        make_report(status="ok")


def test_witnesses_are_sorted():
    report = make_report(status="fail", witnesses=[{"inputs": [2]}, {"inputs": [1]}])
    assert report.witnesses == [{"inputs": [1]}, {"inputs": [2]}]


@pytest.mark.parametrize("statuses, expected", [
    ([], "pass"),
    (["pass", "partial"], "partial"),
    (["partial", "inconclusive", "pass"], "inconclusive"),
    (["inconclusive", "fail"], "fail"),
])
def test_worst_status(statuses, expected):
    assert worst_status(statuses) == expected


def test_report_dict_round_trip():
    report = make_report(status="fail", witnesses=[{"inputs": ["x"], "residual": "1"}])
    restored = VerificationReport.from_dict(report.to_dict())
    assert restored.comparable_body() == report.comparable_body()
    assert "timing" not in report.to_dict(include_timing=False)
    with pytest.raises(ReportFormatError):
        VerificationReport.from_dict({"check": "jacobi"})


def test_choose_tuples_exhaustive():
    tuples, sampled = choose_tuples(4, 3, limit=100)
    assert not sampled
    # C(4 + 3 - 1, 3)
    assert len(tuples) == 20
    assert all(a <= b <= c for a, b, c in tuples)


def test_choose_tuples_sampled_is_deterministic():
    first, sampled = choose_tuples(50, 3, limit=30, seed=4)
    second, _ = choose_tuples(50, 3, limit=30, seed=4)
    assert sampled
    assert first == second
    assert len(first) <= 30
    assert all(a <= b <= c for a, b, c in first)


def _odd_witnesses(offset, chunk):
    return [{"inputs": [offset + i], "residual": "odd"} for i in chunk if i % 2]


def test_run_sweep_collects_chunk_witnesses():
    witnesses = run_sweep(_odd_witnesses, (100,), list(range(10)), chunk_size=3)
    assert [w["inputs"][0] for w in witnesses] == [101, 103, 105, 107, 109]


def test_bundle_status(bundle):
    assert bundle.status == "partial"
    assert not bundle.failed()
    # strict mode treats partial as failure
    assert bundle.failed(strict=True)


def test_bundle_json_round_trip(tmp_path, bundle):
    path = tmp_path / "report.json"
    bundle.save_json(str(path))
    loaded = ReportBundle.load_json(str(path))
    assert loaded.comparable_body() == bundle.comparable_body()
    assert loaded.config == {"algebra.N": 2}


def test_load_rejects_other_files(tmp_path):
    path = tmp_path / "other.json"
    path.write_text(json.dumps({"rows": []}), encoding="utf-8")
    with pytest.raises(ReportFormatError):
        ReportBundle.load_json(str(path))
    with pytest.raises(ReportFormatError):
        ReportBundle.load_json(str(tmp_path / "missing.json"))


def test_summary_frame_and_text(bundle):
    frame = bundle.summary_frame()
    assert list(frame["status"]) == ["pass", "partial"]
    text = bundle.text_report()
    assert "VERIFICATION REPORT" in text
    assert "Partial: 1" in text
    assert "Overall: PARTIAL" in text
    assert "CLOSURE:LEVELZERO [tauH, N=2, R=1]" in text


def test_diff_ignores_timing(tmp_path):
    a, b, c = (str(tmp_path / name) for name in ("a.json", "b.json", "c.json"))
    ReportBundle([make_report(timing=0.1)]).save_json(a)
    ReportBundle([make_report(timing=9.0)]).save_json(b)
    ReportBundle([make_report(status="fail")]).save_json(c)
    assert report_diff(a, b) == ""
    diff = report_diff(a, c)
    assert '-    "status": "pass"' in diff or '"status": "fail"' in diff
