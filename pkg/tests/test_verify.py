import pytest

from sparsematroids import verify
from sparsematroids.cli import main
from sparsematroids.matroid import Matroid


def test_plan_is_deterministic():
    assert verify.plan("roundtrip", 4, 0, 250) == verify.plan("roundtrip", 4, 0, 250)
    units = verify.plan("roundtrip", 4, 0, 250)
    assert [u[2][-1] for u in units if u[1] == "samples"] == [100, 100, 50]
    with pytest.raises(ValueError):
        verify.plan("nope", 4, 0, 0)


def test_small_suites_pass():
    reps = verify.run_suites(["lemmas", "grouping", "roundtrip"], max_n=4, samples=10)
    assert [r.name for r in reps] == ["lemmas", "grouping", "roundtrip"]
    assert all(not r.failures for r in reps)
    text = verify.report_text(reps)
    assert "roundtrip: 25 matroids, 0 failures" in text


def test_jobs_do_not_change_report():
    a = verify.report_text(verify.run_suites(["all"], max_n=4, jobs=1, samples=20))
    b = verify.report_text(verify.run_suites(["all"], max_n=4, jobs=2, samples=20))
    assert a == b


def test_failure_names_invariant(monkeypatch):
    import sparsematroids.verify as v

    real = v.decode_matroid

    def wrong(S, Z, TW, n, r):
        M = real(S, Z, TW, n, r)
        return Matroid(n, r, M.graph.full, check=False)

    monkeypatch.setattr(v, "decode_matroid", wrong)
    res = v._roundtrip_census(4, 2)
    assert res.failures and res.failures[0].startswith("FAIL encoder.round_trip:")


def test_cli_verify_exit_codes(monkeypatch, capsys):
    assert main(["verify", "--suite", "grouping", "--max-n", "4"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[-1] == "grouping: 58 groups, 0 failures"

    def bad_unit(unit):
        res = verify.UnitResult(count=1)
        res.fail("test.invariant", "forced")
        return res

    monkeypatch.setattr(verify, "run_unit", bad_unit)
    assert main(["verify", "--suite", "grouping", "--max-n", "3"]) == 1
    assert "FAIL test.invariant: forced" in capsys.readouterr().out
