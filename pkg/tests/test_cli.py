import json

import pytest

from hodgkin import cli, torring
from hodgkin.errors import CertificationError


def _run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_usage_errors_exit_one(capsys):
    code, _, err = _run(["compute", "--type", "Z9"], capsys)
    assert code == 1
    assert "Z9" in err
    code, _, err = _run(["nonsense"], capsys)
    assert code == 1
    code, _, err = _run(["compute"], capsys)  # --type is required
    assert code == 1


def test_resource_guard_exits_three(capsys):
    code, _, err = _run(["compute", "--type", "E8"], capsys)
    assert code == 3
    assert "696729600" in err


def test_compute_json_report(tmp_path, capsys):
    code, out, _ = _run(["compute", "--type", "A2", "--no-timings",
                         "--cache-dir", str(tmp_path)], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["cartan_type"] == "A2"
    assert report["weyl_order"] == 6
    assert report["gram_determinant"] in (1, -1)
    assert [row["rank"] for row in report["tor_table"]] == [1, 2, 1]
    assert report["k0_rank"] == report["k1_rank"] == 2
    assert report["exterior_certified"] is True
    assert report["timings_ms"] == {}
    assert all(check["pass"] for check in report["checks"])


def test_compute_text_report(tmp_path, capsys):
    code, out, _ = _run(["compute", "--type", "A1", "--format", "text",
                         "--cache-dir", str(tmp_path)], capsys)
    assert code == 0
    assert "exterior    : certified" in out
    assert "0 failed" in out


def test_compute_writes_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = _run(["compute", "--type", "A1", "--no-timings",
                         "--cache-dir", str(tmp_path / "cache"),
                         "--out", str(target)], capsys)
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["cartan_type"] == "A1"


def test_reports_are_deterministic(tmp_path, capsys):
    args = ["compute", "--type", "B2", "--no-timings",
            "--cache-dir", str(tmp_path)]
    _, cold, _ = _run(args, capsys)
    _, warm, _ = _run(args, capsys)   # second run hits the cache
    assert cold == warm
    _, threaded, _ = _run(args + ["--threads", "4"], capsys)
    assert threaded == cold


def test_cache_round_trip_and_corruption(tmp_path, capsys):
    args = ["compute", "--type", "A2", "--no-timings",
            "--cache-dir", str(tmp_path)]
    _, fresh, _ = _run(args, capsys)
    entry = tmp_path / "A2.json"
    assert entry.exists()
    payload = json.loads(entry.read_text())
    for key in ("format_version", "cartan_type", "weyl_elements",
                "longest_word", "basis_weights", "gram", "mult_matrices",
                "checksum"):
        assert key in payload, key

    # flip one gram entry without fixing the checksum: entry is ignored
    payload["gram"][0][0] += 1
    entry.write_text(json.dumps(payload, sort_keys=True))
    _, rebuilt, _ = _run(args, capsys)
    assert rebuilt == fresh

    # now fix the checksum so the lie is internally consistent: the
    # rebuilt module no longer matches the entry, so it is discarded
    payload = json.loads(entry.read_text())
    payload.pop("checksum")
    payload["mult_matrices"][0][0][0] += 1
    payload["checksum"] = cli._checksum(payload)
    entry.write_text(json.dumps(payload, sort_keys=True))
    _, cross_checked, _ = _run(args, capsys)
    assert cross_checked == fresh

    # unreadable JSON is treated as a miss, not an error
    entry.write_text("{ not json")
    _, recovered, _ = _run(args, capsys)
    assert recovered == fresh


def test_cache_dir_resolution(tmp_path, monkeypatch):
    monkeypatch.delenv("HODGKIN_CACHE_DIR", raising=False)
    assert cli.resolve_cache_dir("/tmp/explicit") == \
        cli.Path("/tmp/explicit")
    monkeypatch.setenv("HODGKIN_CACHE_DIR", str(tmp_path / "env"))
    assert cli.resolve_cache_dir(None) == tmp_path / "env"
    assert cli.resolve_cache_dir("/tmp/flag-wins") == cli.Path("/tmp/flag-wins")
    monkeypatch.delenv("HODGKIN_CACHE_DIR")
    assert cli.resolve_cache_dir(None) == cli.Path.home() / ".cache" / "hodgkin"


def test_certification_failure_exits_two(tmp_path, capsys, monkeypatch):
    def sabotage(ring):
        raise CertificationError("generator-square-zero",
                                 witness={"generator": 0})
    monkeypatch.setattr(torring, "certify_exterior", sabotage)
    code, out, _ = _run(["compute", "--type", "A1", "--no-timings",
                         "--cache-dir", str(tmp_path)], capsys)
    assert code == 2
    report = json.loads(out)   # the report still comes out, with the witness
    assert report["exterior_certified"] is False
    failures = [c for c in report["checks"] if not c["pass"]]
    assert failures == [{"name": "generator-square-zero", "pass": False,
                         "witness": {"generator": 0}}]


def test_verify_fast_table(tmp_path, capsys):
    code, out, _ = _run(["verify", "--type", "A1",
                         "--cache-dir", str(tmp_path)], capsys)
    assert code == 0
    assert "PASS  a1-gram-golden" in out
    assert " 0 failed" in out


def test_verify_full_runs_property_suites(tmp_path, capsys):
    code, out, _ = _run(["verify", "--type", "A1", "--level", "full",
                         "--cache-dir", str(tmp_path)], capsys)
    assert code == 0
    assert "demazure-idempotent" in out
    assert "rational-series-oracle" in out
    assert "smith-reconstruction-random" in out


def test_verify_failure_exits_two(tmp_path, capsys, monkeypatch):
    def sabotage(ring):
        raise CertificationError("tor-rank", witness={"ranks": [9]})
    monkeypatch.setattr(torring, "certify_exterior", sabotage)
    code, out, _ = _run(["verify", "--type", "A1",
                         "--cache-dir", str(tmp_path)], capsys)
    assert code == 2
    assert "FAIL" in out


def test_list_types(capsys):
    code, out, _ = _run(["list-types"], capsys)
    assert code == 0
    assert "A: rank >= 1" in out
    assert "HODGKIN_CACHE_DIR" in out


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["--version"])
    assert info.value.code == 0
    import hodgkin
    assert hodgkin.__version__ in capsys.readouterr().out
