import json
from pathlib import Path

import jsonschema

from bruhatkit import cli
from bruhatkit.enumerator import VerifyReport

SCHEMA = json.loads(
    (Path(__file__).resolve().parent.parent / "docs" / "output_schema.json").read_text()
)

SCAN4_GOLDEN = (
    '{"command":"scan","payload":{"histogram":[[-1,4],[0,205],[1,4]],'
    '"intervals_scanned":213,"max_gap":1,"n":4,'
    '"witnesses":[["1234","3412"],["1234","4231"],["1243","4231"],["2134","4231"]]},'
    '"schema_version":"1"}'
)

INTERVAL_GOLDEN = (
    '{"command":"interval","payload":{"atom_bound":3,"atom_count":3,'
    '"atoms":[[1,2],[2,3],[3,4]],"coatom_bound":4,"coatom_count":4,'
    '"coatoms":[[1,3],[1,4],[2,3],[2,4]],"components":[[1,2,3,4]],"gap":1,'
    '"length_u":0,"length_v":4,"n":4,"u":"1234","v":"3412"},"schema_version":"1"}'
)

MAXIMIZERS_GOLDEN = (
    '{"command":"maximizers","payload":{"count":2,"expected_count":2,'
    '"maximizers":[{"mt":[[2,2]],"perm":"3412"},{"mt":[[2,1]],"perm":"4231"}],'
    '"n":4},"schema_version":"1"}'
)


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def doc_of(out: str) -> dict:
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return doc


def test_leq_true(capsys):
    code, out, _ = run(capsys, "leq", "1234", "3412")
    assert code == 0
    assert out == "true\n"


def test_leq_false(capsys):
    code, out, _ = run(capsys, "leq", "3412", "4231")
    assert code == 1
    assert out == "false\n"


def test_leq_reflexive(capsys):
    code, out, _ = run(capsys, "leq", "3412", "3412")
    assert code == 0
    assert out == "true\n"


def test_leq_usage_errors(capsys):
    code, _, err = run(capsys, "leq", "12", "123")
    assert code == 2
    assert "degree mismatch" in err
    code, _, err = run(capsys, "leq", "143", "123")
    assert code == 2
    code, _, _ = run(capsys, "leq", "123")
    assert code == 2


def test_interval_json_golden(capsys):
    code, out, _ = run(capsys, "interval", "1234", "3412")
    assert code == 0
    assert out == INTERVAL_GOLDEN + "\n"
    doc_of(out)


def test_interval_singleton(capsys):
    code, out, _ = run(capsys, "interval", "1234", "1234")
    assert code == 0
    payload = doc_of(out)["payload"]
    assert payload["atom_count"] == 0
    assert payload["coatom_count"] == 0
    assert payload["gap"] == 0
    assert payload["components"] == [[1], [2], [3], [4]]


def test_interval_listed_maximizer(capsys):
    code, out, _ = run(capsys, "interval", "2134", "4231")
    assert code == 0
    assert doc_of(out)["payload"]["gap"] == 1


def test_interval_text_reports_same_numbers(capsys):
    _, json_out, _ = run(capsys, "interval", "1234", "3412")
    payload = json.loads(json_out)["payload"]
    code, text_out, _ = run(capsys, "interval", "1234", "3412", "--format", "text")
    assert code == 0
    assert f"gap: {payload['gap']}" in text_out
    assert f"atoms ({payload['atom_count']})" in text_out
    assert f"coatoms ({payload['coatom_count']})" in text_out
    assert f"coatom bound: {payload['coatom_bound']}" in text_out
    assert f"atom bound: {payload['atom_bound']}" in text_out


def test_interval_rejects_non_interval(capsys):
    code, _, err = run(capsys, "interval", "3412", "1234")
    assert code == 2
    assert "not an interval" in err


def test_interval_comma_form(capsys):
    code, out, _ = run(capsys, "interval", "1,2,3,4", "3,4,1,2")
    assert code == 0
    assert out == INTERVAL_GOLDEN + "\n"


def test_graph_dot_golden(capsys):
    code, out, _ = run(capsys, "graph", "1234", "3412", "--side", "coatom")
    assert code == 0
    assert out == (
        "graph {\n"
        '  label="coatom";\n'
        "  1;\n  2;\n  3;\n  4;\n"
        "  1 -- 3;\n  1 -- 4;\n  2 -- 3;\n  2 -- 4;\n"
        "}\n"
    )
    code, out, _ = run(capsys, "graph", "1234", "3412", "--side", "atom")
    assert code == 0
    assert "1 -- 2;\n  2 -- 3;\n  3 -- 4;" in out


def test_graph_edgeless(capsys):
    code, out, _ = run(capsys, "graph", "1234", "1234", "--side", "atom")
    assert code == 0
    assert "--" not in out


def test_graph_requires_side(capsys):
    code, _, _ = run(capsys, "graph", "1234", "3412")
    assert code == 2


def test_maximizers_golden(capsys):
    code, out, _ = run(capsys, "maximizers", "--n", "4")
    assert code == 0
    assert out == MAXIMIZERS_GOLDEN + "\n"
    doc_of(out)


def test_maximizers_small(capsys):
    code, out, _ = run(capsys, "maximizers", "--n", "2")
    assert code == 0
    payload = doc_of(out)["payload"]
    assert payload["maximizers"] == [{"mt": [[1, 1]], "perm": "21"}]


def test_maximizers_odd_degree(capsys):
    code, out, _ = run(capsys, "maximizers", "--n", "5")
    assert code == 0
    payload = doc_of(out)["payload"]
    assert payload["count"] == payload["expected_count"] == 5


def test_maximizers_usage(capsys):
    code, _, err = run(capsys, "maximizers", "--n", "1")
    assert code == 2
    assert "degree >= 2" in err


def test_verify_all_passes(capsys):
    code, out, _ = run(capsys, "verify", "--n", "4", "--check", "all")
    assert code == 0
    payload = doc_of(out)["payload"]
    assert payload["passed"] is True
    assert [c["check"] for c in payload["checks"]] == [
        "a", "b", "p21", "p29", "p410", "corollary", "lemma"
    ]
    assert all(c["status"] == "pass" for c in payload["checks"])


def test_verify_skips_inapplicable_checks_below_4(capsys):
    code, out, _ = run(capsys, "verify", "--n", "3", "--check", "all")
    assert code == 0
    payload = doc_of(out)["payload"]
    status = {c["check"]: c["status"] for c in payload["checks"]}
    assert status["b"] == "skip"
    assert status["corollary"] == "skip"
    assert status["a"] == "pass"


def test_verify_explicit_inapplicable_check_is_usage_error(capsys):
    code, _, err = run(capsys, "verify", "--n", "3", "--check", "b")
    assert code == 2
    assert "n >= 4" in err


def test_verify_rejects_degree_zero(capsys):
    code, _, err = run(capsys, "verify", "--n", "0", "--check", "lemma")
    assert code == 2


def test_verify_single_check(capsys):
    code, out, _ = run(capsys, "verify", "--n", "5", "--check", "p29")
    assert code == 0
    payload = doc_of(out)["payload"]
    assert len(payload["checks"]) == 1
    assert payload["checks"][0]["actual"] == 5


def test_verify_sample_parameters_recorded(capsys):
    code, out, _ = run(
        capsys, "verify", "--n", "6", "--check", "p410",
        "--sample", "200", "--seed", "9",
    )
    assert code == 0
    entry = doc_of(out)["payload"]["checks"][0]
    assert entry["mode"] == "sample"
    assert entry["seed"] == 9
    assert entry["count"] == 200


def test_verify_failure_exit_code(capsys, monkeypatch):
    failing = VerifyReport(
        check="a", n=4, passed=False, expected=1, actual=2, counterexample="[u, v]"
    )
    monkeypatch.setattr(cli, "verify_max_gap", lambda *a, **k: failing)
    code, out, _ = run(capsys, "verify", "--n", "4", "--check", "a")
    assert code == 3
    payload = doc_of(out)["payload"]
    assert payload["passed"] is False
    assert payload["checks"][0]["status"] == "fail"
    assert payload["checks"][0]["counterexample"] == "[u, v]"


def test_scan_golden_bytes(capsys):
    code, out, _ = run(capsys, "scan", "--n", "4")
    assert code == 0
    assert out == SCAN4_GOLDEN + "\n"
    doc_of(out)


def test_scan_s2(capsys):
    code, out, _ = run(capsys, "scan", "--n", "2")
    assert code == 0
    payload = doc_of(out)["payload"]
    assert payload["max_gap"] == 0


def test_scan_csv_matches_json(capsys):
    _, json_out, _ = run(capsys, "scan", "--n", "4")
    histogram = json.loads(json_out)["payload"]["histogram"]
    code, csv_out, _ = run(capsys, "scan", "--n", "4", "--format", "csv")
    assert code == 0
    lines = csv_out.strip().splitlines()
    assert lines[0] == "gap,count"
    parsed = [[int(x) for x in line.split(",")] for line in lines[1:]]
    assert parsed == histogram


def test_scan_usage(capsys):
    code, _, _ = run(capsys, "scan", "--n", "1")
    assert code == 2
    code, _, _ = run(capsys, "scan", "--n", "9")
    assert code == 2


def test_degree_8_requires_allow_large(capsys):
    code, _, err = run(capsys, "scan", "--n", "8")
    assert code == 2
    assert "allow_large" in err or "allow-large" in err


def test_timing_flag_adds_field(capsys):
    _, out_plain, _ = run(capsys, "scan", "--n", "3")
    _, out_timed, _ = run(capsys, "scan", "--n", "3", "--timing")
    assert "timing_ms" not in out_plain
    timed = doc_of(out_timed)
    assert isinstance(timed["timing_ms"], int)
    plain = json.loads(out_plain)
    timed.pop("timing_ms")
    assert timed == plain


def test_explicit_cache_file_created_and_reused(tmp_path, capsys):
    cache_file = tmp_path / "s4.bruhatcache"
    code, out1, _ = run(capsys, "scan", "--n", "4", "--cache", str(cache_file))
    assert code == 0
    assert cache_file.exists()
    stamp = cache_file.stat().st_mtime_ns
    code, out2, _ = run(capsys, "scan", "--n", "4", "--cache", str(cache_file))
    assert code == 0
    assert out1 == out2
    assert cache_file.stat().st_mtime_ns == stamp  # loaded, not rebuilt


def test_cache_dir_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("BRUHATKIT_CACHE_DIR", str(tmp_path / "caches"))
    code, _, _ = run(capsys, "verify", "--n", "3", "--check", "a")
    assert code == 0
    assert (tmp_path / "caches" / "s3.bruhatcache").exists()


def test_corrupt_cache_is_a_usage_error(tmp_path, capsys):
    cache_file = tmp_path / "s4.bruhatcache"
    run(capsys, "scan", "--n", "4", "--cache", str(cache_file))
    blob = bytearray(cache_file.read_bytes())
    blob[-6] ^= 0xFF
    cache_file.write_bytes(bytes(blob))
    code, _, err = run(capsys, "scan", "--n", "4", "--cache", str(cache_file))
    assert code == 2
    assert "checksum" in err


def test_wrong_degree_cache_file_is_rejected(tmp_path, capsys):
    cache_file = tmp_path / "shared.bruhatcache"
    run(capsys, "scan", "--n", "4", "--cache", str(cache_file))
    code, _, err = run(capsys, "scan", "--n", "5", "--cache", str(cache_file))
    assert code == 2
    assert "degree mismatch" in err


def test_jobs_byte_identical(capsys):
    outputs = set()
    for jobs in ("1", "2", "4"):
        code, out, _ = run(capsys, "scan", "--n", "4", "--jobs", jobs)
        assert code == 0
        outputs.add(out)
    assert len(outputs) == 1


def test_no_command_is_usage_error(capsys):
    assert cli.main([]) == 2
    captured = capsys.readouterr()
    assert "usage" in captured.err


def test_help_exits_zero(capsys):
    assert cli.main(["--help"]) == 0
