import io
import json

import pytest

import qpolylab.report as report_mod
from qpolylab.cli import main
from qpolylab.exactmat import load_matrix
from qpolylab.gfspace import SizeLimitExceeded
from qpolylab.report import (RunConfig, UnknownCheck, emit_json, normalize_checks,
                             parse_report, run, strip_timing)


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_smallest_full_pipeline():
    rep = run(RunConfig(p=2, N=1))
    assert rep.passed and len(rep.checks) >= 20
    assert len({c.id for c in rep.checks}) == len(rep.checks)


def test_main_theorem_run_q2_N4():
    rep = run(RunConfig(p=2, N=4, checks=("qpoly", "tridiag")))
    assert rep.passed
    assert {c.id.split(".")[0] for c in rep.checks} == {"qpoly", "tridiag"}
    assert all(c.wall_time >= 0 for c in rep.checks) and rep.wall_time > 0


def test_size_limit_error():
    with pytest.raises(SizeLimitExceeded):
        run(RunConfig(p=2, N=12))
    code, out, err = invoke("verify", "--q", "2", "--N", "12", "--format", "json")
    assert code == 2
    assert json.loads(out)["error"]["type"] == "SizeLimitExceeded"


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(p=2, N=0)
    with pytest.raises(UnknownCheck):
        RunConfig(p=2, N=2, checks=("prop-9.9",))
    assert normalize_checks(["section5", "poset", "all"])[0] == "poset"
    assert normalize_checks(["section7", "section4"]) == ("split", "decomp")
    assert invoke("verify", "--q", "2", "--N", "2", "--checks", "nope")[0] == 2
    assert invoke("verify", "--q", "2", "--ext-degree", "2", "--modulus", "1,0,1",
                  "--N", "2")[0] == 2
    assert invoke("verify", "--q", "6", "--N", "2")[0] == 2
    assert invoke("verify", "--q", "2", "--N", "2", "--inject-fault", "99,0")[0] == 2


def test_empty_check_set():
    doc = json.loads(emit_json(run(RunConfig(p=2, N=2, checks=()))))
    assert doc["checks"] == [] and doc["summary"]["overall_pass"]
    assert doc["schema_version"] == "1"


def test_extension_field_and_prime_power_q():
    code, out, _ = invoke("verify", "--q", "4", "--modulus", "1,1,1", "--N", "2",
                          "--checks", "qpoly,tridiag", "--format", "json")
    assert code == 0
    assert json.loads(out)["config"]["q"] == 4


def test_injected_fault_is_detected_with_witness():
    code, out, _ = invoke("verify", "--q", "2", "--N", "3", "--inject-fault",
                          "--format", "json")
    assert code == 1
    doc = json.loads(out)
    assert doc["config"]["inject_fault"] == [1, 0]
    assert not doc["summary"]["overall_pass"]
    far = next(c for c in doc["checks"] if c["id"] == "qpoly.far-blocks-vanish")
    assert far["status"] == "fail"
    assert set(far["witness"]) == {"i", "j", "row", "col", "entry"}
    assert "/" in far["witness"]["entry"]


def test_explicit_fault_position_flips_zero_to_one():
    rep = run(RunConfig(p=2, N=2, checks=("operators",), inject_fault=(0, 0)))
    w = next(c for c in rep.checks if c.id == "operators.weighted-adjacency").witness
    assert (w["row"], w["col"], w["entry"]) == (0, 0, "1/1")


def test_round_trip_and_determinism():
    cfg = RunConfig(p=2, N=3, format="json")
    a, b = emit_json(run(cfg)), emit_json(run(cfg))
    assert strip_timing(json.loads(a)) == strip_timing(json.loads(b))
    doc = parse_report(a)
    rep = run(cfg)
    assert [c["status"] for c in doc["checks"]] == [c.status for c in rep.checks]
    assert list(doc) == ["schema_version", "config", "checks", "summary", "details"]
    with pytest.raises(ValueError):
        parse_report(json.dumps({"schema_version": "0"}))


def test_report_subcommand(tmp_path):
    path = tmp_path / "r.json"
    code, _, _ = invoke("verify", "--q", "2", "--N", "2", "--format", "json",
                        "--output", str(path))
    assert code == 0
    code, out, _ = invoke("report", str(path))
    assert code == 0 and out.strip().endswith("s") and "PASS" in out
    bad = tmp_path / "bad.json"
    invoke("verify", "--q", "2", "--N", "2", "--checks", "tridiag", "--inject-fault",
           "--format", "json", "--output", str(bad))
    assert invoke("report", str(bad))[0] == 1
    assert invoke("report", str(tmp_path / "missing.json"))[0] == 2


def test_dump_targets(tmp_path):
    code, out, _ = invoke("dump", "--q", "2", "--N", "1", "A")
    assert code == 0 and load_matrix(out).to_lists() == [[0, 1], [1, 0]]
    code, out, _ = invoke("dump", "--q", "2", "--N", "2", "hasse")
    assert len(out.splitlines()) == 6
    code, _, _ = invoke("dump", "--q", "2", "--N", "2", "E1", "Estar2", "L", "R", "Astar",
                        "S", "--out-dir", str(tmp_path))
    assert code == 0
    assert load_matrix((tmp_path / "E1.txt").read_text()).trace() == 3
    assert invoke("dump", "--q", "2", "--N", "2", "E9")[0] == 2


def test_skipped_dependents(monkeypatch):
    def broken(*_):
        raise RuntimeError("no split bases today")

    monkeypatch.setattr(report_mod, "build_families", broken)
    rep = run(RunConfig(p=2, N=2, checks=("poset", "split", "tridiag")))
    statuses = {c.id: c.status for c in rep.checks}
    assert statuses["split.prerequisites"] == "skipped"
    assert statuses["tridiag.relation-1"] == "pass"
    assert rep.passed


def test_group_exception_becomes_failed_record(monkeypatch):
    def explode(*_):
        raise ZeroDivisionError("boom")

    monkeypatch.setattr(report_mod, "verify_poset", explode)
    rep = run(RunConfig(p=2, N=2, checks=("poset",)))
    assert [(c.id, c.status) for c in rep.checks] == [("poset.error", "fail")]
    assert not rep.passed


def test_human_output():
    code, out, _ = invoke("verify", "--q", "3", "--N", "2", "--checks", "modules")
    assert code == 0
    assert "modules.leonard-parameters" in out and out.splitlines()[-1].startswith("PASS")
