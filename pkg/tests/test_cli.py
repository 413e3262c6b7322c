import json
import subprocess
import sys

import pytest

from adiclab.cli import (EXIT_INCONSISTENT, EXIT_INDECISIVE, EXIT_OK,
                         EXIT_USAGE, emit_report, generate_instances, main,
                         parse_instance, run_instance, serialize_instance)
from adiclab.errors import ParseError, UnknownProfile


def z12_instance():
    return {
        "ring": {"kind": "integers"},
        "modules": {"M": {"ambient_rank": 1, "relations": [["12"]]}},
        "ideals": {"a": ["2"]},
        "tasks": [{"command": "check_theorem4", "module": "M", "ideal": "a"}],
        "seed": 1,
    }


def test_run_z12_consistent():
    rep = run_instance(z12_instance())
    assert rep["exit_status"] == EXIT_OK
    task = rep["tasks"][0]
    assert task["status"] == "consistent"
    assert task["left"]["status"] == "fails"
    assert task["right"]["status"] == "fails"


def test_undeclared_module_is_parse_error():
    data = z12_instance()
    data["tasks"] = [{"command": "check_theorem4", "module": "nope",
                      "ideal": "a"}]
    with pytest.raises(ParseError):
        run_instance(data)


def test_unknown_field_rejected():
    data = z12_instance()
    data["surprise"] = 1
    with pytest.raises(ParseError):
        parse_instance(data)
    data = z12_instance()
    data["modules"]["M"]["extra"] = True
    with pytest.raises(ParseError):
        parse_instance(data)


def test_round_trip_canonical():
    for profile in ("pid", "mixed", "theorem3", "theorem2", "lemma5"):
        for data in generate_instances(3, 3, profile):
            inst = parse_instance(data)
            again = serialize_instance(inst)
            inst2 = parse_instance(again)
            assert serialize_instance(inst2) == again


def test_generate_deterministic():
    a = generate_instances(7, 5, "mixed")
    b = generate_instances(7, 5, "mixed")
    assert a == b
    c = generate_instances(8, 5, "mixed")
    assert a != c


def test_generate_unknown_profile():
    with pytest.raises(UnknownProfile):
        generate_instances(1, 1, "nope")


def test_exit_codes(tmp_path):
    ok = tmp_path / "ok.json"
    ok.write_text(json.dumps(z12_instance()), encoding="utf-8")
    assert main(["run", str(ok), "--format", "machine"]) == EXIT_OK

    indecisive = {
        "ring": {"kind": "polynomial", "base": {"kind": "rationals"},
                 "vars": ["x", "y"], "order": "grlex"},
        # non-graded relations push the deciders to Unknown
        "modules": {"M": {"ambient_rank": 1, "relations": [["x + 1"]]}},
        "ideals": {"a": ["y"]},
        "tasks": [{"command": "is_complete", "module": "M", "ideal": "a"}],
    }
    f2 = tmp_path / "ind.json"
    f2.write_text(json.dumps(indecisive), encoding="utf-8")
    code2 = main(["run", str(f2), "--format", "machine"])
    assert code2 == EXIT_INDECISIVE

    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["run", str(bad)]) == EXIT_USAGE

    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps({"ring": {"kind": "integers"},
                                   "tasks": [{"command": "nope"}]}),
                       encoding="utf-8")
    assert main(["run", str(missing)]) == EXIT_USAGE


def test_example1_demo_file(tmp_path, capsys):
    data = generate_instances(1, 1, "example1")[0]
    f = tmp_path / "ex1.json"
    f.write_text(json.dumps(data), encoding="utf-8")
    code = main(["run", str(f), "--format", "machine", "--stages", "3"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    rep = json.loads(out)
    task = rep["tasks"][0]
    assert task["status"] == "decisive"
    v = task["verdicts"]
    assert v["separated"]["status"] == "fails"
    assert v["cohomologically_complete"]["status"] == "holds"
    assert v["quasi_isomorphism"]["status"] == "holds"
    assert v["power_memberships"]["status"] == "holds"


def test_machine_report_deterministic_and_text_renders():
    rep1 = run_instance(z12_instance())
    rep2 = run_instance(z12_instance())
    assert emit_report(rep1, "machine") == emit_report(rep2, "machine")
    text = emit_report(rep1, "text")
    assert "check_theorem4" in text and "consistent" in text
    machine = json.loads(emit_report(rep1, "machine"))
    assert machine["wall_clock_ms"] is None


def test_jobs_byte_identical(tmp_path):
    files = []
    for i, data in enumerate(generate_instances(5, 3, "pid")):
        f = tmp_path / f"i{i}.json"
        f.write_text(json.dumps(data), encoding="utf-8")
        files.append(str(f))

    def run_with_jobs(jobs):
        cmd = [sys.executable, "-m", "adiclab.cli", "run", *files,
               "--format", "machine", "--jobs", str(jobs)]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        return proc.stdout

    out1 = run_with_jobs(1)
    out8 = run_with_jobs(8)
    assert out1 == out8
    assert json.loads(out1)["reports"]


def test_empty_task_list_header_only():
    rep = run_instance({"ring": {"kind": "integers"}, "tasks": []})
    assert rep["exit_status"] == EXIT_OK
    text = emit_report(rep, "text")
    lines = [l for l in text.splitlines() if l.strip()]
    assert any(l.startswith("task") for l in lines)
    assert len(lines) == 4  # instance, digest, header, rule


def test_witness_serialized_in_machine_report():
    rep = run_instance({
        "ring": {"kind": "integers"},
        "modules": {"M": {"ambient_rank": 1, "relations": [["12"]]}},
        "ideals": {"a": ["2"]},
        "tasks": [{"command": "is_separated", "module": "M", "ideal": "a"}],
    })
    blob = json.loads(emit_report(rep, "machine"))
    verdict = blob["tasks"][0]["verdict"]
    assert verdict["status"] == "fails"
    assert isinstance(verdict["witness"]["element"], list)
