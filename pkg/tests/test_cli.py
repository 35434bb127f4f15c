import json
import shutil
import subprocess
import sys

import pytest

from conftest import MODELS
from loopalg.cli import main, run_command
from loopalg.report import Check, Report, Result, Term, render_report


def path(name):
    return str(MODELS / f"{name}.model")


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def test_fdim_and_classify(capsys):
    status, out, _ = run(capsys, "fdim", path("cp2_borel"))
    assert status == 0 and "fdim: 3" in out
    status, out, _ = run(capsys, "classify", path("general"))
    assert status == 0 and "class: General" in out


def test_shriek_output(capsys):
    status, out, _ = run(capsys, "shriek", path("cp2_borel"), "--verify")
    assert status == 0
    assert "Δ^!(s_x*s_u) [degree 2]: -1·w ⊗ 1 + 1·1 ⊗ w" in out
    assert "check shriek cocycle (degree <= 12): PASS" in out
    assert "check shriek non-boundary (degree <= 10): PASS" in out


def test_dlcop_example(capsys):
    status, out, _ = run(capsys, "dlcop", path("cp2_borel"), "--class", "1 ⊗ s_u | 1 ⊗ 1")
    assert status == 0
    assert "Dlcop [degree 4]: 1·u^2 ⊗ 1" in out


def test_dlp_json_coordinates(capsys):
    status, out, _ = run(capsys, "dlp", path("odd_s3"), "--class", "1 ⊗ 1", "--format", "json")
    assert status == 0
    data = json.loads(out)
    (res,) = data["results"]
    assert res["label"] == "Dlp" and res["degree"] == 3
    assert res["coords"]


def test_scan_text(capsys):
    status, out, _ = run(capsys, "scan", path("odd_s3"), "--max-degree", "4")
    assert status == 0
    assert "check product (degree <= 4): witness" in out
    assert "check coproduct (degree <= 4): trivial  structural: μΔ^! = 0" in out


def test_check_exit_codes(capsys):
    status, out, _ = run(capsys, "check", path("odd_s3"), "--assoc", "--max-degree", "5")
    assert status == 1 and "FAIL" in out and "input:" in out
    status, out, _ = run(capsys, "check", path("odd_s3"), "--assoc", "--max-degree", "5",
                         "--convention", "coherent")
    assert status == 0 and "PASS" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["shriek", path("general")],
        ["fdim", "/nonexistent/file.model"],
        ["check", path("cp2_borel"), "--max-degree", "9", "--cutoff", "12"],
        ["dlp", path("cp2_borel"), "--class", "1 ⊗ s_w"],
        ["dlp", path("cp2_borel"), "--class", "1 ⊗ s_q"],
        ["cohomology", path("s2"), "--max-degree", "30", "--cutoff", "10"],
        ["fdim", path("s2"), "--jobs", "0"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    status, out, err = run(capsys, *argv)
    assert status == 2
    assert err.startswith("loopalg: error:")
    assert out == ""


def test_parse_error_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.model"
    bad.write_text("model m {\n  gen x:3;\n  d x = y^2;\n}\n")
    status, _, err = run(capsys, "fdim", str(bad))
    assert status == 2 and "line 3" in err


def test_usage_errors_exit_2(capsys):
    assert main(["frobnicate"]) == 2
    assert main(["fdim"]) == 2
    capsys.readouterr()


def test_environment_cutoff(monkeypatch, capsys):
    monkeypatch.setenv("LOOPALG_MAX_DEGREE", "7")
    status, out, _ = run(capsys, "fdim", path("s2"))
    assert status == 0 and "cutoff: 7" in out
    status, _, _ = run(capsys, "dlp", path("cp2_borel"), "--class", "1 ⊗ s_x*s_u*s_w")
    assert status == 2
    monkeypatch.setenv("LOOPALG_MAX_DEGREE", "lots")
    status, _, err = run(capsys, "fdim", path("s2"))
    assert status == 2 and "LOOPALG_MAX_DEGREE" in err


def test_ascii_output_is_ascii(capsys):
    for argv in (["shriek", path("cp2_borel")], ["scan", path("odd_s3"), "--max-degree", "3"],
                 ["render", path("cp2_borel")]):
        status, out, _ = run(capsys, *argv, "--ascii")
        assert status == 0
        out.encode("ascii")


def test_json_round_trip_and_determinism(capsys):
    argv = ["dlcop", path("cp2_borel"), "--class", "1 ⊗ s_u | 1 ⊗ 1", "--format", "json"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    rep = Report.from_json(first)
    assert rep.to_json() == first
    assert rep.results[0].terms[0] == Term("1", [["u^2", "1"]])


def test_text_and_json_carry_the_same_content(capsys):
    report, status = run_command(["scan", path("even_y2"), "--max-degree", "4"])
    assert status == 0
    text = render_report(report, "text")
    for c in report.checks:
        assert c.status in text and c.detail in text


def test_jobs_do_not_change_results(capsys):
    base = ["check", path("s2"), "--max-degree", "3", "--format", "json"]
    _, one, _ = run(capsys, *base)
    _, two, _ = run(capsys, *base, "--jobs", "2")
    a, b = json.loads(one), json.loads(two)
    assert a["checks"] == b["checks"]


def test_report_schema_guard():
    r = Report(["loopalg"], {"name": "m"}, 20, [Result("x", value="1")], [Check("c", 3, "PASS")])
    assert Report.from_dict(r.to_dict()) == r
    bad = r.to_dict()
    bad["schema"] = 99
    with pytest.raises(ValueError, match="schema"):
        Report.from_dict(bad)
    assert r.failed is False
    r.checks.append(Check("d", 3, "FAIL"))
    assert r.failed is True


def test_console_script():
    exe = shutil.which("loopalg")
    cmd = [exe] if exe else [sys.executable, "-m", "loopalg.cli"]
    out = subprocess.run(cmd + ["fdim", path("odd_x3z5")], capture_output=True, text=True)
    assert out.returncode == 0 and "fdim: 8" in out.stdout
