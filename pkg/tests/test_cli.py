import json

import pytest

from tiqca.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_step_right(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(["--boundary", "open", "run", "--state", "0023000", "--macro", "STEP_RIGHT", "--out", str(out)], capsys)
    report = json.loads(out.read_text())
    assert code == 0
    assert report["support"][0]["state"] == "0002300"
    assert report["level_counts"]["2"] == 1.0
    assert report["census"]["pointer_totals"] == [1]


def test_run_empty_program_echoes_input(tmp_path, capsys):
    prog = tmp_path / "empty.prog"
    prog.write_text("# nothing here\n")
    code, text, _ = run(["run", "--state", "0230", "--program", str(prog)], capsys)
    report = json.loads(text)
    assert code == 0 and report["support"][0]["state"] == "0230" and report["norm_drift"] == 0


def test_run_product_state(capsys):
    code, text, _ = run(["run", "--product", "0:0.8,5:0.6", "--m", "4", "--macro", "POINTER_CREATE"], capsys)
    report = json.loads(text)
    assert code == 0 and report["level_counts"]["5"] == pytest.approx(4 * 0.36)


def test_run_malformed_pulse(tmp_path, capsys):
    prog = tmp_path / "bad.prog"
    prog.write_text("SW 2 3\nLX 0 3 q +\n")
    out = tmp_path / "never.json"
    code, _, err = run(["run", "--state", "000", "--program", str(prog), "--out", str(out)], capsys)
    assert code == 2 and "line 2, column 8" in err
    assert not out.exists()


def test_run_guard_overflow(capsys):
    code, _, _ = run(["run", "--product", "0:0.5,2:0.5,3:0.5,4:0.5", "--m", "12", "--macro", "STEP_RIGHT"], capsys)
    assert code == 3


def test_run_needs_one_source(capsys):
    assert run(["run", "--macro", "STEP_RIGHT"], capsys)[0] == 2


def test_compile_outputs(tmp_path, capsys):
    empty = tmp_path / "e.circ"
    empty.write_text("qubits 2\n")
    code, text, _ = run(["compile", str(empty)], capsys)
    assert code == 0 and all(line.startswith("#") for line in text.splitlines())
    assert "# L_min = 8" in text
    xgate = tmp_path / "x.circ"
    xgate.write_text("qubits 1\ng 1 0 0 1 0 1 0 0 0\n")
    code, text, _ = run(["compile", str(xgate)], capsys)
    assert code == 0 and [ln.split()[0] for ln in text.splitlines() if not ln.startswith("#")] == ["ROT"] * 3


def test_compile_is_deterministic(tmp_path, capsys):
    circ = tmp_path / "c.circ"
    circ.write_text("qubits 3\ng 2 0.6 0 0.8 0 0.8 0 -0.6 0\ncx 1 3\nmeasure 2\n")
    first = run(["compile", str(circ)], capsys)[1]
    assert first == run(["compile", str(circ)], capsys)[1]


def test_compile_bad_qubit(tmp_path, capsys):
    circ = tmp_path / "bad.circ"
    circ.write_text("qubits 2\ng 3 1 0 0 0 0 0 1 0\n")
    assert run(["compile", str(circ)], capsys)[0] == 2


def test_ensemble_cli(tmp_path, capsys):
    circ = tmp_path / "xm.circ"
    circ.write_text("qubits 1\ng 1 0 0 1 0 1 0 0 0\nmeasure 1\n")
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    args = ["ensemble", str(circ), "--m", "300", "--eps", "0.05", "--n", "1", "--trials", "3", "--seed", "4"]
    assert run(args + ["--out", str(out1)], capsys)[0] == 0
    assert run(args + ["--out", str(out2)], capsys)[0] == 0
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    for key in ("m", "epsilon", "n", "trials", "seed", "partitions_mean", "working_mean", "predicted_partitions",
                "predicted_working", "m3_mean", "m4_mean", "m4_stderr", "skipped_count"):
        assert key in report


@pytest.mark.parametrize("extra", [["--eps", "1.5", "--trials", "2"], ["--eps", "0.1", "--trials", "0"]])
def test_ensemble_bad_params(extra, capsys):
    assert run(["ensemble", "--m", "100", "--n", "2", *extra], capsys)[0] == 2


def test_verify_protocols(capsys):
    code, text, _ = run(["verify", "protocols"], capsys)
    assert code == 0 and "23032" in text and "FAIL" not in text


def test_scaling_csv(capsys):
    code, text, _ = run(["scaling", "--n", "2", "10"], capsys)
    lines = text.splitlines()
    assert code == 0 and lines[0] == "n,epsilon,ratio,working_density" and lines[1].startswith("2,0.25,0.1001")
